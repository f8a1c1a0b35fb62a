#pragma once

#include <span>
#include <vector>

#include "core/image.hpp"

namespace lexstereo {

// One square-cell decomposition of the image; the last row/column of cells
// may be smaller.
struct GridLevel {
  int cell_size = 0;
  int cells_x = 0;
  int cells_y = 0;
  int width = 0;
  int height = 0;

  Rect cell(int i, int j) const {
    return {i * cell_size, j * cell_size, std::min((i + 1) * cell_size, width),
            std::min((j + 1) * cell_size, height)};
  }
};

std::vector<GridLevel> build_grids(int width, int height, std::span<const int> cell_sizes);

// Disjoint-group index: expansions at every fourth cell in each axis share a
// group and never interact.
inline int group_index(int i, int j) { return 4 * (j % 4) + (i % 4); }

// 3x3-cell neighborhood of cell (i,j), clipped at the grid border.
Rect expansion_region(const GridLevel& grid, int i, int j);

// One local expansion: candidate labels are drawn from `center` and may be
// adopted anywhere in `region`.
struct ExpansionUnit {
  int level = 0;
  int i = 0, j = 0;
  Rect center;
  Rect region;
  int group = 0;
};

ExpansionUnit make_unit(const GridLevel& grid, int level, int i, int j);

}  // namespace lexstereo
