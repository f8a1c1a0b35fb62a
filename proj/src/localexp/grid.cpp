#include "localexp/grid.hpp"

#include <stdexcept>

namespace lexstereo {

std::vector<GridLevel> build_grids(int width, int height, std::span<const int> cell_sizes) {
  if (cell_sizes.empty()) throw std::invalid_argument("build_grids: need at least one level");
  std::vector<GridLevel> grids;
  grids.reserve(cell_sizes.size());
  for (int cs : cell_sizes) {
    if (cs < 1) throw std::invalid_argument("build_grids: cell size must be >= 1");
    GridLevel g;
    g.cell_size = cs;
    g.width = width;
    g.height = height;
    g.cells_x = (width + cs - 1) / cs;
    g.cells_y = (height + cs - 1) / cs;
    grids.push_back(g);
  }
  return grids;
}

Rect expansion_region(const GridLevel& grid, int i, int j) {
  if (i < 0 || i >= grid.cells_x || j < 0 || j >= grid.cells_y) {
    throw std::invalid_argument("expansion_region: cell index out of range");
  }
  const Rect lo = grid.cell(std::max(i - 1, 0), std::max(j - 1, 0));
  const Rect hi = grid.cell(std::min(i + 1, grid.cells_x - 1), std::min(j + 1, grid.cells_y - 1));
  return {lo.x0, lo.y0, hi.x1, hi.y1};
}

ExpansionUnit make_unit(const GridLevel& grid, int level, int i, int j) {
  ExpansionUnit u;
  u.level = level;
  u.i = i;
  u.j = j;
  u.center = grid.cell(i, j);
  u.region = expansion_region(grid, i, j);
  u.group = group_index(i, j);
  return u;
}

}  // namespace lexstereo
