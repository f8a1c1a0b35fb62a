#pragma once

#include "core/image.hpp"
#include "core/params.hpp"
#include "core/plane_label.hpp"

namespace lexstereo {

// Per-pixel plane assignment for one view (the solution f). The optimizer
// guarantees that concurrent writers touch disjoint regions.
class LabelField {
public:
  LabelField() = default;
  LabelField(int width, int height, View view)
      : width_(width), height_(height), view_(view),
        labels_(static_cast<size_t>(width) * height) {}

  int width() const { return width_; }
  int height() const { return height_; }
  View view() const { return view_; }
  Rect bounds() const { return {0, 0, width_, height_}; }

  PlaneLabel& at(int x, int y) { return labels_[static_cast<size_t>(y) * width_ + x]; }
  const PlaneLabel& at(int x, int y) const {
    return labels_[static_cast<size_t>(y) * width_ + x];
  }

  double disparity(int x, int y) const { return at(x, y).disparity_at(x, y); }

  const std::vector<PlaneLabel>& labels() const { return labels_; }

  Array2D<float> disparity_map() const {
    Array2D<float> d(width_, height_);
    for (int y = 0; y < height_; ++y)
      for (int x = 0; x < width_; ++x) d.at(x, y) = static_cast<float>(disparity(x, y));
    return d;
  }

private:
  int width_ = 0;
  int height_ = 0;
  View view_ = View::left;
  std::vector<PlaneLabel> labels_;
};

}  // namespace lexstereo
