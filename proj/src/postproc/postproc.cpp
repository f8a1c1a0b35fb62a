#include "postproc/postproc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "localexp/optimizer.hpp"

namespace lexstereo {

Array2D<uint8_t> lr_check(const LabelField& f, const LabelField& f_other, double threshold_px) {
  if (f.width() != f_other.width() || f.height() != f_other.height()) {
    throw std::invalid_argument("lr_check: field dimensions differ");
  }
  const int w = f.width(), h = f.height();
  const int sign = f.view() == View::left ? -1 : 1;
  Array2D<uint8_t> valid(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double d = f.disparity(x, y);
      const int mx = static_cast<int>(std::lround(x + sign * d));
      if (mx < 0 || mx >= w) continue;
      valid.at(x, y) = std::abs(d - f_other.disparity(mx, y)) <= threshold_px ? 1 : 0;
    }
  }
  return valid;
}

LabelField fill_invalid(const LabelField& f, const Array2D<uint8_t>& valid, bool* all_invalid) {
  const int w = f.width(), h = f.height();
  LabelField out = f;
  if (all_invalid) *all_invalid = false;

  std::vector<int> rows_with_valid;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (valid.at(x, y)) {
        rows_with_valid.push_back(y);
        break;
      }
    }
  }
  if (rows_with_valid.empty()) {
    if (all_invalid) *all_invalid = true;
    return out;
  }

  for (int y : rows_with_valid) {
    // Nearest valid label to the left/right of every pixel in this row.
    std::vector<const PlaneLabel*> left_of(w, nullptr), right_of(w, nullptr);
    const PlaneLabel* last = nullptr;
    for (int x = 0; x < w; ++x) {
      if (valid.at(x, y)) last = &f.at(x, y);
      left_of[x] = last;
    }
    last = nullptr;
    for (int x = w - 1; x >= 0; --x) {
      if (valid.at(x, y)) last = &f.at(x, y);
      right_of[x] = last;
    }
    for (int x = 0; x < w; ++x) {
      if (valid.at(x, y)) continue;
      const PlaneLabel* l = left_of[x];
      const PlaneLabel* r = right_of[x];
      if (l && r) {
        // Background preference: take the plane extrapolating lower here.
        out.at(x, y) = l->disparity_at(x, y) <= r->disparity_at(x, y) ? *l : *r;
      } else if (l) {
        out.at(x, y) = *l;
      } else {
        out.at(x, y) = *r;
      }
    }
  }

  // Rows with no valid pixel copy the nearest filled row wholesale.
  size_t cursor = 0;
  for (int y = 0; y < h; ++y) {
    while (cursor + 1 < rows_with_valid.size() &&
           std::abs(rows_with_valid[cursor + 1] - y) < std::abs(rows_with_valid[cursor] - y)) {
      ++cursor;
    }
    const int src = rows_with_valid[cursor];
    if (src == y) continue;
    bool row_has_valid = false;
    for (int x = 0; x < w && !row_has_valid; ++x) row_has_valid = valid.at(x, y) != 0;
    if (row_has_valid) continue;
    for (int x = 0; x < w; ++x) out.at(x, y) = out.at(x, src);
  }
  return out;
}

LabelField weighted_median(const LabelField& f, const StereoPair& pair,
                           const Array2D<uint8_t>& valid, int radius, double gamma_w,
                           int workers) {
  if (radius < 1) throw std::invalid_argument("weighted_median: radius must be >= 1");
  const int w = f.width(), h = f.height();
  const ColorImage& img = pair.image(f.view());
  LabelField out = f;

  parallel_for(h, workers, [&](int y, int) {
    std::vector<std::pair<double, double>> samples;  // (disparity at p, weight)
    std::vector<std::pair<int, int>> coords;
    samples.reserve((2 * radius + 1) * (2 * radius + 1));
    coords.reserve(samples.capacity());
    for (int x = 0; x < w; ++x) {
      if (valid.at(x, y)) continue;
      samples.clear();
      coords.clear();
      const float* cp = img.px(x, y);
      double total = 0.0;
      for (int qy = std::max(y - radius, 0); qy <= std::min(y + radius, h - 1); ++qy) {
        for (int qx = std::max(x - radius, 0); qx <= std::min(x + radius, w - 1); ++qx) {
          const float* cq = img.px(qx, qy);
          const double l1 = std::abs(static_cast<double>(cp[0]) - cq[0]) +
                            std::abs(static_cast<double>(cp[1]) - cq[1]) +
                            std::abs(static_cast<double>(cp[2]) - cq[2]);
          const double weight = std::exp(-l1 / gamma_w);
          samples.emplace_back(f.at(qx, qy).disparity_at(x, y), weight);
          coords.emplace_back(qx, qy);
          total += weight;
        }
      }
      // Weighted median by cumulative weight over disparity-sorted samples.
      std::vector<int> order(samples.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return samples[a].first < samples[b].first;
      });
      double acc = 0.0;
      int pick = order.back();
      for (int idx : order) {
        acc += samples[idx].second;
        if (acc >= 0.5 * total) {
          pick = idx;
          break;
        }
      }
      out.at(x, y) = f.at(coords[pick].first, coords[pick].second);
    }
  });
  return out;
}

void postprocess_pair(LabelField& left, LabelField& right, const StereoPair& pair,
                      const PostprocParams& params) {
  const Array2D<uint8_t> valid_left = lr_check(left, right, params.lr_threshold);
  const Array2D<uint8_t> valid_right = lr_check(right, left, params.lr_threshold);

  LabelField filled_left = fill_invalid(left, valid_left);
  LabelField filled_right = fill_invalid(right, valid_right);

  left = weighted_median(filled_left, pair, valid_left, params.median_radius,
                         params.median_gamma, params.workers);
  right = weighted_median(filled_right, pair, valid_right, params.median_radius,
                          params.median_gamma, params.workers);
}

}  // namespace lexstereo
