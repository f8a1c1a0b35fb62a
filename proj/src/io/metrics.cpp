#include "io/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace lexstereo {

double bad_rate(const Array2D<float>& est, const Array2D<float>& gt,
                const Array2D<uint8_t>& mask, double threshold_px) {
  if (est.width() != gt.width() || est.height() != gt.height() ||
      est.width() != mask.width() || est.height() != mask.height()) {
    throw std::invalid_argument("bad_rate: dimension mismatch");
  }
  long long total = 0, bad = 0;
  for (int y = 0; y < est.height(); ++y) {
    for (int x = 0; x < est.width(); ++x) {
      if (!mask.at(x, y)) continue;
      const float g = gt.at(x, y);
      if (!std::isfinite(g)) continue;
      ++total;
      if (std::abs(est.at(x, y) - g) > threshold_px) ++bad;
    }
  }
  if (total == 0) throw std::invalid_argument("bad_rate: empty evaluation mask");
  return 100.0 * static_cast<double>(bad) / static_cast<double>(total);
}

namespace {

// Dark-blue to yellow ramp, perceptually even enough for disparity maps.
constexpr uint8_t kRamp[][3] = {
    {68, 1, 84},   {71, 44, 122},  {59, 81, 139},  {44, 113, 142}, {33, 144, 141},
    {39, 173, 129}, {92, 200, 99},  {170, 220, 50}, {253, 231, 37},
};
constexpr int kRampSize = static_cast<int>(sizeof(kRamp) / sizeof(kRamp[0]));

}  // namespace

Rgb8Image colorize(const Array2D<float>& disparity, double disp_max) {
  if (disp_max <= 0) throw std::invalid_argument("colorize: disp_max must be > 0");
  Rgb8Image out;
  out.width = disparity.width();
  out.height = disparity.height();
  out.data.assign(static_cast<size_t>(out.width) * out.height * 3, 0);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      const float d = disparity.at(x, y);
      if (!std::isfinite(d) || d < 0) continue;  // stays black
      const double t = std::min(d / disp_max, 1.0) * (kRampSize - 1);
      const int i = std::min(static_cast<int>(t), kRampSize - 2);
      const double frac = t - i;
      uint8_t* p = out.px(x, y);
      for (int c = 0; c < 3; ++c) {
        p[c] = static_cast<uint8_t>(std::lround(kRamp[i][c] + frac * (kRamp[i + 1][c] - kRamp[i][c])));
      }
    }
  }
  return out;
}

}  // namespace lexstereo
