#include "core/stereo_pair.hpp"

#include <stdexcept>

namespace lexstereo {

void MatchParams::validate() const {
  if (tau_col < 0 || tau_grad < 0) {
    throw std::invalid_argument("MatchParams: truncation thresholds must be >= 0");
  }
  if (alpha_blend < 0 || alpha_blend > 1) {
    throw std::invalid_argument("MatchParams: alpha_blend must lie in [0,1]");
  }
  if (window_radius < 1) {
    throw std::invalid_argument("MatchParams: window_radius must be >= 1");
  }
  if (regression_radius != window_radius / 2) {
    throw std::invalid_argument("MatchParams: regression_radius must equal window_radius / 2");
  }
  if (e <= 0) {
    throw std::invalid_argument("MatchParams: e must be > 0");
  }
}

void SmoothParams::validate() const {
  if (lambda < 0) throw std::invalid_argument("SmoothParams: lambda must be >= 0");
  if (tau_dis <= 0) throw std::invalid_argument("SmoothParams: tau_dis must be > 0");
  if (eps <= 0 || eps > 1) throw std::invalid_argument("SmoothParams: eps must lie in (0,1]");
  if (gamma <= 0) throw std::invalid_argument("SmoothParams: gamma must be > 0");
  if (neighborhood != 4 && neighborhood != 8) {
    throw std::invalid_argument("SmoothParams: neighborhood must be 4 or 8");
  }
}

Array2D<float> grayscale(const ColorImage& img) {
  Array2D<float> out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    float* dst = out.row(y);
    for (int x = 0; x < img.width(); ++x) {
      const float* p = img.px(x, y);
      dst[x] = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
    }
  }
  return out;
}

Array2D<float> gradient_x(const Array2D<float>& gray) {
  const int w = gray.width(), h = gray.height();
  Array2D<float> out(w, h);
  for (int y = 0; y < h; ++y) {
    const float* src = gray.row(y);
    float* dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      const float lo = src[std::max(x - 1, 0)];
      const float hi = src[std::min(x + 1, w - 1)];
      dst[x] = 0.5f * (hi - lo);
    }
  }
  return out;
}

StereoPair StereoPair::create(ColorImage left, ColorImage right, double disp_max) {
  if (left.width() != right.width() || left.height() != right.height()) {
    throw std::invalid_argument("StereoPair: left/right dimensions differ");
  }
  if (left.width() <= 0 || left.height() <= 0) {
    throw std::invalid_argument("StereoPair: empty images");
  }
  if (disp_max <= 0) {
    throw std::invalid_argument("StereoPair: disp_max must be > 0");
  }
  StereoPair pair;
  pair.width = left.width();
  pair.height = left.height();
  pair.disp_max = disp_max;
  pair.grad_x_left = gradient_x(grayscale(left));
  pair.grad_x_right = gradient_x(grayscale(right));
  pair.left = std::move(left);
  pair.right = std::move(right);
  return pair;
}

}  // namespace lexstereo
