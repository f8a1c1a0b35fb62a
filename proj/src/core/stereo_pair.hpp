#pragma once

#include "core/image.hpp"
#include "core/params.hpp"

namespace lexstereo {

// A rectified stereo pair with the derived per-view grayscale x-gradients.
// Immutable after construction.
struct StereoPair {
  ColorImage left;
  ColorImage right;
  Array2D<float> grad_x_left;
  Array2D<float> grad_x_right;
  int width = 0;
  int height = 0;
  double disp_max = 0;

  const ColorImage& image(View v) const { return v == View::left ? left : right; }
  const Array2D<float>& grad_x(View v) const {
    return v == View::left ? grad_x_left : grad_x_right;
  }

  // Builds a pair from two equally-sized color images; computes gradients.
  // Throws std::invalid_argument on dimension mismatch or disp_max <= 0.
  static StereoPair create(ColorImage left, ColorImage right, double disp_max);
};

// Luminance conversion (0.299, 0.587, 0.114), values stay in [0,255].
Array2D<float> grayscale(const ColorImage& img);

// Horizontal gradient with the 1x3 kernel [-0.5, 0, 0.5], replicate borders.
Array2D<float> gradient_x(const Array2D<float>& gray);

}  // namespace lexstereo
