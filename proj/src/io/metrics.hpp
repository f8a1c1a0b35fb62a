#pragma once

#include "core/image.hpp"
#include "io/png_io.hpp"

namespace lexstereo {

// Percentage of masked pixels whose disparity error exceeds threshold_px.
// Pixels with non-finite ground truth are excluded from the mask; an empty
// effective mask is an error.
double bad_rate(const Array2D<float>& est, const Array2D<float>& gt,
                const Array2D<uint8_t>& mask, double threshold_px);

// Linear map of [0, disp_max] onto a fixed perceptual color ramp;
// non-finite or negative disparities render black.
Rgb8Image colorize(const Array2D<float>& disparity, double disp_max);

}  // namespace lexstereo
