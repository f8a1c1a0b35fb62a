#pragma once

#include "core/label_field.hpp"
#include "core/stereo_pair.hpp"

namespace lexstereo {

struct PostprocParams {
  double lr_threshold = 1.0;  // pixels
  int median_radius = 17;
  double median_gamma = 10.0;  // color sensitivity of the median weights
  int workers = 1;
};

// Cross-view consistency: pixel p of `f` is valid when its disparity agrees
// (within threshold) with the other view's disparity at the matching point,
// and that point lies inside the image.
Array2D<uint8_t> lr_check(const LabelField& f, const LabelField& f_other, double threshold_px);

// Fills invalid pixels from the nearest valid labels on the same scanline,
// preferring the one whose plane extrapolates to the lower disparity.
// Scanlines without any valid pixel copy the nearest filled scanline. When
// nothing is valid anywhere the field is returned unchanged and
// *all_invalid is set.
LabelField fill_invalid(const LabelField& f, const Array2D<uint8_t>& valid,
                        bool* all_invalid = nullptr);

// Replaces each originally-invalid pixel by the window label whose
// extrapolated disparity is the bilateral-weighted median at that pixel.
LabelField weighted_median(const LabelField& f, const StereoPair& pair,
                           const Array2D<uint8_t>& valid, int radius, double gamma_w,
                           int workers = 1);

// Full pipeline over both views: consistency check, fill, weighted median.
void postprocess_pair(LabelField& left, LabelField& right, const StereoPair& pair,
                      const PostprocParams& params);

}  // namespace lexstereo
