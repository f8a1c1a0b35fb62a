#pragma once

#include "core/label_field.hpp"
#include "core/rng.hpp"

namespace lexstereo {

struct RansacParams {
  double inlier_threshold = 1.0;  // pixels of disparity
  int hypotheses = 32;
  int max_sample_attempts = 64;
};

// Current label of a pixel drawn uniformly from the cell.
PlaneLabel propose_propagation(const LabelField& f, const Rect& cell, Rng& rng);

// Locally-optimized RANSAC plane fit to the cell's current disparities:
// random 3-point hypotheses scored by inlier count, then one least-squares
// refit on the best hypothesis' inliers. Falls back to propagation when the
// cell is too small or every sample is degenerate.
PlaneLabel propose_ransac(const LabelField& f, const Rect& cell, const RansacParams& params,
                          Rng& rng);

// Re-parameterizes at (u,v) into disparity + normal, jitters the disparity
// by uniform(-rd, rd) clamped to [0, disp_max] and the normal by a random
// direction of length rn, and converts back.
PlaneLabel perturb_label(const PlaneLabel& label, double u, double v, double rd, double rn,
                         double disp_max, Rng& rng);

}  // namespace lexstereo
