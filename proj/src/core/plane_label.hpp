#pragma once

#include "core/image.hpp"
#include "core/rng.hpp"

namespace lexstereo {

// Smallest admissible |n_z| of a plane normal. Normals closer to the image
// plane would produce disparity slopes that overflow any warp.
inline constexpr double kMinNormalZ = 1e-4;

// A disparity plane d(u,v) = a*u + b*v + c. This is the per-pixel label.
struct PlaneLabel {
  double a = 0, b = 0, c = 0;

  double disparity_at(double u, double v) const { return a * u + b * v + c; }

  bool operator==(const PlaneLabel&) const = default;
};

inline double disparity_at(const PlaneLabel& label, double u, double v) {
  return label.disparity_at(u, v);
}

// A plane expressed as a unit normal (n_z > 0) plus the disparity at a
// reference pixel. This is the parameterization used for sampling and
// perturbing labels.
struct NormalDisparity {
  Vec3 n{0, 0, 1};
  double d = 0;
};

// Converts a 3D world plane ap*x + bp*y + cp*z = hp into the disparity plane
// it induces in a rectified pair with baseline B and focal length fl.
// Throws std::invalid_argument when hp == 0 (plane through the origin).
PlaneLabel plane_from_world(double ap, double bp, double cp, double hp, double baseline,
                            double focal_length);

// Normal/disparity form -> plane coefficients, anchored so that
// disparity_at(result, u, v) == nd.d exactly.
// Throws std::invalid_argument when |n_z| < kMinNormalZ.
PlaneLabel to_plane(const NormalDisparity& nd, double u, double v);

// Inverse of to_plane at the same reference pixel. The returned normal is the
// n_z > 0 representative of the two-fold sign ambiguity.
NormalDisparity from_plane(const PlaneLabel& label, double u, double v);

// Uniform random plane: disparity uniform in [0, disp_max] at (u,v), normal
// uniform on the sphere conditioned on |n_z| >= kMinNormalZ.
PlaneLabel random_plane(Rng& rng, double u, double v, double disp_max);

// Random unit normal with |n_z| >= kMinNormalZ, sign-normalized to n_z > 0.
Vec3 random_unit_normal(Rng& rng);

}  // namespace lexstereo
