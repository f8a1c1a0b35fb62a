#include "core/plane_label.hpp"

#include <cmath>
#include <stdexcept>

namespace lexstereo {

PlaneLabel plane_from_world(double ap, double bp, double cp, double hp, double baseline,
                            double focal_length) {
  if (hp == 0.0) {
    throw std::invalid_argument("plane_from_world: degenerate world plane (hp == 0)");
  }
  return {baseline * ap / hp, baseline * bp / hp, baseline * focal_length * cp / hp};
}

PlaneLabel to_plane(const NormalDisparity& nd, double u, double v) {
  if (std::abs(nd.n.z) < kMinNormalZ) {
    throw std::invalid_argument("to_plane: normal too close to the image plane");
  }
  const double a = -nd.n.x / nd.n.z;
  const double b = -nd.n.y / nd.n.z;
  const double c = nd.d - a * u - b * v;
  return {a, b, c};
}

NormalDisparity from_plane(const PlaneLabel& label, double u, double v) {
  // (a, b, -1) is normal to the plane a*u + b*v - d + c = 0; flip to n_z > 0.
  const double inv_norm = 1.0 / std::sqrt(label.a * label.a + label.b * label.b + 1.0);
  NormalDisparity nd;
  nd.n = {-label.a * inv_norm, -label.b * inv_norm, inv_norm};
  nd.d = label.disparity_at(u, v);
  return nd;
}

Vec3 random_unit_normal(Rng& rng) {
  for (;;) {
    Vec3 n = rng.unit_vector();
    if (std::abs(n.z) < kMinNormalZ) continue;
    if (n.z < 0) n = n * -1.0;
    return n;
  }
}

PlaneLabel random_plane(Rng& rng, double u, double v, double disp_max) {
  NormalDisparity nd;
  nd.d = rng.uniform() * disp_max;
  nd.n = random_unit_normal(rng);
  return to_plane(nd, u, v);
}

}  // namespace lexstereo
