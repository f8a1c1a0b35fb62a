#include "localexp/proposers.hpp"

#include <cmath>

namespace lexstereo {

namespace {

struct CellPoint {
  double u, v, d;
};

// Interpolating plane through three points; false when near-collinear.
bool plane_through(const CellPoint& p0, const CellPoint& p1, const CellPoint& p2,
                   PlaneLabel& out) {
  const double u1 = p1.u - p0.u, v1 = p1.v - p0.v, d1 = p1.d - p0.d;
  const double u2 = p2.u - p0.u, v2 = p2.v - p0.v, d2 = p2.d - p0.d;
  const double det = u1 * v2 - u2 * v1;
  if (std::abs(det) < 1e-9) return false;
  out.a = (d1 * v2 - d2 * v1) / det;
  out.b = (u1 * d2 - u2 * d1) / det;
  out.c = p0.d - out.a * p0.u - out.b * p0.v;
  return std::isfinite(out.a) && std::isfinite(out.b) && std::isfinite(out.c);
}

// Least-squares plane through a point set via 3x3 normal equations.
bool fit_plane(const std::vector<CellPoint>& pts, const std::vector<int>& idx,
               PlaneLabel& out) {
  double suu = 0, suv = 0, su = 0, svv = 0, sv = 0, n = 0;
  double sud = 0, svd = 0, sd = 0;
  for (int i : idx) {
    const CellPoint& p = pts[i];
    suu += p.u * p.u;
    suv += p.u * p.v;
    su += p.u;
    svv += p.v * p.v;
    sv += p.v;
    sud += p.u * p.d;
    svd += p.v * p.d;
    sd += p.d;
    n += 1;
  }
  const Sym3 m{suu, suv, su, svv, sv, n};
  const double det = m.xx * (m.yy * m.zz - m.yz * m.yz) - m.xy * (m.xy * m.zz - m.yz * m.xz) +
                     m.xz * (m.xy * m.yz - m.yy * m.xz);
  if (std::abs(det) < 1e-9) return false;
  const Vec3 sol = m.inverse().apply({sud, svd, sd});
  out = {sol.x, sol.y, sol.z};
  return std::isfinite(out.a) && std::isfinite(out.b) && std::isfinite(out.c);
}

}  // namespace

PlaneLabel propose_propagation(const LabelField& f, const Rect& cell, Rng& rng) {
  const int x = cell.x0 + rng.uniform_int(cell.width());
  const int y = cell.y0 + rng.uniform_int(cell.height());
  return f.at(x, y);
}

PlaneLabel propose_ransac(const LabelField& f, const Rect& cell, const RansacParams& params,
                          Rng& rng) {
  const int count = static_cast<int>(cell.area());
  if (count < 3) return propose_propagation(f, cell, rng);

  std::vector<CellPoint> pts;
  pts.reserve(count);
  for (int y = cell.y0; y < cell.y1; ++y)
    for (int x = cell.x0; x < cell.x1; ++x) {
      pts.push_back({static_cast<double>(x), static_cast<double>(y),
                     f.at(x, y).disparity_at(x, y)});
    }

  // Truncated squared residuals discriminate better than inlier counts when
  // the current field is smooth; lower is better.
  const double thr = params.inlier_threshold;
  auto score = [&](const PlaneLabel& hyp) {
    double s = 0;
    for (const CellPoint& p : pts) {
      const double r = hyp.disparity_at(p.u, p.v) - p.d;
      s += std::min(r * r, thr * thr);
    }
    return s;
  };

  PlaneLabel best{};
  double best_score = 1e300;
  int attempts = 0;
  for (int h = 0; h < params.hypotheses; ++h) {
    PlaneLabel hyp;
    bool ok = false;
    while (!ok && attempts < params.max_sample_attempts + params.hypotheses) {
      ++attempts;
      const int i0 = rng.uniform_int(count);
      const int i1 = rng.uniform_int(count);
      const int i2 = rng.uniform_int(count);
      if (i0 == i1 || i1 == i2 || i0 == i2) continue;
      ok = plane_through(pts[i0], pts[i1], pts[i2], hyp);
    }
    if (!ok) break;
    const double s = score(hyp);
    if (s < best_score) {
      best_score = s;
      best = hyp;
    }
  }
  if (best_score >= 1e300) return propose_propagation(f, cell, rng);

  // Local optimization: iterated least-squares refits on the consensus set.
  PlaneLabel model = best;
  for (int round = 0; round < 2; ++round) {
    std::vector<int> inlier_idx;
    for (int i = 0; i < count; ++i) {
      if (std::abs(model.disparity_at(pts[i].u, pts[i].v) - pts[i].d) <= thr) {
        inlier_idx.push_back(i);
      }
    }
    PlaneLabel refit;
    if (inlier_idx.size() < 3 || !fit_plane(pts, inlier_idx, refit)) break;
    if (score(refit) <= score(model)) {
      model = refit;
    } else {
      break;
    }
  }
  return model;
}

PlaneLabel perturb_label(const PlaneLabel& label, double u, double v, double rd, double rn,
                         double disp_max, Rng& rng) {
  NormalDisparity nd = from_plane(label, u, v);
  double d = nd.d + rng.uniform(-rd, rd);
  d = std::min(std::max(d, 0.0), disp_max);

  Vec3 n = nd.n;
  if (rn > 0) {
    for (;;) {
      Vec3 cand = nd.n + rng.unit_vector() * rn;
      const double norm = cand.norm();
      if (norm < 1e-12) continue;
      cand = cand * (1.0 / norm);
      if (std::abs(cand.z) < kMinNormalZ) continue;
      if (cand.z < 0) cand = cand * -1.0;
      n = cand;
      break;
    }
  }
  return to_plane({n, d}, u, v);
}

}  // namespace lexstereo
