#include <cmath>
#include <stdexcept>

#include "energy/energy_model.hpp"

namespace lexstereo {

void box_sum(const Array2D<double>& src, int radius, Array2D<double>& out,
             std::vector<double>& prefix) {
  const int w = src.width(), h = src.height();
  if (out.width() != w || out.height() != h) out.reset(w, h);

  // Horizontal pass via row prefix sums.
  prefix.resize(static_cast<size_t>(w) + 1);
  for (int y = 0; y < h; ++y) {
    const double* row = src.row(y);
    prefix[0] = 0.0;
    for (int x = 0; x < w; ++x) prefix[x + 1] = prefix[x] + row[x];
    double* dst = out.row(y);
    for (int x = 0; x < w; ++x) {
      dst[x] = prefix[std::min(x + radius + 1, w)] - prefix[std::max(x - radius, 0)];
    }
  }

  // Vertical pass via column prefix sums, in place.
  prefix.resize(static_cast<size_t>(h) + 1);
  std::vector<double> col(h);
  for (int x = 0; x < w; ++x) {
    prefix[0] = 0.0;
    for (int y = 0; y < h; ++y) prefix[y + 1] = prefix[y] + out.at(x, y);
    for (int y = 0; y < h; ++y) {
      col[y] = prefix[std::min(y + radius + 1, h)] - prefix[std::max(y - radius, 0)];
    }
    for (int y = 0; y < h; ++y) out.at(x, y) = col[y];
  }
}

Array2D<double> EnergyModel::guided_weights_naive(int pu, int pv, Rect* support) const {
  const int r = match_.window_radius;
  const int rr = match_.regression_radius;
  const Rect window = Rect{pu, pv, pu + 1, pv + 1}.dilated(r).clipped(bounds());
  if (support) *support = window;

  const int nominal = (2 * rr + 1) * (2 * rr + 1);
  const double norm = 1.0 / (static_cast<double>(nominal) * nominal);
  const Vec3 ip = guide_vec(pu, pv);

  Array2D<double> weights(window.width(), window.height());
  for (int sy = window.y0; sy < window.y1; ++sy) {
    for (int sx = window.x0; sx < window.x1; ++sx) {
      // Regression windows containing both p and s.
      const Rect shared = Rect{std::max(pu, sx) - rr, std::max(pv, sy) - rr,
                               std::min(pu, sx) + rr + 1, std::min(pv, sy) + rr + 1}
                              .clipped(bounds());
      const Vec3 is = guide_vec(sx, sy);
      double sum = 0.0;
      for (int ky = shared.y0; ky < shared.y1; ++ky) {
        for (int kx = shared.x0; kx < shared.x1; ++kx) {
          const Vec3 mu = window_mean(kx, ky);
          sum += 1.0 + (ip - mu).dot(window_inv_cov(kx, ky).apply(is - mu));
        }
      }
      weights.at(sx - window.x0, sy - window.y0) = sum * norm;
    }
  }
  return weights;
}

double EnergyModel::data_term_naive(const PlaneLabel& label, int pu, int pv) const {
  Rect window;
  const Array2D<double> weights = guided_weights_naive(pu, pv, &window);
  double sum = 0.0;
  for (int sy = window.y0; sy < window.y1; ++sy) {
    for (int sx = window.x0; sx < window.x1; ++sx) {
      sum += weights.at(sx - window.x0, sy - window.y0) * raw_cost(label, sx, sy);
    }
  }
  const double dp = label.disparity_at(pu, pv);
  if (dp < 0.0 || dp > pair_->disp_max) return cost_ceiling();
  return sum;
}

CostSlice EnergyModel::region_data_costs(const PlaneLabel& label, const Rect& region) const {
  CostSlice slice;
  RegionScratch scratch;
  region_data_costs(label, region, slice, scratch);
  return slice;
}

void EnergyModel::region_data_costs(const PlaneLabel& label, const Rect& region, CostSlice& out,
                                    RegionScratch& scratch) const {
  if (region.empty() || !bounds().contains(region)) {
    throw std::invalid_argument("region_data_costs: region must be a non-empty sub-rectangle");
  }
  const int r = match_.window_radius;
  const int rr = match_.regression_radius;
  const Rect m = region.dilated(r).clipped(bounds());
  const Rect k = region.dilated(rr).clipped(bounds());
  const int mw = m.width(), mh = m.height();

  auto fit = [&](Array2D<double>& a) {
    if (a.width() != mw || a.height() != mh) a.reset(mw, mh);
  };
  fit(scratch.rho);
  for (auto& g : scratch.grho) fit(g);

  // Pixelwise costs of the shared label over M, plus guide-weighted copies.
  const RawCostFn& cost = *raw_cost_fn_;
  for (int y = m.y0; y < m.y1; ++y) {
    double* rho_row = scratch.rho.row(y - m.y0);
    cost.row_costs(y, m.x0, m.x1, label.a, label.b * y + label.c, rho_row);
    double* g0 = scratch.grho[0].row(y - m.y0);
    double* g1 = scratch.grho[1].row(y - m.y0);
    double* g2 = scratch.grho[2].row(y - m.y0);
    const double* guide0 = guide_[0].row(y) + m.x0;
    const double* guide1 = guide_[1].row(y) + m.x0;
    const double* guide2 = guide_[2].row(y) + m.x0;
    for (int i = 0; i < mw; ++i) {
      const double rho = rho_row[i];
      g0[i] = guide0[i] * rho;
      g1[i] = guide1[i] * rho;
      g2[i] = guide2[i] * rho;
    }
  }

  // Windows of pixels in K never reach past M, so box sums over the M-sized
  // arrays equal image-clipped window sums wherever they are read.
  box_sum(scratch.rho, rr, scratch.sum_rho, scratch.prefix);
  for (int ch = 0; ch < 3; ++ch) {
    box_sum(scratch.grho[ch], rr, scratch.sum_grho[ch], scratch.prefix);
  }

  for (auto& a : scratch.lin_a) fit(a);
  fit(scratch.lin_b);
  for (int y = k.y0; y < k.y1; ++y) {
    for (int x = k.x0; x < k.x1; ++x) {
      const int lx = x - m.x0, ly = y - m.y0;
      const double s = scratch.sum_rho.at(lx, ly);
      const Vec3 v{scratch.sum_grho[0].at(lx, ly), scratch.sum_grho[1].at(lx, ly),
                   scratch.sum_grho[2].at(lx, ly)};
      const Vec3 mu = window_mean(x, y);
      const Vec3 a = window_inv_cov(x, y).apply(v - mu * s);
      scratch.lin_a[0].at(lx, ly) = a.x;
      scratch.lin_a[1].at(lx, ly) = a.y;
      scratch.lin_a[2].at(lx, ly) = a.z;
      scratch.lin_b.at(lx, ly) = s - mu.dot(a);
    }
  }

  for (int ch = 0; ch < 3; ++ch) {
    box_sum(scratch.lin_a[ch], rr, scratch.sum_a[ch], scratch.prefix);
  }
  box_sum(scratch.lin_b, rr, scratch.sum_b, scratch.prefix);

  const int nominal = (2 * rr + 1) * (2 * rr + 1);
  const double norm = 1.0 / (static_cast<double>(nominal) * nominal);
  const double ceiling = cost.ceiling();
  const double disp_max = pair_->disp_max;

  out.region = region;
  out.raw_region = m;
  out.raw = scratch.rho;
  if (out.aggregated.width() != region.width() || out.aggregated.height() != region.height()) {
    out.aggregated.reset(region.width(), region.height());
  }
  for (int y = region.y0; y < region.y1; ++y) {
    for (int x = region.x0; x < region.x1; ++x) {
      const int lx = x - m.x0, ly = y - m.y0;
      double phi = scratch.sum_b.at(lx, ly);
      phi += guide_[0].at(x, y) * scratch.sum_a[0].at(lx, ly);
      phi += guide_[1].at(x, y) * scratch.sum_a[1].at(lx, ly);
      phi += guide_[2].at(x, y) * scratch.sum_a[2].at(lx, ly);
      phi *= norm;
      const double dp = label.disparity_at(x, y);
      if (dp < 0.0 || dp > disp_max) phi = ceiling;
      out.aggregated.at(x - region.x0, y - region.y0) = phi;
    }
  }
}

double EnergyModel::data_term(const PlaneLabel& label, int pu, int pv) const {
  RegionScratch scratch;
  return data_term(label, pu, pv, scratch);
}

double EnergyModel::data_term(const PlaneLabel& label, int pu, int pv,
                              RegionScratch& scratch) const {
  region_data_costs(label, {pu, pv, pu + 1, pv + 1}, scratch.slice, scratch);
  return scratch.slice.phi(pu, pv);
}

}  // namespace lexstereo
