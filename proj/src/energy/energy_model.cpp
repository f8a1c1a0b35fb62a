#include "energy/energy_model.hpp"

#include <cmath>
#include <stdexcept>

namespace lexstereo {

EnergyModel::EnergyModel(std::shared_ptr<const StereoPair> pair, MatchParams match,
                         SmoothParams smooth, View view)
    : pair_(std::move(pair)), match_(match), smooth_(smooth), view_(view) {
  if (!pair_) throw std::invalid_argument("EnergyModel: null stereo pair");
  match_.validate();
  smooth_.validate();
  raw_cost_fn_ = std::make_shared<PhotoConsistencyCost>(*pair_, match_, view_);
  precompute_guidance();
  precompute_edge_weights();
}

void EnergyModel::set_raw_cost(std::shared_ptr<const RawCostFn> fn) {
  if (!fn) throw std::invalid_argument("EnergyModel: null raw-cost hook");
  raw_cost_fn_ = std::move(fn);
}

void EnergyModel::precompute_guidance() {
  const int w = pair_->width, h = pair_->height;
  const ColorImage& img = pair_->image(view_);
  const int r = match_.regression_radius;

  for (int ch = 0; ch < 3; ++ch) guide_[ch].reset(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float* p = img.px(x, y);
      guide_[0].at(x, y) = p[0] / 255.0;
      guide_[1].at(x, y) = p[1] / 255.0;
      guide_[2].at(x, y) = p[2] / 255.0;
    }
  }

  win_count_.reset(w, h);
  for (int y = 0; y < h; ++y) {
    const int cy = std::min(y + r, h - 1) - std::max(y - r, 0) + 1;
    for (int x = 0; x < w; ++x) {
      const int cx = std::min(x + r, w - 1) - std::max(x - r, 0) + 1;
      win_count_.at(x, y) = cx * cy;
    }
  }

  std::vector<double> prefix;
  Array2D<double> sums[3], prod;
  Array2D<double> cov[6];
  for (int ch = 0; ch < 3; ++ch) {
    box_sum(guide_[ch], r, sums[ch], prefix);
    mean_[ch].reset(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) mean_[ch].at(x, y) = sums[ch].at(x, y) / win_count_.at(x, y);
  }

  // Covariance entries in the order xx, xy, xz, yy, yz, zz.
  static constexpr int kIdx[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  Array2D<double> tmp(w, h);
  for (int k = 0; k < 6; ++k) {
    const int a = kIdx[k][0], b = kIdx[k][1];
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) tmp.at(x, y) = guide_[a].at(x, y) * guide_[b].at(x, y);
    box_sum(tmp, r, prod, prefix);
    cov[k].reset(w, h);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        cov[k].at(x, y) =
            prod.at(x, y) / win_count_.at(x, y) - mean_[a].at(x, y) * mean_[b].at(x, y);
      }
  }

  inv_cov_.reset(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      Sym3 s{cov[0].at(x, y), cov[1].at(x, y), cov[2].at(x, y),
             cov[3].at(x, y), cov[4].at(x, y), cov[5].at(x, y)};
      inv_cov_.at(x, y) = s.plus_diagonal(match_.e).inverse();
    }
}

void EnergyModel::precompute_edge_weights() {
  if (smooth_.neighborhood == 4) {
    pair_dirs_ = {{1, 0}, {0, 1}};
  } else {
    pair_dirs_ = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
  }
  const int w = pair_->width, h = pair_->height;
  edge_weights_.assign(pair_dirs_.size(), Array2D<double>(w, h));
  for (size_t d = 0; d < pair_dirs_.size(); ++d) {
    const auto [dx, dy] = pair_dirs_[d];
    for (int y = 0; y < h; ++y) {
      const int qy = y + dy;
      if (qy < 0 || qy >= h) continue;
      for (int x = 0; x < w; ++x) {
        const int qx = x + dx;
        if (qx < 0 || qx >= w) continue;
        edge_weights_[d].at(x, y) = std::max(smooth_weight(x, y, qx, qy), smooth_.eps);
      }
    }
  }
}

double EnergyModel::smooth_weight(int pu, int pv, int qu, int qv) const {
  const ColorImage& img = pair_->image(view_);
  const float* p = img.px(pu, pv);
  const float* q = img.px(qu, qv);
  const double l1 = std::abs(static_cast<double>(p[0]) - q[0]) +
                    std::abs(static_cast<double>(p[1]) - q[1]) +
                    std::abs(static_cast<double>(p[2]) - q[2]);
  return std::exp(-l1 / smooth_.gamma);
}

double EnergyModel::pairwise_term(int pu, int pv, int qu, int qv, const PlaneLabel& fp,
                                  const PlaneLabel& fq) const {
  const double psi = std::abs(fp.disparity_at(pu, pv) - fq.disparity_at(pu, pv)) +
                     std::abs(fq.disparity_at(qu, qv) - fp.disparity_at(qu, qv));
  return std::max(smooth_weight(pu, pv, qu, qv), smooth_.eps) * std::min(psi, smooth_.tau_dis);
}

double EnergyModel::smoothness_energy(const LabelField& f) const {
  const int w = pair_->width, h = pair_->height;
  double sum = 0.0;
  for (size_t d = 0; d < pair_dirs_.size(); ++d) {
    const auto [dx, dy] = pair_dirs_[d];
    for (int y = 0; y < h; ++y) {
      const int qy = y + dy;
      if (qy < 0 || qy >= h) continue;
      const int x_lo = std::max(0, -dx);
      const int x_hi = std::min(w, w - dx);
      for (int x = x_lo; x < x_hi; ++x) {
        const PlaneLabel& fp = f.at(x, y);
        const PlaneLabel& fq = f.at(x + dx, qy);
        const double psi = std::abs(fp.disparity_at(x, y) - fq.disparity_at(x, y)) +
                           std::abs(fq.disparity_at(x + dx, qy) - fp.disparity_at(x + dx, qy));
        sum += edge_weights_[d].at(x, y) * std::min(psi, smooth_.tau_dis);
      }
    }
  }
  return smooth_.lambda * sum;
}

double EnergyModel::total_energy(const LabelField& f) const {
  if (f.width() != pair_->width || f.height() != pair_->height) {
    throw std::invalid_argument("total_energy: label field dimensions mismatch");
  }
  RegionScratch scratch;
  double data = 0.0;
  for (int y = 0; y < pair_->height; ++y)
    for (int x = 0; x < pair_->width; ++x) data += data_term(f.at(x, y), x, y, scratch);
  return data + smoothness_energy(f);
}

}  // namespace lexstereo
