#pragma once

#include <memory>
#include <span>
#include <utility>

#include "core/image.hpp"
#include "core/label_field.hpp"
#include "core/params.hpp"
#include "core/plane_label.hpp"
#include "core/stereo_pair.hpp"
#include "energy/raw_cost.hpp"

namespace lexstereo {

// Matching costs of one candidate plane over a rectangle. `raw` holds the
// pixelwise costs over the filter region M (the output region dilated by the
// window radius, clipped at image borders); `aggregated` holds the filtered
// data terms over the output region R.
struct CostSlice {
  Rect region;      // R
  Rect raw_region;  // M
  Array2D<double> raw;
  Array2D<double> aggregated;

  double phi(int x, int y) const { return aggregated.at(x - region.x0, y - region.y0); }
  double rho(int x, int y) const { return raw.at(x - raw_region.x0, y - raw_region.y0); }
};

// Reusable per-thread buffers for region_data_costs.
struct RegionScratch {
  Array2D<double> rho;
  Array2D<double> grho[3];
  Array2D<double> sum_rho;
  Array2D<double> sum_grho[3];
  Array2D<double> lin_a[3];
  Array2D<double> lin_b;
  Array2D<double> sum_a[3];
  Array2D<double> sum_b;
  std::vector<double> prefix;
  CostSlice slice;  // output buffer for single-pixel evaluations
};

// The pairwise MRF energy of one view: filtered slanted-window data term
// plus curvature smoothness. Everything is immutable after construction, so
// concurrent evaluation is safe.
//
// Labels whose disparity at the evaluated pixel leaves [0, disp_max] score
// the cost ceiling in every data-term path; this keeps the optimizer's
// cached unaries, the region fast path and total_energy mutually consistent.
class EnergyModel {
public:
  EnergyModel(std::shared_ptr<const StereoPair> pair, MatchParams match, SmoothParams smooth,
              View view);

  const StereoPair& pair() const { return *pair_; }
  const MatchParams& match() const { return match_; }
  const SmoothParams& smooth() const { return smooth_; }
  View view() const { return view_; }
  int width() const { return pair_->width; }
  int height() const { return pair_->height; }
  Rect bounds() const { return {0, 0, pair_->width, pair_->height}; }
  double cost_ceiling() const { return raw_cost_fn_->ceiling(); }

  // Replaces the pixelwise matching cost (e.g. by a precomputed volume).
  void set_raw_cost(std::shared_ptr<const RawCostFn> fn);

  // Matching point of support pixel s under the given plane: disparity
  // subtracts for the left view and adds for the right view.
  std::pair<double, double> warp_point(const PlaneLabel& label, double su, double sv) const {
    const double d = label.disparity_at(su, sv);
    return {view_ == View::left ? su - d : su + d, sv};
  }

  double raw_cost(const PlaneLabel& label, int su, int sv) const {
    return (*raw_cost_fn_)(su, sv, label.disparity_at(su, sv));
  }

  // --- data term -----------------------------------------------------------

  // Adaptive support weights of pixel p over its clipped matching window.
  // Reference implementation by direct summation over shared regression
  // windows; quadratic in the window size, test/debug use only.
  Array2D<double> guided_weights_naive(int pu, int pv, Rect* support = nullptr) const;

  // Reference data term: explicit weight map times pixelwise costs.
  double data_term_naive(const PlaneLabel& label, int pu, int pv) const;

  // Consistent-label fast path: pixelwise costs over M followed by
  // moving-sum filtering, O(|M|) total.
  CostSlice region_data_costs(const PlaneLabel& label, const Rect& region) const;
  void region_data_costs(const PlaneLabel& label, const Rect& region, CostSlice& out,
                         RegionScratch& scratch) const;

  // Data term of a single pixel via the region path.
  double data_term(const PlaneLabel& label, int pu, int pv) const;
  double data_term(const PlaneLabel& label, int pu, int pv, RegionScratch& scratch) const;

  // --- smoothness term -----------------------------------------------------

  double smooth_weight(int pu, int pv, int qu, int qv) const;

  // Curvature penalty of an adjacent pair, not yet weighted by lambda.
  double pairwise_term(int pu, int pv, int qu, int qv, const PlaneLabel& fp,
                       const PlaneLabel& fq) const;

  // Unordered neighbor-pair offsets for the configured neighborhood; every
  // pair (p, p+dir) with both ends in bounds is counted exactly once.
  std::span<const std::pair<int, int>> pair_directions() const {
    return {pair_dirs_.data(), pair_dirs_.size()};
  }

  // max(smooth_weight, eps) of pair (p, p + pair_directions()[dir]).
  double edge_weight(int dir, int pu, int pv) const { return edge_weights_[dir].at(pu, pv); }

  // --- totals --------------------------------------------------------------

  // lambda * sum of pairwise terms over all neighbor pairs.
  double smoothness_energy(const LabelField& f) const;

  // Full energy: per-pixel data terms plus weighted smoothness.
  double total_energy(const LabelField& f) const;

  // Guidance-image statistics (view image normalized by 255); shared by both
  // data-term paths.
  double guide(int ch, int x, int y) const { return guide_[ch].at(x, y); }
  Vec3 guide_vec(int x, int y) const {
    return {guide_[0].at(x, y), guide_[1].at(x, y), guide_[2].at(x, y)};
  }
  Vec3 window_mean(int x, int y) const {
    return {mean_[0].at(x, y), mean_[1].at(x, y), mean_[2].at(x, y)};
  }
  const Sym3& window_inv_cov(int x, int y) const { return inv_cov_.at(x, y); }
  int window_count(int x, int y) const { return win_count_.at(x, y); }

private:
  void precompute_guidance();
  void precompute_edge_weights();

  std::shared_ptr<const StereoPair> pair_;
  MatchParams match_;
  SmoothParams smooth_;
  View view_;
  std::shared_ptr<const RawCostFn> raw_cost_fn_;

  Array2D<double> guide_[3];
  Array2D<double> mean_[3];
  Array2D<Sym3> inv_cov_;
  Array2D<int> win_count_;

  std::vector<std::pair<int, int>> pair_dirs_;
  std::vector<Array2D<double>> edge_weights_;
};

// Moving-sum box filter: out(x,y) = sum of src over the radius-r window
// clipped at src bounds. `prefix` is caller-provided scratch.
void box_sum(const Array2D<double>& src, int radius, Array2D<double>& out,
             std::vector<double>& prefix);

}  // namespace lexstereo
