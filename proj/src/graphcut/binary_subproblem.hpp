#pragma once

#include <vector>

#include "core/label_field.hpp"
#include "energy/energy_model.hpp"
#include "graphcut/max_flow.hpp"

namespace lexstereo {

// Binary keep/switch energy of one local expansion: per-pixel unaries plus
// submodular pairwise tables over pairs inside the region. Pairs crossing
// the region border are folded into the inside pixel's unaries; pairs with
// both ends outside are untouched by the move and never enter.
struct BinarySubproblem {
  Rect region;
  std::vector<double> cost_keep;    // region-local index: (y-y0)*width + (x-x0)
  std::vector<double> cost_switch;

  struct PairTable {
    int p, q;  // region-local indices
    double keep_keep, keep_switch, switch_keep, switch_switch;
  };
  std::vector<PairTable> pairs;

  int index(int x, int y) const {
    return (y - region.y0) * region.width() + (x - region.x0);
  }
  int size() const { return static_cast<int>(cost_keep.size()); }

  double evaluate(const std::vector<bool>& switched) const;
};

// Assembles the keep/switch subproblem of candidate `alpha` over `region`.
// `alpha_costs` must cover the region; `current_costs` holds the cached data
// terms of the current labels (full-image plane).
BinarySubproblem build_subproblem(const EnergyModel& model, const LabelField& f,
                                  const Rect& region, const PlaneLabel& alpha,
                                  const CostSlice& alpha_costs,
                                  const Array2D<double>& current_costs);

// Allocation-free variant for the optimizer's hot path; reuses out's storage.
void build_subproblem(const EnergyModel& model, const LabelField& f, const Rect& region,
                      const PlaneLabel& alpha, const CostSlice& alpha_costs,
                      const Array2D<double>& current_costs, BinarySubproblem& out);

struct BinarySolution {
  std::vector<bool> switched;
  double energy;  // subproblem energy of the returned assignment
};

// Reusable solver state.
struct CutScratch {
  FlowNetwork net;
  std::vector<double> cost0, cost1;
};

// Exact minimizer via reparameterization into an s-t min-cut. Throws if a
// pairwise table violates submodularity beyond 1e-9.
BinarySolution solve_binary(const BinarySubproblem& sub);
void solve_binary(const BinarySubproblem& sub, CutScratch& scratch, BinarySolution& out);

}  // namespace lexstereo
