#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "energy/energy_model.hpp"
#include "graphcut/binary_subproblem.hpp"
#include "localexp/grid.hpp"
#include "localexp/proposers.hpp"

namespace lexstereo {

// Per-level proposer schedule: propagation, RANSAC and randomization counts.
struct LevelSchedule {
  int k_prop = 1;
  int k_rans = 0;
  int k_rand = 0;
};

struct OptimizerConfig {
  std::vector<int> cell_sizes{5, 15, 25};
  std::vector<LevelSchedule> schedules{{1, 0, 7}, {2, 0, 0}, {2, 0, 0}};
  int outer_iterations = 10;
  bool early_stop = false;           // stop when one outer iteration improves
  double early_stop_rel = 1e-5;      // the energy by less than this fraction
  double initial_rd = -1;            // disparity perturbation radius; <0 = disp_max/2
  double initial_rn = 1.0;           // normal perturbation radius
  uint64_t seed = 0;
  int workers = 1;                   // concurrent lanes within one group
  RansacParams ransac;

  // Switches the RANSAC proposer on (one fit per cell visit at every level).
  void enable_ransac() {
    for (auto& s : schedules) s.k_rans = 1;
  }

  void validate() const;
};

// Mutable optimizer state: the current labeling, the cached data terms of
// the current labels, and the global perturbation radii.
struct OptimizerState {
  LabelField f;
  Array2D<double> data_costs;  // phi_p(f_p), refreshed on every accepted switch
  double rd = 0;
  double rn = 0;
};

// Per-lane buffers for one expansion lane.
struct ExpansionScratch {
  RegionScratch region;
  BinarySubproblem sub;
  CutScratch cut;
  BinarySolution sol;
};

// One local expansion of candidate `alpha` over the unit's region: evaluates
// the candidate's data costs, solves the keep/switch subproblem exactly and
// commits the switches. Returns true when any pixel switched.
bool local_alpha_expansion(const EnergyModel& model, OptimizerState& state,
                           const ExpansionUnit& unit, const PlaneLabel& alpha,
                           ExpansionScratch& scratch);

// The per-cell inner loop: k_prop propagation moves, k_rans RANSAC moves,
// then k_rand perturbation moves with the local radius halved after each.
void iterative_expansion(const EnergyModel& model, OptimizerState& state,
                         const ExpansionUnit& unit, const LevelSchedule& schedule,
                         const RansacParams& ransac, double disp_max, Rng& rng,
                         ExpansionScratch& scratch);

// One trace record per (outer iteration, level, group), in schedule order.
struct TraceRecord {
  int outer = 0;
  int level = 0;
  int group = 0;
  double seconds = 0;  // wall time of the group's expansion phase
  double energy = 0;
};

using GroupObserver = std::function<void(const TraceRecord&, const LabelField&)>;

struct OptimizeResult {
  LabelField field;
  Array2D<double> data_costs;
  std::vector<TraceRecord> trace;
};

// Full optimization: random initialization, then for each outer iteration,
// grid level and disjoint group, iterative expansions of every unit in the
// group. Units of one group write disjoint regions and may run on parallel
// lanes; results are identical for every worker count because each unit's
// random stream depends only on (seed, outer, level, cell).
OptimizeResult optimize(const EnergyModel& model, const OptimizerConfig& cfg,
                        const GroupObserver& observer = {});

// Deterministic parallel loop: invokes fn(index, lane) for every index with
// a static partition over `workers` lanes.
void parallel_for(int count, int workers, const std::function<void(int, int)>& fn);

}  // namespace lexstereo
