#include "localexp/optimizer.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace lexstereo {

void OptimizerConfig::validate() const {
  if (cell_sizes.empty()) throw std::invalid_argument("OptimizerConfig: no grid levels");
  if (schedules.size() != cell_sizes.size()) {
    throw std::invalid_argument("OptimizerConfig: one schedule per grid level required");
  }
  for (int cs : cell_sizes) {
    if (cs < 1) throw std::invalid_argument("OptimizerConfig: cell sizes must be >= 1");
  }
  for (const auto& s : schedules) {
    if (s.k_prop < 0 || s.k_rans < 0 || s.k_rand < 0) {
      throw std::invalid_argument("OptimizerConfig: iteration counts must be >= 0");
    }
  }
  if (outer_iterations < 0) {
    throw std::invalid_argument("OptimizerConfig: outer_iterations must be >= 0");
  }
  if (workers < 1) throw std::invalid_argument("OptimizerConfig: workers must be >= 1");
}

void parallel_for(int count, int workers, const std::function<void(int, int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i, 0);
    return;
  }
  // Dynamic scheduling: items are independent and write disjoint state, so
  // the pick order cannot change the result.
  std::atomic<int> next{0};
  auto run_lane = [&](int lane) {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) break;
      fn(i, lane);
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(workers - 1);
  for (int lane = 1; lane < workers; ++lane) threads.emplace_back(run_lane, lane);
  run_lane(0);
  for (auto& t : threads) t.join();
}

bool local_alpha_expansion(const EnergyModel& model, OptimizerState& state,
                           const ExpansionUnit& unit, const PlaneLabel& alpha,
                           ExpansionScratch& scratch) {
  if (!(std::isfinite(alpha.a) && std::isfinite(alpha.b) && std::isfinite(alpha.c))) {
    return false;
  }
  CostSlice& slice = scratch.region.slice;
  model.region_data_costs(alpha, unit.region, slice, scratch.region);
  build_subproblem(model, state.f, unit.region, alpha, slice, state.data_costs, scratch.sub);
  solve_binary(scratch.sub, scratch.cut, scratch.sol);

  bool any = false;
  const Rect& r = unit.region;
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) {
      if (!scratch.sol.switched[scratch.sub.index(x, y)]) continue;
      state.f.at(x, y) = alpha;
      state.data_costs.at(x, y) = slice.phi(x, y);
      any = true;
    }
  }
  return any;
}

void iterative_expansion(const EnergyModel& model, OptimizerState& state,
                         const ExpansionUnit& unit, const LevelSchedule& schedule,
                         const RansacParams& ransac, double disp_max, Rng& rng,
                         ExpansionScratch& scratch) {
  for (int k = 0; k < schedule.k_prop; ++k) {
    const PlaneLabel alpha = propose_propagation(state.f, unit.center, rng);
    local_alpha_expansion(model, state, unit, alpha, scratch);
  }
  for (int k = 0; k < schedule.k_rans; ++k) {
    const PlaneLabel alpha = propose_ransac(state.f, unit.center, ransac, rng);
    local_alpha_expansion(model, state, unit, alpha, scratch);
  }
  double rd = state.rd, rn = state.rn;
  const double cu = 0.5 * (unit.center.x0 + unit.center.x1 - 1);
  const double cv = 0.5 * (unit.center.y0 + unit.center.y1 - 1);
  for (int k = 0; k < schedule.k_rand; ++k) {
    const PlaneLabel base = propose_propagation(state.f, unit.center, rng);
    const PlaneLabel alpha = perturb_label(base, cu, cv, rd, rn, disp_max, rng);
    local_alpha_expansion(model, state, unit, alpha, scratch);
    rd *= 0.5;
    rn *= 0.5;
  }
}

namespace {

double cached_energy(const EnergyModel& model, const OptimizerState& state) {
  double data = 0.0;
  const int w = state.f.width(), h = state.f.height();
  for (int y = 0; y < h; ++y) {
    const double* row = state.data_costs.row(y);
    for (int x = 0; x < w; ++x) data += row[x];
  }
  return data + model.smoothness_energy(state.f);
}

}  // namespace

OptimizeResult optimize(const EnergyModel& model, const OptimizerConfig& cfg,
                        const GroupObserver& observer) {
  cfg.validate();
  const int w = model.width(), h = model.height();
  const double disp_max = model.pair().disp_max;

  OptimizerState state;
  state.f = LabelField(w, h, model.view());
  state.rd = cfg.initial_rd < 0 ? disp_max / 2.0 : cfg.initial_rd;
  state.rn = cfg.initial_rn;

  {
    Rng init_rng(Rng::derive(cfg.seed, {0x696e6974, static_cast<uint64_t>(model.view())}));
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) state.f.at(x, y) = random_plane(init_rng, x, y, disp_max);
  }

  // Data terms of the random initialization; per-pixel labels differ, so the
  // consistent-label fast path does not apply here.
  state.data_costs.reset(w, h);
  {
    std::vector<RegionScratch> scratch(std::max(1, cfg.workers));
    parallel_for(h, cfg.workers, [&](int y, int lane) {
      for (int x = 0; x < w; ++x) {
        state.data_costs.at(x, y) = model.data_term(state.f.at(x, y), x, y, scratch[lane]);
      }
    });
  }

  const std::vector<GridLevel> grids = build_grids(w, h, cfg.cell_sizes);
  OptimizeResult result;
  double prev_energy = cached_energy(model, state);

  std::vector<ExpansionScratch> scratch(std::max(1, cfg.workers));
  std::vector<ExpansionUnit> units;

  for (int outer = 0; outer < cfg.outer_iterations; ++outer) {
    for (size_t level = 0; level < grids.size(); ++level) {
      const GridLevel& grid = grids[level];
      for (int group = 0; group < 16; ++group) {
        units.clear();
        for (int j = group / 4; j < grid.cells_y; j += 4) {
          for (int i = group % 4; i < grid.cells_x; i += 4) {
            units.push_back(make_unit(grid, static_cast<int>(level), i, j));
          }
        }

        const auto t0 = std::chrono::steady_clock::now();
        parallel_for(static_cast<int>(units.size()), cfg.workers, [&](int idx, int lane) {
          const ExpansionUnit& unit = units[idx];
          Rng rng(Rng::derive(cfg.seed, {static_cast<uint64_t>(level),
                                         static_cast<uint64_t>(unit.i),
                                         static_cast<uint64_t>(unit.j),
                                         static_cast<uint64_t>(outer),
                                         static_cast<uint64_t>(model.view())}));
          iterative_expansion(model, state, unit, cfg.schedules[level], cfg.ransac, disp_max,
                              rng, scratch[lane]);
        });
        const auto t1 = std::chrono::steady_clock::now();

        TraceRecord rec;
        rec.outer = outer;
        rec.level = static_cast<int>(level);
        rec.group = group;
        rec.seconds = std::chrono::duration<double>(t1 - t0).count();
        rec.energy = cached_energy(model, state);
        result.trace.push_back(rec);
        if (observer) observer(rec, state.f);
      }
    }
    state.rd *= 0.5;
    state.rn *= 0.5;

    if (cfg.early_stop) {
      const double energy = result.trace.back().energy;
      if (prev_energy - energy < cfg.early_stop_rel * std::abs(prev_energy)) break;
      prev_energy = energy;
    }
  }

  result.field = std::move(state.f);
  result.data_costs = std::move(state.data_costs);
  return result;
}

}  // namespace lexstereo
