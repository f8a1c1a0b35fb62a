#include "graphcut/binary_subproblem.hpp"

#include <cmath>
#include <stdexcept>

namespace lexstereo {

double BinarySubproblem::evaluate(const std::vector<bool>& switched) const {
  double e = 0.0;
  for (size_t i = 0; i < cost_keep.size(); ++i) {
    e += switched[i] ? cost_switch[i] : cost_keep[i];
  }
  for (const PairTable& t : pairs) {
    const bool sp = switched[t.p], sq = switched[t.q];
    e += sp ? (sq ? t.switch_switch : t.switch_keep) : (sq ? t.keep_switch : t.keep_keep);
  }
  return e;
}

BinarySubproblem build_subproblem(const EnergyModel& model, const LabelField& f,
                                  const Rect& region, const PlaneLabel& alpha,
                                  const CostSlice& alpha_costs,
                                  const Array2D<double>& current_costs) {
  BinarySubproblem sub;
  build_subproblem(model, f, region, alpha, alpha_costs, current_costs, sub);
  return sub;
}

void build_subproblem(const EnergyModel& model, const LabelField& f, const Rect& region,
                      const PlaneLabel& alpha, const CostSlice& alpha_costs,
                      const Array2D<double>& current_costs, BinarySubproblem& sub) {
  if (region.empty()) throw std::invalid_argument("build_subproblem: empty region");
  if (!alpha_costs.region.contains(region)) {
    throw std::invalid_argument("build_subproblem: alpha costs do not cover the region");
  }

  sub.region = region;
  const int n = region.width() * region.height();
  sub.cost_keep.resize(n);
  sub.cost_switch.resize(n);
  sub.pairs.clear();

  for (int y = region.y0; y < region.y1; ++y) {
    for (int x = region.x0; x < region.x1; ++x) {
      const int i = sub.index(x, y);
      sub.cost_keep[i] = current_costs.at(x, y);
      sub.cost_switch[i] = alpha_costs.phi(x, y);
    }
  }

  const double lambda = model.smooth().lambda;
  const Rect image = model.bounds();
  const auto dirs = model.pair_directions();

  for (int y = region.y0; y < region.y1; ++y) {
    for (int x = region.x0; x < region.x1; ++x) {
      const PlaneLabel& fp = f.at(x, y);
      const int i = sub.index(x, y);
      for (size_t d = 0; d < dirs.size(); ++d) {
        const auto [dx, dy] = dirs[d];
        // Both orientations of each offset so that boundary pairs with the
        // outside pixel on either end are collected; interior pairs are
        // taken once, in the canonical orientation.
        for (int sgn : {1, -1}) {
          const int qx = x + sgn * dx, qy = y + sgn * dy;
          if (!image.contains(qx, qy)) continue;
          const bool q_inside = region.contains(qx, qy);
          if (q_inside && sgn < 0) continue;  // canonical orientation covers it
          const PlaneLabel& fq = f.at(qx, qy);
          const double w =
              lambda * (sgn > 0 ? model.edge_weight(static_cast<int>(d), x, y)
                                : model.edge_weight(static_cast<int>(d), qx, qy));
          auto psi = [&](const PlaneLabel& lp, const PlaneLabel& lq) {
            const double v = std::abs(lp.disparity_at(x, y) - lq.disparity_at(x, y)) +
                             std::abs(lq.disparity_at(qx, qy) - lp.disparity_at(qx, qy));
            return w * std::min(v, model.smooth().tau_dis);
          };
          if (q_inside) {
            BinarySubproblem::PairTable t;
            t.p = i;
            t.q = sub.index(qx, qy);
            t.keep_keep = psi(fp, fq);
            t.keep_switch = psi(fp, alpha);
            t.switch_keep = psi(alpha, fq);
            t.switch_switch = psi(alpha, alpha);
            sub.pairs.push_back(t);
          } else {
            // Outside label is frozen: the pair contributes unary costs only.
            sub.cost_keep[i] += psi(fp, fq);
            sub.cost_switch[i] += psi(alpha, fq);
          }
        }
      }
    }
  }
}

BinarySolution solve_binary(const BinarySubproblem& sub) {
  CutScratch scratch;
  BinarySolution sol;
  solve_binary(sub, scratch, sol);
  return sol;
}

void solve_binary(const BinarySubproblem& sub, CutScratch& scratch, BinarySolution& sol) {
  const int n = sub.size();
  FlowNetwork& net = scratch.net;
  net.reset(n);

  // cost0/cost1 accumulate the reparameterized unary costs of keep/switch.
  std::vector<double>& cost0 = scratch.cost0;
  std::vector<double>& cost1 = scratch.cost1;
  cost0 = sub.cost_keep;
  cost1 = sub.cost_switch;

  for (const auto& t : sub.pairs) {
    const double a = t.keep_keep, b = t.keep_switch, c = t.switch_keep, d = t.switch_switch;
    const double edge = b + c - a - d;
    if (edge < -1e-9) {
      throw std::invalid_argument("solve_binary: non-submodular pairwise table");
    }
    // E(xp,xq) = a + (c-a)[xp=1] + (d-c)[xq=1] + edge*[xp=0][xq=1];
    // the constant a lands on both sides of q and cancels in the shift below.
    cost1[t.p] += c - a;
    cost1[t.q] += d - c + a;
    cost0[t.q] += a;
    if (edge > 0.0) net.add_edge(t.p, t.q, edge, 0.0);
  }

  for (int i = 0; i < n; ++i) {
    // Shift so both terminal capacities are non-negative.
    const double m = std::min(cost0[i], cost1[i]);
    net.add_terminal(i, cost1[i] - m, cost0[i] - m);
  }

  const FlowNetwork::Result cut = net.max_flow();

  sol.switched.resize(n);
  for (int i = 0; i < n; ++i) sol.switched[i] = cut.side[i] == CutSide::sink;
  sol.energy = sub.evaluate(sol.switched);
}

}  // namespace lexstereo
