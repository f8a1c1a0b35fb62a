#pragma once

#include <cstdint>
#include <vector>

namespace lexstereo {

enum class CutSide : uint8_t { source, sink };

// s-t flow network with per-node terminal capacities and directed neighbor
// edges. Single use: build, solve, read the cut.
class FlowNetwork {
public:
  explicit FlowNetwork(int node_count = 0) { reset(node_count); }

  void reset(int node_count);
  int node_count() const { return static_cast<int>(first_arc_.size()); }

  // Accumulates source->v and v->sink capacities; both must be >= 0.
  void add_terminal(int v, double source_cap, double sink_cap);

  // Adds the directed residual pair u->v (cap_uv) and v->u (cap_vu).
  void add_edge(int u, int v, double cap_uv, double cap_vu);

  struct Result {
    double flow = 0;
    std::vector<CutSide> side;
  };

  // Augmenting-path max-flow with source/sink search trees. Consumes the
  // residual capacities; call once.
  Result max_flow();

  // Capacity of a cut in the original network; diagnostic for duality checks.
  double cut_capacity(const std::vector<CutSide>& side) const;

private:
  static constexpr int kNone = -1;
  static constexpr int kTerminal = -2;

  enum class Tree : uint8_t { free, source, sink };

  struct Arc {
    int head;  // target node
    int next;  // next arc out of the same node
    double rcap;
  };

  int sister(int a) const { return a ^ 1; }

  std::vector<Arc> arcs_;
  std::vector<int> first_arc_;
  std::vector<double> terminal_;  // residual terminal capacity: >0 source, <0 sink
  std::vector<double> cap_source_;
  std::vector<double> cap_sink_;
  std::vector<double> orig_cap_;  // capacities as added, for cut_capacity
  double flow_ = 0;

  // solver state
  std::vector<Tree> tree_;
  std::vector<int> parent_;  // arc into the node from its parent, or kTerminal
  std::vector<int> active_;
  std::vector<int> orphans_;

  bool rooted(int v) const;
  void augment(int s_node, int t_node, int boundary_arc);
  void adopt();
};

}  // namespace lexstereo
