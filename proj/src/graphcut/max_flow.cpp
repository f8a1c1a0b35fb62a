#include "graphcut/max_flow.hpp"

#include <algorithm>
#include <stdexcept>

namespace lexstereo {

void FlowNetwork::reset(int node_count) {
  if (node_count < 0) throw std::invalid_argument("FlowNetwork: negative node count");
  arcs_.clear();
  first_arc_.assign(node_count, kNone);
  terminal_.assign(node_count, 0.0);
  cap_source_.assign(node_count, 0.0);
  cap_sink_.assign(node_count, 0.0);
  orig_cap_.clear();
  flow_ = 0.0;
}

void FlowNetwork::add_terminal(int v, double source_cap, double sink_cap) {
  if (v < 0 || v >= node_count()) throw std::invalid_argument("FlowNetwork: bad node id");
  if (source_cap < 0 || sink_cap < 0) {
    throw std::invalid_argument("FlowNetwork: negative terminal capacity");
  }
  cap_source_[v] += source_cap;
  cap_sink_[v] += sink_cap;
}

void FlowNetwork::add_edge(int u, int v, double cap_uv, double cap_vu) {
  if (u < 0 || u >= node_count() || v < 0 || v >= node_count() || u == v) {
    throw std::invalid_argument("FlowNetwork: bad edge endpoints");
  }
  if (cap_uv < 0 || cap_vu < 0) throw std::invalid_argument("FlowNetwork: negative capacity");
  const int a = static_cast<int>(arcs_.size());
  arcs_.push_back({v, first_arc_[u], cap_uv});
  first_arc_[u] = a;
  arcs_.push_back({u, first_arc_[v], cap_vu});
  first_arc_[v] = a + 1;
  orig_cap_.push_back(cap_uv);
  orig_cap_.push_back(cap_vu);
}

bool FlowNetwork::rooted(int v) const {
  for (;;) {
    const int pa = parent_[v];
    if (pa == kTerminal) return true;
    if (pa == kNone) return false;
    v = arcs_[pa].head;
  }
}

void FlowNetwork::augment(int s_node, int t_node, int boundary_arc) {
  // Bottleneck over terminal caps, the two tree paths, and the boundary arc.
  double bottleneck = arcs_[boundary_arc].rcap;
  for (int u = s_node;;) {
    const int pa = parent_[u];
    if (pa == kTerminal) {
      bottleneck = std::min(bottleneck, terminal_[u]);
      break;
    }
    bottleneck = std::min(bottleneck, arcs_[sister(pa)].rcap);
    u = arcs_[pa].head;
  }
  for (int u = t_node;;) {
    const int pa = parent_[u];
    if (pa == kTerminal) {
      bottleneck = std::min(bottleneck, -terminal_[u]);
      break;
    }
    bottleneck = std::min(bottleneck, arcs_[pa].rcap);
    u = arcs_[pa].head;
  }

  arcs_[boundary_arc].rcap -= bottleneck;
  arcs_[sister(boundary_arc)].rcap += bottleneck;

  for (int u = s_node;;) {
    const int pa = parent_[u];
    if (pa == kTerminal) {
      terminal_[u] -= bottleneck;
      if (terminal_[u] == 0.0) {
        parent_[u] = kNone;
        orphans_.push_back(u);
      }
      break;
    }
    arcs_[sister(pa)].rcap -= bottleneck;
    arcs_[pa].rcap += bottleneck;
    const int next = arcs_[pa].head;
    if (arcs_[sister(pa)].rcap == 0.0) {
      parent_[u] = kNone;
      orphans_.push_back(u);
    }
    u = next;
  }
  for (int u = t_node;;) {
    const int pa = parent_[u];
    if (pa == kTerminal) {
      terminal_[u] += bottleneck;
      if (terminal_[u] == 0.0) {
        parent_[u] = kNone;
        orphans_.push_back(u);
      }
      break;
    }
    arcs_[pa].rcap -= bottleneck;
    arcs_[sister(pa)].rcap += bottleneck;
    const int next = arcs_[pa].head;
    if (arcs_[pa].rcap == 0.0) {
      parent_[u] = kNone;
      orphans_.push_back(u);
    }
    u = next;
  }

  flow_ += bottleneck;
}

void FlowNetwork::adopt() {
  while (!orphans_.empty()) {
    const int v = orphans_.back();
    orphans_.pop_back();
    const Tree t = tree_[v];

    // Look for a rooted same-tree neighbor with residual capacity toward v.
    int new_parent = kNone;
    for (int a = first_arc_[v]; a != kNone; a = arcs_[a].next) {
      const int w = arcs_[a].head;
      if (tree_[w] != t) continue;
      const double cap = t == Tree::source ? arcs_[sister(a)].rcap : arcs_[a].rcap;
      if (cap <= 0.0) continue;
      if (!rooted(w)) continue;
      new_parent = a;
      break;
    }
    if (new_parent != kNone) {
      parent_[v] = new_parent;
      continue;
    }

    // No parent: free the node, orphan its children, reactivate neighbors
    // that can still grow toward it.
    for (int a = first_arc_[v]; a != kNone; a = arcs_[a].next) {
      const int w = arcs_[a].head;
      if (tree_[w] != t) continue;
      const int wp = parent_[w];
      if (wp >= 0 && arcs_[wp].head == v) {
        parent_[w] = kNone;
        orphans_.push_back(w);
      }
      const double cap = t == Tree::source ? arcs_[sister(a)].rcap : arcs_[a].rcap;
      if (cap > 0.0) active_.push_back(w);
    }
    tree_[v] = Tree::free;
    parent_[v] = kNone;
  }
}

FlowNetwork::Result FlowNetwork::max_flow() {
  const int n = node_count();
  tree_.assign(n, Tree::free);
  parent_.assign(n, kNone);
  active_.clear();
  orphans_.clear();

  for (int v = 0; v < n; ++v) {
    const double s = cap_source_[v], t = cap_sink_[v];
    flow_ += std::min(s, t);
    terminal_[v] = s - t;
    if (terminal_[v] > 0.0) {
      tree_[v] = Tree::source;
      parent_[v] = kTerminal;
      active_.push_back(v);
    } else if (terminal_[v] < 0.0) {
      tree_[v] = Tree::sink;
      parent_[v] = kTerminal;
      active_.push_back(v);
    }
  }

  size_t head = 0;
  while (head < active_.size()) {
    const int v = active_[head];
    if (tree_[v] == Tree::free) {
      ++head;
      continue;
    }
    const Tree t = tree_[v];
    bool found_path = false;
    for (int a = first_arc_[v]; a != kNone; a = arcs_[a].next) {
      const double cap = t == Tree::source ? arcs_[a].rcap : arcs_[sister(a)].rcap;
      if (cap <= 0.0) continue;
      const int w = arcs_[a].head;
      if (tree_[w] == Tree::free) {
        tree_[w] = t;
        parent_[w] = sister(a);
        active_.push_back(w);
      } else if (tree_[w] != t) {
        if (t == Tree::source) {
          augment(v, w, a);
        } else {
          augment(w, v, sister(a));
        }
        adopt();
        found_path = true;
        break;
      }
    }
    if (!found_path) ++head;

    // Compact the queue occasionally so long runs stay bounded.
    if (head > 4096 && head * 2 > active_.size()) {
      active_.erase(active_.begin(), active_.begin() + head);
      head = 0;
    }
  }

  Result result;
  result.flow = flow_;
  result.side.resize(n);
  for (int v = 0; v < n; ++v) {
    result.side[v] = tree_[v] == Tree::source ? CutSide::source : CutSide::sink;
  }
  return result;
}

double FlowNetwork::cut_capacity(const std::vector<CutSide>& side) const {
  double cap = 0.0;
  for (int v = 0; v < node_count(); ++v) {
    if (side[v] == CutSide::sink) cap += cap_source_[v];
    if (side[v] == CutSide::source) cap += cap_sink_[v];
  }
  for (size_t a = 0; a < arcs_.size(); a += 2) {
    const int u = arcs_[a + 1].head;  // tail of arc a
    const int v = arcs_[a].head;
    if (side[u] == CutSide::source && side[v] == CutSide::sink) {
      cap += orig_cap_[a];
    } else if (side[v] == CutSide::source && side[u] == CutSide::sink) {
      cap += orig_cap_[a + 1];
    }
  }
  return cap;
}

}  // namespace lexstereo
