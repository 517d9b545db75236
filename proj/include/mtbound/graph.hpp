#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtbound/bounds.hpp"
#include "mtbound/parallel.hpp"

namespace mtbound {

// Discretization levels 1-4 halve the interval width starting from 5 s, which
// tiles the default 20 s of windows into 4/8/16/32 intervals per target.
inline double delta_for_level(int level) {
  switch (level) {
    case 1: return 5.0;
    case 2: return 2.5;
    case 3: return 1.25;
    case 4: return 0.625;
    default: throw std::invalid_argument("discretization level must be 1..4");
  }
}

// Splits each window [lo, hi] into ceil((hi - lo) / delta) consecutive
// intervals. Returns one cluster of nodes per target, ids assigned in
// (target, window, interval) order.
inline std::vector<std::vector<IntervalNode>> partition(const Instance& inst, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("delta must be positive");
  std::vector<std::vector<IntervalNode>> clusters;
  int next_id = 0;
  for (const Target& tg : inst.targets) {
    std::vector<IntervalNode> cluster;
    for (const TimeWindow& w : tg.windows) {
      int n = static_cast<int>(std::ceil((w.hi - w.lo) / delta - 1e-9));
      n = std::max(n, 1);
      for (int k = 0; k < n; ++k) {
        IntervalNode node;
        node.node_id = next_id++;
        node.role = NodeRole::target;
        node.target_id = tg.id;
        node.t_lo = w.lo + k * delta;
        node.t_hi = (k + 1 == n) ? w.hi : w.lo + (k + 1) * delta;
        cluster.push_back(node);
      }
    }
    clusters.push_back(std::move(cluster));
  }
  return clusters;
}

struct ClusteredGraph {
  std::vector<IntervalNode> nodes;         // target nodes first, then depot_out, depot_in
  std::vector<std::vector<int>> clusters;  // node ids per target (index = target id - 1)
  int depot_out = -1;
  int depot_in = -1;
  Variant variant = Variant::lite;
  double delta = 0.0;
  // Diagnostics; not serialized so identical inputs dump identically.
  double build_seconds = 0.0;
  long degenerate_shrink = 0;
  int short_tail_intervals = 0;

  std::vector<double> cost;  // dense (nodes x nodes), +inf = infeasible/absent

  int n_nodes() const { return static_cast<int>(nodes.size()); }
  int n_targets() const { return static_cast<int>(clusters.size()); }
  int n_target_nodes() const { return n_nodes() - 2; }

  double raw_cost(int u, int v) const { return cost[static_cast<std::size_t>(u) * nodes.size() + v]; }
  double& raw_cost(int u, int v) { return cost[static_cast<std::size_t>(u) * nodes.size() + v]; }

  EdgeCost edge(int u, int v) const {
    double c = raw_cost(u, v);
    if (std::isinf(c)) return std::nullopt;
    return c;
  }

  // Structural edges: ordered cross-cluster target pairs, depot_out -> target,
  // target -> depot_in.
  bool is_structural_edge(int u, int v) const {
    if (u == v) return false;
    const IntervalNode& a = nodes[u];
    const IntervalNode& b = nodes[v];
    if (a.role == NodeRole::depot_in || b.role == NodeRole::depot_out) return false;
    if (a.role == NodeRole::depot_out && b.role == NodeRole::depot_in) return false;
    if (a.role == NodeRole::target && b.role == NodeRole::target)
      return a.target_id != b.target_id;
    return true;
  }
};

inline ClusteredGraph build(const Instance& inst, double delta, Variant variant,
                            SamplingParams params = {}) {
  if (variant == Variant::linear) {
    for (const Target& tg : inst.targets) {
      if (!detail::all_linear(tg.trajectory.pieces))
        throw VariantUnsupported("variant 'linear' requires piecewise-linear trajectories; target " +
                                 std::to_string(tg.id) + " has arc pieces");
    }
  }
  auto t0 = std::chrono::steady_clock::now();

  ClusteredGraph g;
  g.variant = variant;
  g.delta = delta;
  auto clusters = partition(inst, delta);
  for (auto& cluster : clusters) {
    std::vector<int> ids;
    for (auto& node : cluster) {
      ids.push_back(node.node_id);
      g.nodes.push_back(node);
      double width = node.t_hi - node.t_lo;
      if (width < delta - 1e-9) ++g.short_tail_intervals;
    }
    g.clusters.push_back(std::move(ids));
  }
  g.depot_out = static_cast<int>(g.nodes.size());
  g.nodes.push_back({g.depot_out, NodeRole::depot_out, -1, 0.0, 0.0});
  g.depot_in = static_cast<int>(g.nodes.size());
  g.nodes.push_back({g.depot_in, NodeRole::depot_in, -1, 0.0, 0.0});

  std::size_t n = g.nodes.size();
  g.cost.assign(n * n, std::numeric_limits<double>::infinity());

  std::vector<std::pair<int, int>> tasks;
  for (int u = 0; u < static_cast<int>(n); ++u)
    for (int v = 0; v < static_cast<int>(n); ++v)
      if (g.is_structural_edge(u, v)) tasks.emplace_back(u, v);

  BoundStats stats;
  parallel_for(tasks.size(), [&](std::size_t i) {
    auto [u, v] = tasks[i];
    EdgeCost c = edge_cost(g.nodes[u], g.nodes[v], inst, variant, params, &stats);
    if (c) g.raw_cost(u, v) = *c;
  });
  g.degenerate_shrink = stats.degenerate_shrink.load();

  g.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return g;
}

// ---------------------------------------------------------------------------
// Dump format (version 1):
// {version, variant, delta, nodes:[{id,kind,target,t_lo,t_hi}...],
//  edges:[[u, v, cost-or-null]...]}  -- edges sorted by (u, v).

inline nlohmann::json graph_to_json(const ClusteredGraph& g) {
  nlohmann::json j;
  j["version"] = 1;
  j["variant"] = to_string(g.variant);
  j["delta"] = g.delta;
  auto nodes = nlohmann::json::array();
  for (const IntervalNode& n : g.nodes) {
    nlohmann::json nj;
    nj["id"] = n.node_id;
    nj["kind"] = n.role == NodeRole::target ? "target"
                 : n.role == NodeRole::depot_out ? "depot_out"
                                                 : "depot_in";
    if (n.role == NodeRole::target)
      nj["target"] = n.target_id;
    else
      nj["target"] = nullptr;
    nj["t_lo"] = n.t_lo;
    nj["t_hi"] = n.t_hi;
    nodes.push_back(nj);
  }
  j["nodes"] = nodes;
  auto edges = nlohmann::json::array();
  for (int u = 0; u < g.n_nodes(); ++u) {
    for (int v = 0; v < g.n_nodes(); ++v) {
      if (!g.is_structural_edge(u, v)) continue;
      auto e = nlohmann::json::array({u, v});
      if (auto c = g.edge(u, v))
        e.push_back(*c);
      else
        e.push_back(nullptr);
      edges.push_back(e);
    }
  }
  j["edges"] = edges;
  return j;
}

inline ClusteredGraph graph_from_json(const nlohmann::json& j) {
  if (!j.contains("version") || j.at("version").get<int>() != 1)
    throw ParseError("version", "unsupported graph version");
  ClusteredGraph g;
  g.variant = variant_from_string(j.at("variant").get<std::string>());
  g.delta = j.at("delta").get<double>();
  int max_target = 0;
  for (const auto& nj : j.at("nodes")) {
    IntervalNode n;
    n.node_id = nj.at("id").get<int>();
    std::string kind = nj.at("kind").get<std::string>();
    if (kind == "target") {
      n.role = NodeRole::target;
      n.target_id = nj.at("target").get<int>();
      max_target = std::max(max_target, n.target_id);
    } else if (kind == "depot_out") {
      n.role = NodeRole::depot_out;
    } else if (kind == "depot_in") {
      n.role = NodeRole::depot_in;
    } else {
      throw ParseError("kind", "unknown node kind '" + kind + "'");
    }
    n.t_lo = nj.at("t_lo").get<double>();
    n.t_hi = nj.at("t_hi").get<double>();
    g.nodes.push_back(n);
  }
  g.clusters.assign(max_target, {});
  for (const IntervalNode& n : g.nodes) {
    if (n.role == NodeRole::target)
      g.clusters[n.target_id - 1].push_back(n.node_id);
    else if (n.role == NodeRole::depot_out)
      g.depot_out = n.node_id;
    else
      g.depot_in = n.node_id;
  }
  std::size_t nn = g.nodes.size();
  g.cost.assign(nn * nn, std::numeric_limits<double>::infinity());
  for (const auto& e : j.at("edges")) {
    int u = e.at(0).get<int>(), v = e.at(1).get<int>();
    if (!e.at(2).is_null()) g.raw_cost(u, v) = e.at(2).get<double>();
  }
  return g;
}

inline void dump(const ClusteredGraph& g, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << graph_to_json(g).dump() << "\n";
}

inline ClusteredGraph load_graph(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, e.what());
  }
  return graph_from_json(j);
}

}  // namespace mtbound
