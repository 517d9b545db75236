#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtbound/graph.hpp"

namespace mtbound {

struct GtspStats {
  long states_expanded = 0;
  double wall_seconds = 0.0;
};

// A cluster-respecting tour: depot_out, exactly one node per target cluster,
// depot_in. `exact` marks provably optimal solutions.
struct GtspSolution {
  std::vector<int> node_sequence;
  std::vector<IntervalNode> visited;  // descriptors of node_sequence entries
  std::vector<int> target_order;      // cluster order as target ids
  double cost = 0.0;
  bool exact = false;
  GtspStats stats;
};

namespace detail {

inline std::vector<int> cluster_index_of_nodes(const ClusteredGraph& g) {
  std::vector<int> cidx(g.n_target_nodes(), -1);
  for (int c = 0; c < g.n_targets(); ++c)
    for (int v : g.clusters[c]) cidx[v] = c;
  return cidx;
}

inline GtspSolution finish_solution(const ClusteredGraph& g, std::vector<int> seq, double cost,
                                    bool exact, GtspStats stats) {
  GtspSolution s;
  s.node_sequence = std::move(seq);
  s.cost = cost;
  s.exact = exact;
  s.stats = stats;
  for (int id : s.node_sequence) {
    s.visited.push_back(g.nodes[id]);
    if (g.nodes[id].role == NodeRole::target) s.target_order.push_back(g.nodes[id].target_id);
  }
  return s;
}

}  // namespace detail

// Exact optimum via dynamic programming over (visited-cluster subset, last
// node), computed as suffix costs so the forward reconstruction can break
// cost ties toward the lexicographically smallest node sequence. Memory is
// 2^clusters x nodes doubles, hence the 16-cluster refusal.
inline std::optional<GtspSolution> solve_exact(const ClusteredGraph& g) {
  int n = g.n_targets();
  int m = g.n_target_nodes();
  if (n > 16) throw TooManyClusters(n);
  auto t0 = std::chrono::steady_clock::now();
  auto cidx = detail::cluster_index_of_nodes(g);
  const double inf = std::numeric_limits<double>::infinity();
  const unsigned full = (n >= 32) ? 0u : ((1u << n) - 1u);

  // suffix[mask * m + p]: min cost to finish at depot_in from node p, with the
  // clusters in `mask` (including p's) already visited.
  std::vector<double> suffix(static_cast<std::size_t>(full + 1) * m, inf);
  GtspStats stats;
  for (int p = 0; p < m; ++p)
    suffix[static_cast<std::size_t>(full) * m + p] = g.raw_cost(p, g.depot_in);

  std::vector<std::vector<unsigned>> by_pop(n + 1);
  for (unsigned mask = 1; mask <= full; ++mask)
    by_pop[static_cast<int>(std::popcount(mask))].push_back(mask);

  for (int pop = n - 1; pop >= 1; --pop) {
    for (unsigned mask : by_pop[pop]) {
      for (int p = 0; p < m; ++p) {
        if (!(mask & (1u << cidx[p]))) continue;
        double best = inf;
        for (int q = 0; q < m; ++q) {
          if (mask & (1u << cidx[q])) continue;
          double c = g.raw_cost(p, q);
          if (std::isinf(c)) continue;
          double val = c + suffix[static_cast<std::size_t>(mask | (1u << cidx[q])) * m + q];
          if (val < best) best = val;
        }
        suffix[static_cast<std::size_t>(mask) * m + p] = best;
        ++stats.states_expanded;
      }
    }
  }

  auto completion = [&](int from, unsigned mask, int q) {
    double c = g.raw_cost(from, q);
    if (std::isinf(c)) return inf;
    return c + suffix[static_cast<std::size_t>(mask | (1u << cidx[q])) * m + q];
  };

  double total = inf;
  for (int q = 0; q < m; ++q) total = std::min(total, completion(g.depot_out, 0u, q));
  if (std::isinf(total)) return std::nullopt;

  // Greedy forward walk: at each step take the smallest node id among exact
  // minimizers of the completion cost.
  std::vector<int> seq{g.depot_out};
  unsigned mask = 0;
  int u = g.depot_out;
  for (int step = 0; step < n; ++step) {
    double best = inf;
    int pick = -1;
    for (int q = 0; q < m; ++q) {
      if (mask & (1u << cidx[q])) continue;
      double val = completion(u, mask, q);
      if (val < best) {
        best = val;
        pick = q;
      }
    }
    if (pick < 0) return std::nullopt;
    seq.push_back(pick);
    mask |= 1u << cidx[pick];
    u = pick;
  }
  seq.push_back(g.depot_in);

  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return detail::finish_solution(g, std::move(seq), total, true, stats);
}

// Exhaustive enumeration of cluster orders and node choices; test oracle.
// Sequences are explored in ascending node-id order with strictly-improving
// updates, which matches solve_exact's tie-break; costs are accumulated
// tail-first so identical sequences produce bit-identical sums.
inline std::optional<GtspSolution> solve_bruteforce(const ClusteredGraph& g) {
  int n = g.n_targets();
  int m = g.n_target_nodes();
  if (n > 7) throw TooLarge("brute force limited to 7 clusters");
  for (const auto& c : g.clusters)
    if (c.size() > 6) throw TooLarge("brute force limited to 6 nodes per cluster");
  auto t0 = std::chrono::steady_clock::now();
  auto cidx = detail::cluster_index_of_nodes(g);
  const double inf = std::numeric_limits<double>::infinity();
  const unsigned full = (1u << n) - 1u;

  std::function<std::pair<double, std::vector<int>>(int, unsigned)> complete =
      [&](int u, unsigned mask) -> std::pair<double, std::vector<int>> {
    if (mask == full) return {g.raw_cost(u, g.depot_in), {}};
    double best = inf;
    std::vector<int> best_seq;
    for (int q = 0; q < m; ++q) {
      if (mask & (1u << cidx[q])) continue;
      double c = g.raw_cost(u, q);
      if (std::isinf(c)) continue;
      auto [sub, sub_seq] = complete(q, mask | (1u << cidx[q]));
      if (std::isinf(sub)) continue;
      double val = c + sub;
      if (val < best) {
        best = val;
        best_seq.clear();
        best_seq.push_back(q);
        best_seq.insert(best_seq.end(), sub_seq.begin(), sub_seq.end());
      }
    }
    return {best, std::move(best_seq)};
  };

  auto [total, tail] = complete(g.depot_out, 0u);
  if (std::isinf(total)) return std::nullopt;
  std::vector<int> seq{g.depot_out};
  seq.insert(seq.end(), tail.begin(), tail.end());
  seq.push_back(g.depot_in);
  GtspStats stats;
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return detail::finish_solution(g, std::move(seq), total, true, stats);
}

enum class Effort { standard, thorough };

namespace detail {

struct OrderEval {
  double cost = 0.0;
  std::vector<int> nodes;  // chosen node per cluster in order
};

// Optimal node selection for a fixed cluster order: shortest path through the
// cluster layers. Ties go to the smallest node id.
inline std::optional<OrderEval> evaluate_order(const ClusteredGraph& g,
                                               const std::vector<int>& order) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dp;
  std::vector<std::vector<int>> parent(order.size());
  for (std::size_t layer = 0; layer < order.size(); ++layer) {
    const auto& cluster = g.clusters[order[layer]];
    std::vector<double> next(cluster.size(), inf);
    parent[layer].assign(cluster.size(), -1);
    for (std::size_t vi = 0; vi < cluster.size(); ++vi) {
      int v = cluster[vi];
      if (layer == 0) {
        next[vi] = g.raw_cost(g.depot_out, v);
        continue;
      }
      const auto& prev_cluster = g.clusters[order[layer - 1]];
      for (std::size_t ui = 0; ui < prev_cluster.size(); ++ui) {
        if (std::isinf(dp[ui])) continue;
        double val = dp[ui] + g.raw_cost(prev_cluster[ui], v);
        if (val < next[vi]) {
          next[vi] = val;
          parent[layer][vi] = static_cast<int>(ui);
        }
      }
    }
    dp = std::move(next);
  }
  double best = inf;
  int best_vi = -1;
  const auto& last_cluster = g.clusters[order.back()];
  for (std::size_t vi = 0; vi < last_cluster.size(); ++vi) {
    if (std::isinf(dp[vi])) continue;
    double val = dp[vi] + g.raw_cost(last_cluster[vi], g.depot_in);
    if (val < best) {
      best = val;
      best_vi = static_cast<int>(vi);
    }
  }
  if (best_vi < 0) return std::nullopt;
  OrderEval out;
  out.cost = best;
  out.nodes.assign(order.size(), -1);
  int vi = best_vi;
  for (int layer = static_cast<int>(order.size()) - 1; layer >= 0; --layer) {
    out.nodes[layer] = g.clusters[order[layer]][vi];
    vi = parent[layer][vi];
  }
  return out;
}

inline std::optional<std::vector<int>> construct_cheapest_insertion(const ClusteredGraph& g,
                                                                    int first_cluster) {
  int n = g.n_targets();
  std::vector<int> order;
  std::vector<bool> used(n, false);
  if (first_cluster >= 0) {
    order.push_back(first_cluster);
    used[first_cluster] = true;
    if (!evaluate_order(g, order)) return std::nullopt;
  }
  while (static_cast<int>(order.size()) < n) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = -1;
    std::size_t best_pos = 0;
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      for (std::size_t pos = 0; pos <= order.size(); ++pos) {
        std::vector<int> cand = order;
        cand.insert(cand.begin() + pos, c);
        auto eval = evaluate_order(g, cand);
        if (eval && eval->cost < best) {
          best = eval->cost;
          best_c = c;
          best_pos = pos;
        }
      }
    }
    if (best_c < 0) return std::nullopt;
    order.insert(order.begin() + best_pos, best_c);
    used[best_c] = true;
  }
  return order;
}

inline std::optional<std::vector<int>> construct_nearest(const ClusteredGraph& g, int start) {
  int n = g.n_targets();
  std::vector<int> order{start};
  std::vector<bool> used(n, false);
  used[start] = true;
  while (static_cast<int>(order.size()) < n) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = -1;
    for (int c = 0; c < n; ++c) {
      if (used[c]) continue;
      std::vector<int> cand = order;
      cand.push_back(c);
      auto eval = evaluate_order(g, cand);
      if (eval && eval->cost < best) {
        best = eval->cost;
        best_c = c;
      }
    }
    if (best_c < 0) return std::nullopt;
    order.push_back(best_c);
    used[best_c] = true;
  }
  return order;
}

// Local search over the cluster order: segment reversals (2-opt) and single
// cluster relocations (or-opt), each evaluated with the exact layered DP.
inline void improve_order(const ClusteredGraph& g, std::vector<int>& order, double& cost) {
  int n = static_cast<int>(order.size());
  bool improved = true;
  while (improved) {
    improved = false;
    double best = cost;
    std::vector<int> best_order;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        std::vector<int> cand = order;
        std::reverse(cand.begin() + i, cand.begin() + j + 1);
        auto eval = evaluate_order(g, cand);
        if (eval && eval->cost < best - 1e-12) {
          best = eval->cost;
          best_order = std::move(cand);
        }
      }
    }
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        std::vector<int> cand = order;
        int c = cand[i];
        cand.erase(cand.begin() + i);
        cand.insert(cand.begin() + j, c);
        auto eval = evaluate_order(g, cand);
        if (eval && eval->cost < best - 1e-12) {
          best = eval->cost;
          best_order = std::move(cand);
        }
      }
    }
    if (!best_order.empty()) {
      order = std::move(best_order);
      cost = best;
      improved = true;
    }
  }
}

}  // namespace detail

// Cluster-aware construction + local improvement. Never reports exact; used
// for upper bounds and as the seed for the feasible-solution pipeline.
inline std::optional<GtspSolution> solve_heuristic(const ClusteredGraph& g,
                                                   Effort effort = Effort::standard) {
  auto t0 = std::chrono::steady_clock::now();
  int n = g.n_targets();
  if (n == 0) return std::nullopt;

  std::vector<std::vector<int>> candidates;
  if (auto ci = detail::construct_cheapest_insertion(g, -1)) candidates.push_back(*ci);
  if (effort == Effort::thorough || candidates.empty()) {
    for (int c = 0; c < n; ++c)
      if (auto nn = detail::construct_nearest(g, c)) candidates.push_back(*nn);
  }
  if (candidates.empty()) return std::nullopt;

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best_order;
  for (auto& order : candidates) {
    auto eval = detail::evaluate_order(g, order);
    if (!eval) continue;
    double cost = eval->cost;
    detail::improve_order(g, order, cost);
    if (cost < best_cost) {
      best_cost = cost;
      best_order = order;
    }
  }
  if (best_order.empty()) return std::nullopt;

  auto eval = detail::evaluate_order(g, best_order);
  std::vector<int> seq{g.depot_out};
  seq.insert(seq.end(), eval->nodes.begin(), eval->nodes.end());
  seq.push_back(g.depot_in);
  GtspStats stats;
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return detail::finish_solution(g, std::move(seq), eval->cost, false, stats);
}

// ---------------------------------------------------------------------------

inline nlohmann::json solution_to_json(const GtspSolution& s) {
  nlohmann::json j;
  j["cost"] = s.cost;
  j["exact"] = s.exact;
  j["sequence"] = s.node_sequence;
  j["target_order"] = s.target_order;
  auto nodes = nlohmann::json::array();
  for (const auto& n : s.visited) {
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
  j["states_expanded"] = s.stats.states_expanded;
  j["wall_seconds"] = s.stats.wall_seconds;
  return j;
}

// Per-edge costs of a solution on its graph, appended to the dump.
inline nlohmann::json solution_to_json(const GtspSolution& s, const ClusteredGraph& g) {
  nlohmann::json j = solution_to_json(s);
  auto edges = nlohmann::json::array();
  for (std::size_t k = 0; k + 1 < s.node_sequence.size(); ++k) {
    double c = g.raw_cost(s.node_sequence[k], s.node_sequence[k + 1]);
    edges.push_back(std::isinf(c) ? nlohmann::json(nullptr) : nlohmann::json(c));
  }
  j["edge_costs"] = edges;
  return j;
}

}  // namespace mtbound
