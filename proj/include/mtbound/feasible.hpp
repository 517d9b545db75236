#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <json.hpp>

#include "mtbound/gtsp.hpp"

namespace mtbound {

// A kinematically realizable tour: depot at t = 0, each target met inside the
// chosen window, straight-line return at full speed.
struct FeasibleTour {
  std::vector<int> visit_order;       // target ids
  std::vector<double> arrival_times;  // per visited target
  std::vector<int> window_choice;     // window index per visited target
  double completion_time = 0.0;
};

// Degenerate-interval graph over sampled trajectory points. Samples are
// distributed over each target's windows proportionally to window duration;
// edge cost between points is the elapsed time when the travel is feasible.
inline ClusteredGraph sample_point_graph(const Instance& inst, int samples_per_target) {
  if (samples_per_target < 1) throw std::invalid_argument("samples_per_target must be >= 1");
  ClusteredGraph g;
  g.variant = Variant::points;
  g.delta = 0.0;
  int next_id = 0;
  for (const Target& tg : inst.targets) {
    double total = 0.0;
    for (const TimeWindow& w : tg.windows) total += w.duration();
    std::vector<int> ids;
    for (const TimeWindow& w : tg.windows) {
      int n = std::max(1, static_cast<int>(std::llround(samples_per_target * w.duration() / total)));
      for (int k = 0; k < n; ++k) {
        double t = (n == 1) ? w.lo : w.lo + k * (w.hi - w.lo) / (n - 1);
        IntervalNode node;
        node.node_id = next_id++;
        node.role = NodeRole::target;
        node.target_id = tg.id;
        node.t_lo = node.t_hi = t;
        ids.push_back(node.node_id);
        g.nodes.push_back(node);
      }
    }
    g.clusters.push_back(std::move(ids));
  }
  g.depot_out = static_cast<int>(g.nodes.size());
  g.nodes.push_back({g.depot_out, NodeRole::depot_out, -1, 0.0, 0.0});
  g.depot_in = static_cast<int>(g.nodes.size());
  g.nodes.push_back({g.depot_in, NodeRole::depot_in, -1, 0.0, 0.0});

  std::size_t n = g.nodes.size();
  g.cost.assign(n * n, std::numeric_limits<double>::infinity());
  auto point_of = [&](const IntervalNode& node) {
    return inst.target(node.target_id).trajectory.position_at(node.t_lo);
  };
  for (int u = 0; u < static_cast<int>(n); ++u) {
    for (int v = 0; v < static_cast<int>(n); ++v) {
      if (!g.is_structural_edge(u, v)) continue;
      const IntervalNode& a = g.nodes[u];
      const IntervalNode& b = g.nodes[v];
      if (b.role == NodeRole::depot_in) {
        g.raw_cost(u, v) = dist(point_of(a), inst.depot) / inst.v_max;
      } else if (a.role == NodeRole::depot_out) {
        if (travel_feasible(inst.depot, 0.0, point_of(b), b.t_lo, inst.v_max))
          g.raw_cost(u, v) = b.t_lo;
      } else {
        if (travel_feasible(point_of(a), a.t_lo, point_of(b), b.t_lo, inst.v_max))
          g.raw_cost(u, v) = b.t_lo - a.t_lo;
      }
    }
  }
  return g;
}

// Minimum completion time for a fixed visit order, over all window choices and
// arrival times. Forward DP on (position in order, window) states carrying the
// earliest feasible arrival: EFAT is monotone in the departure time, and an
// earlier-arriving agent can shadow the target, so the earliest arrival per
// state dominates every later one.
inline std::optional<FeasibleTour> reoptimize_arrivals(const Instance& inst,
                                                       const std::vector<int>& order) {
  if (order.empty()) return std::nullopt;
  const double inf = std::numeric_limits<double>::infinity();
  struct State {
    double arrival = std::numeric_limits<double>::infinity();
    int prev_window = -1;
  };
  std::vector<std::vector<State>> layers(order.size());

  {
    const Target& first = inst.target(order[0]);
    layers[0].resize(first.windows.size());
    for (std::size_t w = 0; w < first.windows.size(); ++w) {
      const TimeWindow& win = first.windows[w];
      if (auto t = efat_trajectory(inst.depot, 0.0, first.trajectory, {win.lo, win.hi},
                                   inst.v_max))
        layers[0][w].arrival = *t;
    }
  }
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Target& prev = inst.target(order[k - 1]);
    const Target& cur = inst.target(order[k]);
    layers[k].resize(cur.windows.size());
    for (std::size_t w = 0; w < cur.windows.size(); ++w) {
      const TimeWindow& win = cur.windows[w];
      for (std::size_t pw = 0; pw < layers[k - 1].size(); ++pw) {
        double a = layers[k - 1][pw].arrival;
        if (!std::isfinite(a)) continue;
        Point2 from = prev.trajectory.position_at(a);
        auto t = efat_trajectory(from, a, cur.trajectory, {win.lo, win.hi}, inst.v_max);
        if (t && *t < layers[k][w].arrival) {
          layers[k][w].arrival = *t;
          layers[k][w].prev_window = static_cast<int>(pw);
        }
      }
    }
  }

  const Target& last = inst.target(order.back());
  double best_completion = inf;
  int best_w = -1;
  for (std::size_t w = 0; w < layers.back().size(); ++w) {
    double a = layers.back()[w].arrival;
    if (!std::isfinite(a)) continue;
    double completion = a + dist(last.trajectory.position_at(a), inst.depot) / inst.v_max;
    if (completion < best_completion) {
      best_completion = completion;
      best_w = static_cast<int>(w);
    }
  }
  if (best_w < 0) return std::nullopt;

  FeasibleTour tour;
  tour.visit_order = order;
  tour.completion_time = best_completion;
  tour.window_choice.assign(order.size(), -1);
  tour.arrival_times.assign(order.size(), 0.0);
  int w = best_w;
  for (int k = static_cast<int>(order.size()) - 1; k >= 0; --k) {
    tour.window_choice[k] = w;
    tour.arrival_times[k] = layers[k][w].arrival;
    w = layers[k][w].prev_window;
  }
  return tour;
}

// Upper-bound pipeline: heuristic GTSP on the sampled point graph, then
// arrival reoptimization on the resulting order. The sampling may be too
// coarse to admit any tour even when one exists.
inline std::optional<FeasibleTour> find_feasible(const Instance& inst, int samples_per_target = 32,
                                                 Effort effort = Effort::standard) {
  ClusteredGraph g = sample_point_graph(inst, samples_per_target);
  auto sol = solve_heuristic(g, effort);
  if (!sol) return std::nullopt;
  return reoptimize_arrivals(inst, sol->target_order);
}

// Fix the visit order of a lower-bounding solution and reoptimize arrivals.
inline std::optional<FeasibleTour> feasible_from_lower_bound(const Instance& inst,
                                                             const GtspSolution& lb) {
  return reoptimize_arrivals(inst, lb.target_order);
}

// ---------------------------------------------------------------------------

inline nlohmann::json tour_to_json(const FeasibleTour& t) {
  nlohmann::json j;
  j["order"] = t.visit_order;
  j["arrivals"] = t.arrival_times;
  j["windows"] = t.window_choice;
  j["completion_time"] = t.completion_time;
  return j;
}

inline FeasibleTour tour_from_json(const nlohmann::json& j) {
  FeasibleTour t;
  if (!j.contains("order") || !j.contains("arrivals") || !j.contains("completion_time"))
    throw ParseError("order", "not a feasible-tour file");
  t.visit_order = j.at("order").get<std::vector<int>>();
  t.arrival_times = j.at("arrivals").get<std::vector<double>>();
  if (j.contains("windows")) t.window_choice = j.at("windows").get<std::vector<int>>();
  t.completion_time = j.at("completion_time").get<double>();
  return t;
}

}  // namespace mtbound
