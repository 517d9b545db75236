#pragma once

#include <atomic>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mtbound/kinematics.hpp"
#include "mtbound/model.hpp"

namespace mtbound {

enum class NodeRole { target, depot_out, depot_in };

// One node of the clustered graph: a trajectory-interval of a target, or a
// depot copy. The outbound depot copy is pinned at t = 0; the inbound copy
// carries no window (t_lo = t_hi = 0 by convention).
struct IntervalNode {
  int node_id = -1;
  NodeRole role = NodeRole::target;
  int target_id = -1;  // -1 for depot nodes
  double t_lo = 0.0;
  double t_hi = 0.0;
};

// Edge travel cost in seconds; nullopt means infeasible. Infeasibility is an
// explicit state rather than a large sentinel so downstream DP costs stay clean.
using EdgeCost = std::optional<double>;

struct SamplingParams {
  int k = 10;          // uniform sub-intervals of the departure interval
  double eps = 0.05;   // bisection gap tolerance, seconds
};

enum class Variant { lite, geometric, sampling, linear, points };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::lite: return "lite";
    case Variant::geometric: return "geometric";
    case Variant::sampling: return "sampling";
    case Variant::linear: return "linear";
    default: return "points";  // sampled point graphs, not a bounding algorithm
  }
}

inline Variant variant_from_string(const std::string& s) {
  if (s == "lite") return Variant::lite;
  if (s == "geometric") return Variant::geometric;
  if (s == "sampling") return Variant::sampling;
  if (s == "linear") return Variant::linear;
  if (s == "points") return Variant::points;
  throw ParseError("variant", "expected lite|geometric|sampling|linear, got '" + s + "'");
}

struct BoundStats {
  std::atomic<long> degenerate_shrink{0};
};

// ---------------------------------------------------------------------------
// Trivial-case gate.

struct GateResult {
  enum class Kind { infeasible, trivial_optimal, needs_bounding };
  Kind kind = Kind::needs_bounding;
  double cost = 0.0;  // set for trivial_optimal
};

// Travel from the earliest departure to the latest arrival decides feasibility
// of the whole interval pair; travel from the latest departure to the earliest
// arrival, when feasible, is already the optimal SFT.
inline GateResult gate(const IntervalNode& p, const IntervalNode& q, const Instance& inst) {
  const Trajectory& ti = inst.target(p.target_id).trajectory;
  const Trajectory& tj = inst.target(q.target_id).trajectory;
  if (!travel_feasible(ti.position_at(p.t_lo), p.t_lo, tj.position_at(q.t_hi), q.t_hi,
                       inst.v_max))
    return {GateResult::Kind::infeasible, 0.0};
  if (travel_feasible(ti.position_at(p.t_hi), p.t_hi, tj.position_at(q.t_lo), q.t_lo,
                      inst.v_max))
    return {GateResult::Kind::trivial_optimal, q.t_lo - p.t_hi};
  return {};
}

// ---------------------------------------------------------------------------
// Bounding algorithms. All assume the gate returned needs_bounding.

// Timing-only bound.
inline EdgeCost sft_lite(const IntervalNode& p, const IntervalNode& q) {
  return std::max(q.t_lo - p.t_hi, 0.0);
}

namespace detail {

inline bool all_linear(const std::vector<Piece>& pieces) {
  for (const auto& p : pieces)
    if (!is_line(p)) return false;
  return true;
}

// Stationary pseudo-trajectory used to run the bounding algorithms on depot
// edges (the depot is treated as a zero-speed target pinned to depart at 0).
inline Trajectory depot_trajectory(const Instance& inst) {
  Trajectory t;
  t.speed = 0.0;
  t.pieces.emplace_back(LinePiece{inst.depot, inst.depot, 0.0, inst.horizon});
  return t;
}

inline std::vector<double> corner_times(const Trajectory& traj, double a, double b) {
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < traj.pieces.size(); ++k) {
    double t = piece_t_end(traj.pieces[k]);
    if (t > a + 1e-9 && t < b - 1e-9) out.push_back(t);
  }
  return out;
}

// Minimum over the common time range of |pos_i(t) - pos_j(t)| for linear
// trajectories; used to detect the intersecting-at-a-common-time case.
inline double min_common_time_distance(const Trajectory& ti, const Trajectory& tj, double lo,
                                       double hi) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pi : ti.pieces) {
    if (!is_line(pi)) continue;
    for (const auto& pj : tj.pieces) {
      if (!is_line(pj)) continue;
      double a = std::max({lo, piece_t_start(pi), piece_t_start(pj)});
      double b = std::min({hi, piece_t_end(pi), piece_t_end(pj)});
      if (b < a) continue;
      const auto& li = std::get<LinePiece>(pi);
      const auto& lj = std::get<LinePiece>(pj);
      Point2 dv = line_velocity(li) - line_velocity(lj);
      Point2 dk = (li.start - li.t_start * line_velocity(li)) -
                  (lj.start - lj.t_start * line_velocity(lj));
      // |dv t + dk|^2 is an upward parabola in t.
      double denom = norm2(dv);
      double t_star = denom > 0 ? std::clamp(-dot(dv, dk) / denom, a, b) : a;
      for (double t : {a, t_star, b}) best = std::min(best, norm(t * dv + dk));
    }
  }
  return best;
}

// Exact SFT for piecewise-linear trajectory intervals (the AlgoSFT procedure):
// shrink the search space with EFAT/LFDT so that interval ends map onto each
// other, close the corner-time lists under EFAT/LFDT so departure and arrival
// sub-intervals align pairwise onto single line pieces, then minimize
// EFAT(t) - t per aligned pair over stationary-point and endpoint candidates.
inline EdgeCost sft_linear_core(const Trajectory& ti, TimeInterval wi, const Trajectory& tj,
                                TimeInterval wj, double v_max, BoundStats* stats) {
  double ov_lo = std::max(wi.lo, wj.lo), ov_hi = std::min(wi.hi, wj.hi);
  if (ov_hi >= ov_lo && min_common_time_distance(ti, tj, ov_lo, ov_hi) <= 1e-7) return 0.0;

  auto e1 = efat_trajectory(ti.position_at(wi.lo), wi.lo, tj, wj, v_max);
  if (!e1) return std::nullopt;  // contradicts the gate; treat as infeasible
  double t_bi = *e1;
  auto e2 = efat_trajectory(ti.position_at(wi.hi), wi.hi, tj, wj, v_max);
  double t_bf = e2 ? std::max(*e2, t_bi) : wj.hi;

  auto l1 = lfdt_trajectory(ti, wi, tj.position_at(t_bi), t_bi, v_max);
  double t_ai = l1 ? std::clamp(*l1, wi.lo, wi.hi) : wi.lo;
  double t_af = t_ai;
  if (t_bf - t_bi > 1e-12) {
    auto l2 = lfdt_trajectory(ti, wi, tj.position_at(t_bf), t_bf, v_max);
    t_af = l2 ? std::clamp(*l2, t_ai, wi.hi) : wi.hi;
  }
  if (t_bf - t_bi <= 1e-12 || t_af - t_ai <= 1e-12) {
    // The reduced search space is a single departure or arrival point. The
    // destination interval was entirely "too late" (or the departure interval
    // is already a point, as for depot edges).
    if (stats) stats->degenerate_shrink.fetch_add(1, std::memory_order_relaxed);
    return std::max(t_bi - t_af, 0.0);
  }

  // Aligned (departure, arrival) time events, sorted by departure time.
  std::vector<std::pair<double, double>> ev;
  ev.emplace_back(t_ai, t_bi);
  ev.emplace_back(t_af, t_bf);
  for (double c : corner_times(ti, t_ai, t_af)) {
    if (auto e = efat_trajectory(ti.position_at(c), c, tj, {t_bi, t_bf}, v_max))
      ev.emplace_back(c, *e);
  }
  for (double c : corner_times(tj, t_bi, t_bf)) {
    if (auto l = lfdt_trajectory(ti, {t_ai, t_af}, tj.position_at(c), c, v_max))
      ev.emplace_back(*l, c);
  }
  std::sort(ev.begin(), ev.end());
  std::vector<std::pair<double, double>> events;
  for (const auto& e : ev)
    if (events.empty() || e.first - events.back().first > 1e-9) events.push_back(e);

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < events.size(); ++k) {
    auto [d0, a0] = events[k];
    auto [d1, a1] = events[k + 1];
    best = std::min({best, a0 - d0, a1 - d1});
    if (d1 - d0 <= 1e-12 || a1 - a0 <= 1e-12) continue;
    const LinePiece dep = std::get<LinePiece>(
        clip_piece(ti.piece_at(0.5 * (d0 + d1)), d0, d1));
    const LinePiece arr = std::get<LinePiece>(
        clip_piece(tj.piece_at(0.5 * (a0 + a1)), a0, a1));
    for (double t : sft_stationary_points(dep, arr, v_max)) {
      if (auto e = efat_linear(ti.position_at(t), t, arr, v_max))
        best = std::min(best, *e - t);
    }
  }
  return std::max(best, 0.0);
}

// Sampling bound: EFAT at each sub-interval start minus the sub-interval end.
// Exact EFAT for linear destinations; otherwise the lower end of a bisection
// bracket. Unreachable sub-interval starts contribute +infinity.
inline EdgeCost sft_sampling_core(const Trajectory& ti, TimeInterval wi, const Trajectory& tj,
                                  TimeInterval wj, double v_max, SamplingParams params) {
  bool linear_dest = all_linear(tj.pieces);
  double width = wi.hi - wi.lo;
  int k = std::max(params.k, 1);
  if (width <= 0) k = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < k; ++s) {
    double sub_lo = wi.lo + width * s / k;
    double sub_hi = wi.lo + width * (s + 1) / k;
    Point2 dep = ti.position_at(sub_lo);
    std::optional<double> arrival;
    if (linear_dest) {
      arrival = efat_trajectory(dep, sub_lo, tj, wj, v_max);
    } else if (auto br = efat_bisect(dep, sub_lo, tj, wj, v_max, params.eps)) {
      arrival = br->lo;
    }
    if (arrival) best = std::min(best, *arrival - sub_hi);
  }
  if (!std::isfinite(best)) {
    // Gate guarantees the first sub-interval start can reach the destination;
    // if numerics disagree, fall back to the always-valid timing bound.
    return std::max(wj.lo - wi.hi, 0.0);
  }
  return std::max(best, 0.0);
}

}  // namespace detail

// Locus-distance bound: closest Euclidean approach of the two clipped loci
// covered at full speed.
inline EdgeCost sft_geometric(const IntervalNode& p, const IntervalNode& q,
                              const Instance& inst) {
  auto a = clip_trajectory(inst.target(p.target_id).trajectory, p.t_lo, p.t_hi);
  auto b = clip_trajectory(inst.target(q.target_id).trajectory, q.t_lo, q.t_hi);
  return min_distance_piece_sets(a, b) / inst.v_max;
}

inline EdgeCost sft_sampling(const IntervalNode& p, const IntervalNode& q, const Instance& inst,
                             SamplingParams params = {}) {
  return detail::sft_sampling_core(inst.target(p.target_id).trajectory, {p.t_lo, p.t_hi},
                                   inst.target(q.target_id).trajectory, {q.t_lo, q.t_hi},
                                   inst.v_max, params);
}

inline EdgeCost sft_linear(const IntervalNode& p, const IntervalNode& q, const Instance& inst,
                           BoundStats* stats = nullptr) {
  return detail::sft_linear_core(inst.target(p.target_id).trajectory, {p.t_lo, p.t_hi},
                                 inst.target(q.target_id).trajectory, {q.t_lo, q.t_hi},
                                 inst.v_max, stats);
}

// Return leg: closest approach of the clipped locus to the depot at full
// speed. Exact for every variant (closed-form point-to-piece distances).
inline EdgeCost sft_to_depot(const IntervalNode& p, const Instance& inst) {
  auto pieces = clip_trajectory(inst.target(p.target_id).trajectory, p.t_lo, p.t_hi);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& piece : pieces)
    best = std::min(best, point_piece_distance(inst.depot, piece));
  return best / inst.v_max;
}

// Outbound leg: the chosen variant applied with the depot as a stationary
// zero-length departure interval pinned at t = 0.
inline EdgeCost sft_from_depot(const IntervalNode& q, const Instance& inst, Variant variant,
                               SamplingParams params = {}, BoundStats* stats = nullptr) {
  const Trajectory& tj = inst.target(q.target_id).trajectory;
  if (!travel_feasible(inst.depot, 0.0, tj.position_at(q.t_hi), q.t_hi, inst.v_max))
    return std::nullopt;
  if (travel_feasible(inst.depot, 0.0, tj.position_at(q.t_lo), q.t_lo, inst.v_max))
    return q.t_lo;
  Trajectory dep = detail::depot_trajectory(inst);
  TimeInterval wi{0.0, 0.0}, wj{q.t_lo, q.t_hi};
  switch (variant) {
    case Variant::lite:
      return std::max(q.t_lo, 0.0);
    case Variant::geometric: {
      auto pieces = clip_trajectory(tj, q.t_lo, q.t_hi);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& piece : pieces)
        best = std::min(best, point_piece_distance(inst.depot, piece));
      return best / inst.v_max;
    }
    case Variant::sampling:
      return detail::sft_sampling_core(dep, wi, tj, wj, inst.v_max, params);
    default:
      return detail::sft_linear_core(dep, wi, tj, wj, inst.v_max, stats);
  }
}

// Gate, then variant dispatch; the single entry point used by the graph builder.
inline EdgeCost edge_cost(const IntervalNode& p, const IntervalNode& q, const Instance& inst,
                          Variant variant, SamplingParams params = {},
                          BoundStats* stats = nullptr) {
  if (q.role == NodeRole::depot_in) return sft_to_depot(p, inst);
  if (p.role == NodeRole::depot_out) return sft_from_depot(q, inst, variant, params, stats);
  GateResult g = gate(p, q, inst);
  if (g.kind == GateResult::Kind::infeasible) return std::nullopt;
  if (g.kind == GateResult::Kind::trivial_optimal) return g.cost;
  switch (variant) {
    case Variant::lite: return sft_lite(p, q);
    case Variant::geometric: return sft_geometric(p, q, inst);
    case Variant::sampling: return sft_sampling(p, q, inst, params);
    default: return sft_linear(p, q, inst, stats);
  }
}

}  // namespace mtbound
