#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mtbound/geometry.hpp"

namespace mtbound {

// Slack on the feasibility comparison |to - from| <= v_max * dt.
inline constexpr double kFeasTol = 1e-9;
// Reporting tolerance for EFAT/LFDT values.
inline constexpr double kTimeTol = 1e-7;

struct FeasibleTravelQuery {
  Point2 from;
  double depart = 0.0;
  Point2 to;
  double arrive = 0.0;
  double v_max = 0.0;
};

inline bool travel_feasible(const FeasibleTravelQuery& q) {
  if (q.arrive < q.depart) return false;
  return dist(q.from, q.to) <= q.v_max * (q.arrive - q.depart) + kFeasTol;
}

inline bool travel_feasible(Point2 from, double depart, Point2 to, double arrive, double v_max) {
  return travel_feasible(FeasibleTravelQuery{from, depart, to, arrive, v_max});
}

struct TimeInterval {
  double lo = 0.0;
  double hi = 0.0;
};

// a2 t^2 + a1 t + a0, as produced by squaring the interception equations.
struct QuadraticCoeffs {
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
};

struct QuadraticRoots {
  int count = 0;
  double r0 = 0.0;  // r0 <= r1 when count == 2
  double r1 = 0.0;
};

// Numerically stable roots via q = -(b + sign(b) sqrt(disc)) / 2: avoids the
// catastrophic cancellation of the textbook formula near tangent interceptions.
// |a| below `degenerate_tol` falls back to the linear equation.
inline QuadraticRoots solve_quadratic(const QuadraticCoeffs& c, double degenerate_tol = 1e-12) {
  if (std::abs(c.a2) < degenerate_tol) {
    if (std::abs(c.a1) < degenerate_tol) return {};
    double r = -c.a0 / c.a1;
    return {1, r, r};
  }
  double disc = c.a1 * c.a1 - 4.0 * c.a2 * c.a0;
  if (disc < 0) {
    double scale = std::max({1.0, c.a1 * c.a1, std::abs(4.0 * c.a2 * c.a0)});
    if (disc < -1e-9 * scale) return {};
    disc = 0.0;  // tangent case
  }
  double sq = std::sqrt(disc);
  double q = -0.5 * (c.a1 + std::copysign(sq, c.a1 == 0 ? 1.0 : c.a1));
  double x0, x1;
  if (q != 0.0) {
    x0 = q / c.a2;
    x1 = c.a0 / q;
  } else {
    x0 = -sq / (2.0 * c.a2);
    x1 = sq / (2.0 * c.a2);
  }
  if (x0 > x1) std::swap(x0, x1);
  return {2, x0, x1};
}

namespace detail {

// Coefficients of |pos(t) - chase|^2 - v_max^2 (t - t_ref)^2 where pos(t)
// extrapolates the piece's line. Same form serves EFAT (t_ref = departure)
// and LFDT (t_ref = arrival).
inline QuadraticCoeffs interception_coeffs(Point2 chase, double t_ref, const LinePiece& piece,
                                           double v_max) {
  Point2 vel = line_velocity(piece);
  Point2 k = piece.start - piece.t_start * vel - chase;  // pos(t) - chase = vel*t + k
  QuadraticCoeffs c;
  c.a2 = norm2(vel) - v_max * v_max;
  c.a1 = 2.0 * (dot(vel, k) + v_max * v_max * t_ref);
  c.a0 = norm2(k) - v_max * v_max * t_ref * t_ref;
  return c;
}

}  // namespace detail

// Earliest arrival time on the piece's span, departing `start` at `depart`.
// The squared equation admits a spurious root (arrival before departure); root
// candidates are re-checked against the unsquared feasibility condition, and
// the earliest surviving one wins. std::nullopt when the piece is unreachable.
inline std::optional<double> efat_linear(Point2 start, double depart, const LinePiece& piece,
                                         double v_max) {
  double lo = std::max(piece.t_start, depart);
  double hi = piece.t_end;
  if (hi < depart) return std::nullopt;
  auto reachable = [&](double t) {
    return travel_feasible(start, depart, piece_position(Piece{piece}, t), t, v_max);
  };
  if (reachable(lo)) return lo;
  QuadraticRoots roots = solve_quadratic(detail::interception_coeffs(start, depart, piece, v_max));
  for (double r : {roots.r0, roots.r1}) {
    if (roots.count == 0) break;
    if (r > lo && r <= hi + kTimeTol) {
      double t = std::min(r, hi);
      if (reachable(t)) return t;
    }
  }
  return std::nullopt;
}

// Latest departure time on the piece's span such that the arrival point can be
// reached by `arrive`. Mirror image of efat_linear.
inline std::optional<double> lfdt_linear(const LinePiece& piece, Point2 arrive_point,
                                         double arrive, double v_max) {
  double lo = piece.t_start;
  double hi = std::min(piece.t_end, arrive);
  if (lo > arrive) return std::nullopt;
  auto reachable = [&](double t) {
    return travel_feasible(piece_position(Piece{piece}, t), t, arrive_point, arrive, v_max);
  };
  if (reachable(hi)) return hi;
  QuadraticRoots roots =
      solve_quadratic(detail::interception_coeffs(arrive_point, arrive, piece, v_max));
  for (double r : {roots.r1, roots.r0}) {
    if (roots.count == 0) break;
    if (r < hi && r >= lo - kTimeTol) {
      double t = std::max(r, lo);
      if (reachable(t)) return t;
    }
  }
  return std::nullopt;
}

struct EfatBracket {
  double lo = 0.0;  // unreachable (except when lo == hi)
  double hi = 0.0;  // reachable
};

// Binary search for the reachability boundary on the window. Valid because the
// set of reachable arrival times on a trajectory is an up-closed interval
// (the agent can shadow the target once it catches it).
inline std::optional<EfatBracket> efat_bisect(Point2 start, double depart,
                                              const Trajectory& traj, TimeInterval window,
                                              double v_max, double eps) {
  double lo = std::max(window.lo, traj.t_begin());
  double hi = std::min(window.hi, traj.t_end());
  if (hi < lo) return std::nullopt;
  auto reachable = [&](double t) {
    return travel_feasible(start, depart, traj.position_at(t), t, v_max);
  };
  if (reachable(lo)) return EfatBracket{lo, lo};
  if (!reachable(hi)) return std::nullopt;
  while (hi - lo > eps) {
    double mid = 0.5 * (lo + hi);
    if (reachable(mid))
      hi = mid;
    else
      lo = mid;
  }
  return EfatBracket{lo, hi};
}

// Earliest feasible arrival on `traj` restricted to `window`, departing
// `start` at `depart`. Lines are solved in closed form, arcs by bisection
// (the returned time is always verified reachable). Scanning pieces in time
// order is exact: reachability is monotone, so the first hit is the minimum.
inline std::optional<double> efat_trajectory(Point2 start, double depart, const Trajectory& traj,
                                             TimeInterval window, double v_max,
                                             double arc_eps = 1e-9) {
  double lo = std::max(window.lo, traj.t_begin());
  double hi = std::min(window.hi, traj.t_end());
  if (hi < lo || hi < depart) return std::nullopt;
  if (!travel_feasible(start, depart, traj.position_at(hi), hi, v_max)) return std::nullopt;
  double scan_lo = std::max(lo, depart);
  for (const auto& p : traj.pieces) {
    double a = std::max(scan_lo, piece_t_start(p));
    double b = std::min(hi, piece_t_end(p));
    if (b < a) continue;
    if (is_line(p)) {
      LinePiece sub = std::get<LinePiece>(clip_piece(p, a, b));
      if (auto t = efat_linear(start, depart, sub, v_max)) return *t;
    } else {
      auto reach = [&](double t) {
        return travel_feasible(start, depart, piece_position(p, t), t, v_max);
      };
      if (reach(a)) return a;
      if (reach(b)) {
        double u = a, v = b;
        while (v - u > arc_eps) {
          double mid = 0.5 * (u + v);
          if (reach(mid))
            v = mid;
          else
            u = mid;
        }
        return v;
      }
    }
  }
  return hi;  // reachable by the guard above; only hit on degenerate windows
}

// Latest feasible departure from `traj` (restricted to `window`) that still
// reaches `arrive_point` by `arrive`. Pieces are scanned latest-first.
inline std::optional<double> lfdt_trajectory(const Trajectory& traj, TimeInterval window,
                                             Point2 arrive_point, double arrive, double v_max,
                                             double arc_eps = 1e-9) {
  double lo = std::max(window.lo, traj.t_begin());
  double hi = std::min({window.hi, traj.t_end(), arrive});
  if (hi < lo) return std::nullopt;
  if (!travel_feasible(traj.position_at(lo), lo, arrive_point, arrive, v_max))
    return std::nullopt;
  for (auto it = traj.pieces.rbegin(); it != traj.pieces.rend(); ++it) {
    const Piece& p = *it;
    double a = std::max(lo, piece_t_start(p));
    double b = std::min(hi, piece_t_end(p));
    if (b < a) continue;
    if (is_line(p)) {
      LinePiece sub = std::get<LinePiece>(clip_piece(p, a, b));
      if (auto t = lfdt_linear(sub, arrive_point, arrive, v_max)) return *t;
    } else {
      auto can_depart = [&](double t) {
        return travel_feasible(piece_position(p, t), t, arrive_point, arrive, v_max);
      };
      if (can_depart(b)) return b;
      if (can_depart(a)) {
        double u = a, v = b;  // u departable, v not
        while (v - u > arc_eps) {
          double mid = 0.5 * (u + v);
          if (can_depart(mid))
            u = mid;
          else
            v = mid;
        }
        return u;
      }
    }
  }
  return lo;
}

// Candidate departure times minimizing EFAT(t) - t for a linear/linear pair:
// the real roots of the stationary-point quadratic, clamped into the departure
// piece's span, plus both span endpoints. Spurious roots from squaring are
// harmless because callers evaluate the objective at every candidate.
inline std::vector<double> sft_stationary_points(const LinePiece& piece_i,
                                                 const LinePiece& piece_j, double v_max) {
  Point2 vi = line_velocity(piece_i);
  Point2 vj = line_velocity(piece_j);
  // Reference positions extrapolated to t = 0.
  Point2 pi0 = piece_i.start - piece_i.t_start * vi;
  Point2 pj0 = piece_j.start - piece_j.t_start * vj;
  double c1 = pj0.x - pi0.x;
  double c2 = pj0.y - pi0.y;
  double A = norm2(vj) - v_max * v_max;
  double Bp = -dot(vi, vj) + v_max * v_max;
  double Cp = c1 * vj.x + c2 * vj.y;
  double Ap = norm2(vi) - v_max * v_max;
  double Dp = 2.0 * (vi.x * c1 + vi.y * c2);
  double Ep = c1 * c1 + c2 * c2;

  double g1 = Bp * Bp - A * Ap;
  double g2 = 2.0 * Bp * Cp + A * Dp;
  double f = 4.0 * (A + Bp) * (A + Bp);
  QuadraticCoeffs q{f * g1 - 4.0 * g1 * g1, f * g2 - 4.0 * g1 * g2,
                    f * (Cp * Cp - A * Ep) - g2 * g2};
  // The coefficients scale like v^8; normalize before the degeneracy test.
  double scale = std::max({std::abs(q.a2), std::abs(q.a1), std::abs(q.a0)});
  if (scale > 0) {
    q.a2 /= scale;
    q.a1 /= scale;
    q.a0 /= scale;
  }

  std::vector<double> out{piece_i.t_start, piece_i.t_end};
  QuadraticRoots roots = solve_quadratic(q);
  for (double r : {roots.r0, roots.r1}) {
    if (roots.count == 0) break;
    if (r > piece_i.t_start && r < piece_i.t_end) out.push_back(r);
    if (roots.count == 1) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace mtbound
