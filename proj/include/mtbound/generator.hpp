#pragma once

#include <vector>

#include "mtbound/feasible.hpp"

namespace mtbound {

namespace detail {

inline bool in_square(Point2 p, double side) {
  return p.x >= 0 && p.x <= side && p.y >= 0 && p.y <= side;
}

inline bool piece_confined(const Piece& p, double side) {
  if (const auto* l = std::get_if<LinePiece>(&p))
    return in_square(l->start, side) && in_square(l->end, side);
  // Arc bounding box: endpoints plus the axis-aligned extremes on the sweep.
  const auto& a = std::get<ArcPiece>(p);
  if (!in_square(piece_start_point(p), side) || !in_square(piece_end_point(p), side))
    return false;
  for (double phi : {0.0, 0.5 * std::numbers::pi, std::numbers::pi, 1.5 * std::numbers::pi}) {
    if (arc_contains_angle(a, phi) && !in_square(arc_point(a, phi), side)) return false;
  }
  return true;
}

inline bool trajectory_confined(const Trajectory& t, double side) {
  for (const auto& p : t.pieces)
    if (!piece_confined(p, side)) return false;
  return true;
}

// Splits [0, horizon] into n piece durations, each at least `min_dur`.
inline std::vector<double> draw_durations(Rng& rng, int n, double horizon, double min_dur) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<double> cuts{0.0, horizon};
    for (int k = 0; k + 1 < n; ++k) cuts.push_back(rng.uniform(0.0, horizon));
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> durs;
    bool ok = true;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      double d = cuts[k + 1] - cuts[k];
      if (d < min_dur) {
        ok = false;
        break;
      }
      durs.push_back(d);
    }
    if (ok) return durs;
  }
  // Even split as a last resort; keeps the generator total.
  return std::vector<double>(n, horizon / n);
}

inline Trajectory draw_trajectory(Rng& rng, const GeneratorConfig& cfg) {
  Trajectory traj;
  traj.speed = rng.uniform(cfg.target_speed_min, cfg.target_speed_max);
  Point2 pos{rng.uniform(0.0, cfg.area_side), rng.uniform(0.0, cfg.area_side)};
  double heading = rng.uniform(0.0, kTwoPi);

  int n_pieces = 1;
  if (cfg.kind == InstanceKind::complex_kind) n_pieces = rng.uniform_int(2, 5);
  if (cfg.kind == InstanceKind::generic) n_pieces = rng.uniform_int(3, 6);
  double min_dur = std::min(8.0, cfg.horizon / (2.0 * n_pieces));
  auto durs = draw_durations(rng, n_pieces, cfg.horizon, min_dur);

  double t = 0.0;
  for (int k = 0; k < n_pieces; ++k) {
    double dur = durs[k];
    bool make_arc = cfg.kind == InstanceKind::generic && (k % 2 == 1);
    if (cfg.kind == InstanceKind::complex_kind && k > 0) heading = rng.uniform(0.0, kTwoPi);
    if (!make_arc) {
      Point2 dir{std::cos(heading), std::sin(heading)};
      LinePiece l{pos, pos + (traj.speed * dur) * dir, t, t + dur};
      traj.pieces.emplace_back(l);
      pos = l.end;
    } else {
      // Tangent-continuous turn; radius floor keeps the sweep below 1.5*pi.
      double r_min = std::max(5.0, traj.speed * dur / (1.5 * std::numbers::pi));
      double radius = rng.uniform(r_min, std::max(r_min, 20.0));
      bool ccw = rng.coin();
      double side = ccw ? 1.0 : -1.0;
      Point2 normal{-std::sin(heading) * side, std::cos(heading) * side};
      ArcPiece a;
      a.center = pos + radius * normal;
      a.radius = radius;
      a.ccw = ccw;
      double sweep = traj.speed * dur / radius;
      double theta0 = std::atan2(pos.y - a.center.y, pos.x - a.center.x);
      a.theta_start = normalize_angle(theta0);
      a.theta_end = normalize_angle(ccw ? theta0 + sweep : theta0 - sweep);
      a.t_start = t;
      a.t_end = t + dur;
      traj.pieces.emplace_back(a);
      pos = piece_end_point(traj.pieces.back());
      heading += side * sweep;
    }
    t += dur;
  }
  return traj;
}

}  // namespace detail

// Random instance generation: draw confined constant-speed trajectories, find
// a seed tour with full-horizon windows, then place a primary window around
// each visit time (plus a disjoint random secondary window for complex and
// generic instances). Deterministic for a fixed seed.
inline Instance generate(const GeneratorConfig& cfg) {
  if (cfg.n_targets < 1) throw std::invalid_argument("n_targets must be >= 1");
  if (cfg.kind != InstanceKind::simple &&
      cfg.primary_window + cfg.secondary_window != cfg.total_window_duration)
    throw std::invalid_argument("primary + secondary must equal total_window_duration");
  Rng rng(cfg.rng_seed);

  for (int redraw = 0; redraw < cfg.max_redraws; ++redraw) {
    Instance inst;
    inst.depot = cfg.depot;
    inst.v_max = cfg.v_max;
    inst.horizon = cfg.horizon;
    inst.kind = cfg.kind;
    bool confined = true;
    for (int i = 0; i < cfg.n_targets; ++i) {
      Target tg;
      tg.id = i + 1;
      for (int attempt = 0;; ++attempt) {
        tg.trajectory = detail::draw_trajectory(rng, cfg);
        if (detail::trajectory_confined(tg.trajectory, cfg.area_side)) break;
        if (attempt >= 512) {
          confined = false;
          break;
        }
      }
      tg.windows.push_back({0.0, cfg.horizon});
      inst.targets.push_back(std::move(tg));
      if (!confined) break;
    }
    if (!confined) continue;

    auto seed_tour = find_feasible(inst, 32, Effort::thorough);
    if (!seed_tour) continue;

    for (std::size_t k = 0; k < seed_tour->visit_order.size(); ++k) {
      Target& tg = inst.targets[static_cast<std::size_t>(seed_tour->visit_order[k] - 1)];
      double visit = seed_tour->arrival_times[k];
      double dur = cfg.primary_window;
      double lo_min = std::max(0.0, visit - dur);
      double lo_max = std::min(visit, cfg.horizon - dur);
      TimeWindow primary{0.0, 0.0};
      primary.lo = rng.uniform(lo_min, std::max(lo_min, lo_max));
      primary.hi = primary.lo + dur;
      tg.windows.clear();
      tg.windows.push_back(primary);
      if (cfg.kind != InstanceKind::simple && cfg.secondary_window > 0) {
        double sdur = cfg.secondary_window;
        for (int attempt = 0; attempt < 4096; ++attempt) {
          double lo = rng.uniform(0.0, cfg.horizon - sdur);
          if (lo + sdur <= primary.lo || lo >= primary.hi) {
            tg.windows.push_back({lo, lo + sdur});
            break;
          }
        }
        std::sort(tg.windows.begin(), tg.windows.end(),
                  [](const TimeWindow& a, const TimeWindow& b) { return a.lo < b.lo; });
      }
    }
    return inst;
  }
  throw GenerationFailed(cfg.max_redraws);
}

}  // namespace mtbound
