#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mtbound/geometry.hpp"

namespace mtbound {

struct TimeWindow {
  double lo = 0.0;
  double hi = 0.0;
  double duration() const { return hi - lo; }
};

struct Target {
  int id = 0;
  Trajectory trajectory;
  std::vector<TimeWindow> windows;
};

enum class InstanceKind { simple, complex_kind, generic };

inline std::string to_string(InstanceKind k) {
  switch (k) {
    case InstanceKind::simple: return "simple";
    case InstanceKind::complex_kind: return "complex";
    default: return "generic";
  }
}

inline InstanceKind instance_kind_from_string(const std::string& s) {
  if (s == "simple") return InstanceKind::simple;
  if (s == "complex") return InstanceKind::complex_kind;
  if (s == "generic") return InstanceKind::generic;
  throw ParseError("kind", "expected simple|complex|generic, got '" + s + "'");
}

struct Instance {
  Point2 depot;
  double v_max = 0.0;
  double horizon = 0.0;
  std::vector<Target> targets;  // ids contiguous from 1, index = id - 1
  InstanceKind kind = InstanceKind::simple;

  const Target& target(int id) const { return targets.at(static_cast<std::size_t>(id - 1)); }
};

// Paper defaults for §VI.A-style generation; primary/secondary depend on kind.
struct GeneratorConfig {
  int n_targets = 5;
  double area_side = 100.0;
  double horizon = 100.0;
  Point2 depot{10.0, 10.0};
  double v_max = 4.0;
  double target_speed_min = 0.5;
  double target_speed_max = 1.0;
  double total_window_duration = 20.0;
  double primary_window = 15.0;   // 20 for simple
  double secondary_window = 5.0;  // 0 (absent) for simple
  InstanceKind kind = InstanceKind::complex_kind;
  std::uint64_t rng_seed = 0;
  int max_redraws = 64;

  static GeneratorConfig defaults(int n, InstanceKind kind, std::uint64_t seed) {
    GeneratorConfig cfg;
    cfg.n_targets = n;
    cfg.kind = kind;
    cfg.rng_seed = seed;
    if (kind == InstanceKind::simple) {
      cfg.primary_window = 20.0;
      cfg.secondary_window = 0.0;
    }
    return cfg;
  }
};

// ---------------------------------------------------------------------------
// Validation. Violations are data, not failures.

struct Violation {
  int target_id = 0;  // 0 for instance-level rules
  std::string rule;
  std::string detail;
};

inline std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> out;
  auto add = [&](int id, std::string rule, std::string detail) {
    out.push_back({id, std::move(rule), std::move(detail)});
  };
  auto finite = [](Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); };

  if (!(inst.v_max > 0)) add(0, "NonPositiveVmax", "v_max must be > 0");
  if (!(inst.horizon > 0)) add(0, "NonPositiveHorizon", "horizon must be > 0");
  if (!finite(inst.depot)) add(0, "NonFiniteDepot", "");

  for (std::size_t i = 0; i < inst.targets.size(); ++i) {
    const Target& tg = inst.targets[i];
    if (tg.id != static_cast<int>(i) + 1)
      add(tg.id, "NonContiguousIds", "ids must be 1..n in order");
    if (!(tg.trajectory.speed < inst.v_max))
      add(tg.id, "SpeedExceedsAgent", "target speed must be < v_max");

    const auto& pieces = tg.trajectory.pieces;
    if (pieces.empty()) {
      add(tg.id, "EmptyTrajectory", "");
      continue;
    }
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const Piece& p = pieces[k];
      double t0 = piece_t_start(p), t1 = piece_t_end(p);
      if (!(t1 > t0)) add(tg.id, "NonPositivePieceDuration", "piece " + std::to_string(k));
      if (!finite(piece_start_point(p)) || !finite(piece_end_point(p)))
        add(tg.id, "NonFiniteCoordinates", "piece " + std::to_string(k));
      if (const auto* arc = std::get_if<ArcPiece>(&p)) {
        if (!(arc->radius > 0)) add(tg.id, "NonPositiveRadius", "piece " + std::to_string(k));
      }
      if (t1 > t0) {
        double implied = piece_length(p) / (t1 - t0);
        double ref = std::max(tg.trajectory.speed, 1e-12);
        if (std::abs(implied - tg.trajectory.speed) > 1e-9 * std::max(1.0, ref))
          add(tg.id, "InconsistentSpeed",
              "piece " + std::to_string(k) + " implies " + std::to_string(implied));
      }
      if (k + 1 < pieces.size()) {
        if (std::abs(piece_t_end(p) - piece_t_start(pieces[k + 1])) > 1e-9)
          add(tg.id, "TimeGap", "between pieces " + std::to_string(k) + "," + std::to_string(k + 1));
        if (dist(piece_end_point(p), piece_start_point(pieces[k + 1])) > 1e-9)
          add(tg.id, "PositionGap",
              "between pieces " + std::to_string(k) + "," + std::to_string(k + 1));
      }
    }

    double span_lo = tg.trajectory.t_begin(), span_hi = tg.trajectory.t_end();
    if (tg.windows.empty()) add(tg.id, "NoWindows", "");
    for (std::size_t w = 0; w < tg.windows.size(); ++w) {
      const TimeWindow& win = tg.windows[w];
      if (!(win.lo >= 0 && win.lo < win.hi && win.hi <= inst.horizon + 1e-9))
        add(tg.id, "MalformedWindow", "window " + std::to_string(w));
      if (win.lo < span_lo - 1e-9 || win.hi > span_hi + 1e-9)
        add(tg.id, "WindowOutsideTrajectory", "window " + std::to_string(w));
      if (w + 1 < tg.windows.size() && tg.windows[w + 1].lo < win.hi)
        add(tg.id, "OverlappingWindows",
            "windows " + std::to_string(w) + "," + std::to_string(w + 1));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON schema (version 1):
// {version, units, kind, depot:[x,y], v_max, horizon,
//  targets:[{id, speed, windows:[[lo,hi]...],
//            pieces:[{type:"line",start,end,t_start,t_end} |
//                    {type:"arc",center,radius,theta_start,theta_end,ccw,t_start,t_end}]}]}

namespace detail {

inline nlohmann::json point_json(Point2 p) { return nlohmann::json::array({p.x, p.y}); }

inline Point2 point_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ParseError(field, "expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline const nlohmann::json& require(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ParseError(key, "missing field");
  return j.at(key);
}

}  // namespace detail

inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["version"] = 1;
  j["units"] = {{"length", "unit"}, {"time", "second"}, {"speed", "unit/second"}};
  j["kind"] = to_string(inst.kind);
  j["depot"] = detail::point_json(inst.depot);
  j["v_max"] = inst.v_max;
  j["horizon"] = inst.horizon;
  auto targets = nlohmann::json::array();
  for (const Target& tg : inst.targets) {
    nlohmann::json t;
    t["id"] = tg.id;
    t["speed"] = tg.trajectory.speed;
    auto windows = nlohmann::json::array();
    for (const TimeWindow& w : tg.windows) windows.push_back({w.lo, w.hi});
    t["windows"] = windows;
    auto pieces = nlohmann::json::array();
    for (const Piece& p : tg.trajectory.pieces) {
      nlohmann::json pj;
      if (const auto* l = std::get_if<LinePiece>(&p)) {
        pj["type"] = "line";
        pj["start"] = detail::point_json(l->start);
        pj["end"] = detail::point_json(l->end);
        pj["t_start"] = l->t_start;
        pj["t_end"] = l->t_end;
      } else {
        const auto& a = std::get<ArcPiece>(p);
        pj["type"] = "arc";
        pj["center"] = detail::point_json(a.center);
        pj["radius"] = a.radius;
        pj["theta_start"] = a.theta_start;
        pj["theta_end"] = a.theta_end;
        pj["ccw"] = a.ccw;
        pj["t_start"] = a.t_start;
        pj["t_end"] = a.t_end;
      }
      pieces.push_back(pj);
    }
    t["pieces"] = pieces;
    targets.push_back(t);
  }
  j["targets"] = targets;
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  using detail::require;
  if (require(j, "version").get<int>() != 1)
    throw ParseError("version", "unsupported instance version");
  Instance inst;
  inst.kind = instance_kind_from_string(require(j, "kind").get<std::string>());
  inst.depot = detail::point_from_json(require(j, "depot"), "depot");
  if (!require(j, "v_max").is_number()) throw ParseError("v_max", "expected number");
  inst.v_max = j.at("v_max").get<double>();
  inst.horizon = require(j, "horizon").get<double>();
  for (const auto& t : require(j, "targets")) {
    Target tg;
    tg.id = require(t, "id").get<int>();
    tg.trajectory.speed = require(t, "speed").get<double>();
    for (const auto& w : require(t, "windows")) {
      if (!w.is_array() || w.size() != 2) throw ParseError("windows", "expected [lo, hi]");
      tg.windows.push_back({w[0].get<double>(), w[1].get<double>()});
    }
    for (const auto& pj : require(t, "pieces")) {
      std::string type = require(pj, "type").get<std::string>();
      if (type == "line") {
        LinePiece l;
        l.start = detail::point_from_json(require(pj, "start"), "start");
        l.end = detail::point_from_json(require(pj, "end"), "end");
        l.t_start = require(pj, "t_start").get<double>();
        l.t_end = require(pj, "t_end").get<double>();
        tg.trajectory.pieces.emplace_back(l);
      } else if (type == "arc") {
        ArcPiece a;
        a.center = detail::point_from_json(require(pj, "center"), "center");
        a.radius = require(pj, "radius").get<double>();
        a.theta_start = require(pj, "theta_start").get<double>();
        a.theta_end = require(pj, "theta_end").get<double>();
        a.ccw = require(pj, "ccw").get<bool>();
        a.t_start = require(pj, "t_start").get<double>();
        a.t_end = require(pj, "t_end").get<double>();
        tg.trajectory.pieces.emplace_back(a);
      } else {
        throw ParseError("type", "expected line|arc, got '" + type + "'");
      }
    }
    inst.targets.push_back(std::move(tg));
  }
  return inst;
}

inline void save(const Instance& inst, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << instance_to_json(inst).dump(2) << "\n";
}

// Parses, then validates; rejects invalid instances.
inline Instance load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, e.what());
  }
  Instance inst = instance_from_json(j);
  auto violations = validate(inst);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid instance " << path << ":";
    for (const auto& v : violations)
      msg << " [target " << v.target_id << "] " << v.rule
          << (v.detail.empty() ? "" : " (" + v.detail + ")");
    throw ValidationError(msg.str());
  }
  return inst;
}

}  // namespace mtbound
