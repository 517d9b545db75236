#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "mtbound/feasible.hpp"

namespace mtbound {

// Deterministic SVG rendering: fixed-precision coordinates, no timestamps.
// Target paths are drawn faintly, the window-highlighted locus portions in the
// target's color, the agent tour in dark blue. Lower-bound tours show the
// inter-node travel legs only, so the ride along each visited interval appears
// as a gap in the agent's path.
namespace svg {

inline const char* palette(int i) {
  static const char* colors[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00",
                                 "#a65628", "#f781bf", "#17becf", "#bcbd22", "#8c564b"};
  return colors[i % 10];
}

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

struct Frame {
  double min_x = 0, min_y = 0, scale = 1, height = 0;
  double px(double x) const { return (x - min_x) * scale + 20.0; }
  double py(double y) const { return height - ((y - min_y) * scale + 20.0); }
};

inline std::vector<Point2> sample_piece(const Piece& p) {
  std::vector<Point2> pts;
  if (is_line(p)) {
    pts.push_back(piece_start_point(p));
    pts.push_back(piece_end_point(p));
    return pts;
  }
  const auto& a = std::get<ArcPiece>(p);
  int n = std::max(2, static_cast<int>(arc_span(a) / 0.05));
  for (int k = 0; k <= n; ++k) {
    double t = a.t_start + (a.t_end - a.t_start) * k / n;
    pts.push_back(piece_position(p, t));
  }
  return pts;
}

inline void polyline(std::ostringstream& out, const Frame& f, const std::vector<Point2>& pts,
                     const std::string& style) {
  if (pts.size() < 2) return;
  out << "<polyline fill=\"none\" " << style << " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out << " ";
    out << num(f.px(pts[i].x)) << "," << num(f.py(pts[i].y));
  }
  out << "\"/>\n";
}

inline void pieces_path(std::ostringstream& out, const Frame& f, const std::vector<Piece>& pieces,
                        const std::string& style) {
  for (const auto& p : pieces) polyline(out, f, sample_piece(p), style);
}

}  // namespace svg

// Renders the instance; overlays a feasible tour (connected polyline) and/or a
// lower-bound tour (travel legs between interval endpoints, with gaps).
inline std::string render_svg(const Instance& inst, const FeasibleTour* tour,
                              const GtspSolution* lb, double width = 720.0) {
  double min_x = inst.depot.x, max_x = inst.depot.x;
  double min_y = inst.depot.y, max_y = inst.depot.y;
  for (const Target& tg : inst.targets) {
    for (const Piece& p : tg.trajectory.pieces) {
      for (const Point2& pt : svg::sample_piece(p)) {
        min_x = std::min(min_x, pt.x);
        max_x = std::max(max_x, pt.x);
        min_y = std::min(min_y, pt.y);
        max_y = std::max(max_y, pt.y);
      }
    }
  }
  double span = std::max({max_x - min_x, max_y - min_y, 1.0});
  svg::Frame f;
  f.min_x = min_x;
  f.min_y = min_y;
  f.scale = (width - 40.0) / span;
  f.height = (max_y - min_y) * f.scale + 40.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << svg::num(width)
      << "\" height=\"" << svg::num(f.height) << "\" viewBox=\"0 0 " << svg::num(width) << " "
      << svg::num(f.height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  for (const Target& tg : inst.targets) {
    std::string faint = "stroke=\"#cccccc\" stroke-width=\"1\"";
    svg::pieces_path(out, f, tg.trajectory.pieces, faint);
  }
  for (const Target& tg : inst.targets) {
    std::string strong =
        std::string("stroke=\"") + svg::palette(tg.id - 1) + "\" stroke-width=\"2.5\"";
    for (const TimeWindow& w : tg.windows)
      svg::pieces_path(out, f, clip_trajectory(tg.trajectory, w.lo, w.hi), strong);
  }

  if (tour) {
    std::vector<Point2> path{inst.depot};
    for (std::size_t k = 0; k < tour->visit_order.size(); ++k) {
      const Target& tg = inst.target(tour->visit_order[k]);
      path.push_back(tg.trajectory.position_at(tour->arrival_times[k]));
    }
    path.push_back(inst.depot);
    svg::polyline(out, f, path, "stroke=\"#1f3f8f\" stroke-width=\"1.8\"");
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
      out << "<circle cx=\"" << svg::num(f.px(path[k].x)) << "\" cy=\""
          << svg::num(f.py(path[k].y)) << "\" r=\"3\" fill=\"#1f3f8f\"/>\n";
    }
  }

  if (lb) {
    // Travel legs: leave each visited interval at its end point, arrive at the
    // next interval's start point.
    Point2 from = inst.depot;
    std::string leg_style = "stroke=\"#1f3f8f\" stroke-width=\"1.8\" stroke-dasharray=\"6,3\"";
    for (std::size_t k = 0; k < lb->visited.size(); ++k) {
      const IntervalNode& node = lb->visited[k];
      if (node.role == NodeRole::depot_out) continue;
      if (node.role == NodeRole::depot_in) {
        svg::polyline(out, f, {from, inst.depot}, leg_style);
        break;
      }
      const Trajectory& traj = inst.target(node.target_id).trajectory;
      Point2 arrive = traj.position_at(node.t_lo);
      svg::polyline(out, f, {from, arrive}, leg_style);
      from = traj.position_at(node.t_hi);
    }
  }

  out << "<rect x=\"" << svg::num(f.px(inst.depot.x) - 4) << "\" y=\""
      << svg::num(f.py(inst.depot.y) - 4) << "\" width=\"8\" height=\"8\" fill=\"black\"/>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace mtbound
