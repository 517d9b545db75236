#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include "mtbound/common.hpp"

namespace mtbound {

// Absolute tolerance for all geometric comparisons. Instance scale is O(100)
// units, comfortably inside double precision at this resolution.
inline constexpr double kGeomTol = 1e-9;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double norm2(Point2 p) { return p.x * p.x + p.y * p.y; }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }

inline double normalize_angle(double theta) {
  double a = std::fmod(theta, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

// Constant-velocity straight segment traversed over [t_start, t_end].
struct LinePiece {
  Point2 start;
  Point2 end;
  double t_start = 0.0;
  double t_end = 0.0;
};

// Circular arc swept at constant angular rate over [t_start, t_end].
// Angles are normalized to [0, 2*pi); the sweep runs from theta_start to
// theta_end in the ccw (or cw) direction and never exceeds a full turn.
struct ArcPiece {
  Point2 center;
  double radius = 0.0;
  double theta_start = 0.0;
  double theta_end = 0.0;
  bool ccw = true;
  double t_start = 0.0;
  double t_end = 0.0;
};

using Piece = std::variant<LinePiece, ArcPiece>;

inline double piece_t_start(const Piece& p) {
  return std::visit([](const auto& x) { return x.t_start; }, p);
}
inline double piece_t_end(const Piece& p) {
  return std::visit([](const auto& x) { return x.t_end; }, p);
}
inline bool is_line(const Piece& p) { return std::holds_alternative<LinePiece>(p); }

// Swept angle in [0, 2*pi). A zero span is a degenerate (clipped-to-a-point) arc.
inline double arc_span(const ArcPiece& a) {
  return a.ccw ? normalize_angle(a.theta_end - a.theta_start)
               : normalize_angle(a.theta_start - a.theta_end);
}

inline Point2 arc_point(const ArcPiece& a, double theta) {
  return {a.center.x + a.radius * std::cos(theta), a.center.y + a.radius * std::sin(theta)};
}

inline double arc_angle_at(const ArcPiece& a, double t) {
  double frac = (a.t_end > a.t_start) ? (t - a.t_start) / (a.t_end - a.t_start) : 0.0;
  double sweep = arc_span(a) * frac;
  return normalize_angle(a.ccw ? a.theta_start + sweep : a.theta_start - sweep);
}

// True when the normalized angle lies on the swept range of the arc.
inline bool arc_contains_angle(const ArcPiece& a, double theta) {
  double offset = a.ccw ? normalize_angle(theta - a.theta_start)
                        : normalize_angle(a.theta_start - theta);
  return offset <= arc_span(a) + 1e-12;
}

inline double arc_length(const ArcPiece& a) { return a.radius * arc_span(a); }

inline double piece_length(const Piece& p) {
  if (const auto* l = std::get_if<LinePiece>(&p)) return dist(l->start, l->end);
  return arc_length(std::get<ArcPiece>(p));
}

// Position at time t, assuming t inside the piece's span (clamped fraction).
inline Point2 piece_position(const Piece& p, double t) {
  if (const auto* l = std::get_if<LinePiece>(&p)) {
    double frac = (l->t_end > l->t_start)
                      ? std::clamp((t - l->t_start) / (l->t_end - l->t_start), 0.0, 1.0)
                      : 0.0;
    return l->start + frac * (l->end - l->start);
  }
  const auto& a = std::get<ArcPiece>(p);
  return arc_point(a, arc_angle_at(a, t));
}

inline Point2 piece_start_point(const Piece& p) { return piece_position(p, piece_t_start(p)); }
inline Point2 piece_end_point(const Piece& p) { return piece_position(p, piece_t_end(p)); }

// Velocity of a line piece in units/second; zero for a degenerate span.
inline Point2 line_velocity(const LinePiece& l) {
  double dt = l.t_end - l.t_start;
  if (dt <= 0) return {0.0, 0.0};
  return (1.0 / dt) * (l.end - l.start);
}

// Restriction of a piece to [a, b] (a subrange of its span). Split points come
// from inverting the time parameterization, which is linear for both kinds.
inline Piece clip_piece(const Piece& p, double a, double b) {
  if (const auto* l = std::get_if<LinePiece>(&p)) {
    return LinePiece{piece_position(p, a), piece_position(p, b), a, b};
  }
  const auto& arc = std::get<ArcPiece>(p);
  ArcPiece out = arc;
  out.theta_start = arc_angle_at(arc, a);
  out.theta_end = arc_angle_at(arc, b);
  out.t_start = a;
  out.t_end = b;
  return out;
}

// Ordered, time-contiguous, positionally continuous constant-speed pieces.
// Invariants are enforced by model validation, not by construction.
struct Trajectory {
  std::vector<Piece> pieces;
  double speed = 0.0;

  double t_begin() const { return pieces.empty() ? 0.0 : piece_t_start(pieces.front()); }
  double t_end() const { return pieces.empty() ? 0.0 : piece_t_end(pieces.back()); }

  const Piece& piece_at(double t) const {
    // Last piece whose start is <= t; boundaries resolve to the later piece.
    std::size_t lo = 0, hi = pieces.size();
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      if (piece_t_start(pieces[mid]) <= t)
        lo = mid;
      else
        hi = mid;
    }
    return pieces[lo];
  }

  Point2 position_at(double t) const {
    if (pieces.empty() || t < t_begin() - kGeomTol || t > t_end() + kGeomTol)
      throw OutOfHorizon("position_at(" + std::to_string(t) + ") outside trajectory span");
    return piece_position(piece_at(std::clamp(t, t_begin(), t_end())), t);
  }
};

// Pieces of `traj` restricted to [t_lo, t_hi]. A degenerate range yields one
// zero-length piece so callers always get a locus.
inline std::vector<Piece> clip_trajectory(const Trajectory& traj, double t_lo, double t_hi) {
  std::vector<Piece> out;
  for (const auto& p : traj.pieces) {
    double a = std::max(t_lo, piece_t_start(p));
    double b = std::min(t_hi, piece_t_end(p));
    if (b > a) out.push_back(clip_piece(p, a, b));
  }
  if (out.empty() && !traj.pieces.empty()) {
    double t = std::clamp(t_lo, traj.t_begin(), traj.t_end());
    out.push_back(clip_piece(traj.piece_at(t), t, t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimum Euclidean distance between piece loci (time parameterization ignored).
// Candidate enumeration only; every case reduces to closed-form points.

inline Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b) {
  Point2 ab = b - a;
  double len2 = norm2(ab);
  if (len2 <= 0) return a;
  double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + s * ab;
}

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  return dist(p, closest_point_on_segment(p, a, b));
}

inline double point_arc_distance(Point2 p, const ArcPiece& arc) {
  Point2 rel = p - arc.center;
  double r = norm(rel);
  double best = std::min(dist(p, arc_point(arc, arc.theta_start)),
                         dist(p, arc_point(arc, arc.theta_end)));
  if (r <= kGeomTol) return std::min(best, arc.radius);
  double phi = normalize_angle(std::atan2(rel.y, rel.x));
  if (arc_contains_angle(arc, phi)) best = std::min(best, std::abs(r - arc.radius));
  return best;
}

namespace detail {

inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto orient = [](Point2 p, Point2 q, Point2 r) { return cross(q - p, r - p); };
  double o1 = orient(a, b, c), o2 = orient(a, b, d);
  double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 &&
      o4 != 0)
    return true;
  return false;  // collinear overlaps fall back to endpoint distances (which are then 0)
}

inline double segment_segment_distance(const LinePiece& s1, const LinePiece& s2) {
  if (segments_intersect(s1.start, s1.end, s2.start, s2.end)) return 0.0;
  double d = point_segment_distance(s1.start, s2.start, s2.end);
  d = std::min(d, point_segment_distance(s1.end, s2.start, s2.end));
  d = std::min(d, point_segment_distance(s2.start, s1.start, s1.end));
  d = std::min(d, point_segment_distance(s2.end, s1.start, s1.end));
  return d;
}

// Intersection parameters of segment a->b with the circle |x - c| = r.
inline void segment_circle_hits(Point2 a, Point2 b, Point2 c, double r,
                                std::vector<Point2>& out) {
  Point2 d = b - a;
  Point2 f = a - c;
  double qa = norm2(d);
  if (qa <= 0) return;
  double qb = 2 * dot(f, d);
  double qc = norm2(f) - r * r;
  double disc = qb * qb - 4 * qa * qc;
  if (disc < 0) return;
  double sq = std::sqrt(disc);
  for (double s : {(-qb - sq) / (2 * qa), (-qb + sq) / (2 * qa)}) {
    if (s >= 0.0 && s <= 1.0) out.push_back(a + s * d);
  }
}

inline double segment_arc_distance(const LinePiece& seg, const ArcPiece& arc) {
  double best = std::min(point_arc_distance(seg.start, arc), point_arc_distance(seg.end, arc));
  best = std::min(best, point_segment_distance(arc_point(arc, arc.theta_start), seg.start, seg.end));
  best = std::min(best, point_segment_distance(arc_point(arc, arc.theta_end), seg.start, seg.end));
  // Interior-interior critical point: the segment point closest to the center,
  // paired radially (the common normal passes through the center).
  Point2 foot = closest_point_on_segment(arc.center, seg.start, seg.end);
  best = std::min(best, point_arc_distance(foot, arc));
  // Crossing the arc itself means distance zero.
  std::vector<Point2> hits;
  segment_circle_hits(seg.start, seg.end, arc.center, arc.radius, hits);
  for (const auto& h : hits) {
    double phi = normalize_angle(std::atan2(h.y - arc.center.y, h.x - arc.center.x));
    if (arc_contains_angle(arc, phi)) return 0.0;
  }
  return best;
}

inline double arc_arc_distance(const ArcPiece& a1, const ArcPiece& a2) {
  double best = std::min({point_arc_distance(arc_point(a1, a1.theta_start), a2),
                          point_arc_distance(arc_point(a1, a1.theta_end), a2),
                          point_arc_distance(arc_point(a2, a2.theta_start), a1),
                          point_arc_distance(arc_point(a2, a2.theta_end), a1)});
  Point2 c12 = a2.center - a1.center;
  double d12 = norm(c12);
  if (d12 > kGeomTol) {
    // All interior-interior critical pairs lie on the line through both centers.
    double phi1 = normalize_angle(std::atan2(c12.y, c12.x));
    double phi2 = normalize_angle(std::atan2(-c12.y, -c12.x));
    for (double t1 : {phi1, normalize_angle(phi1 + std::numbers::pi)}) {
      if (!arc_contains_angle(a1, t1)) continue;
      for (double t2 : {phi2, normalize_angle(phi2 + std::numbers::pi)}) {
        if (!arc_contains_angle(a2, t2)) continue;
        best = std::min(best, dist(arc_point(a1, t1), arc_point(a2, t2)));
      }
    }
    // Circle-circle intersections on both swept ranges give distance zero.
    double r1 = a1.radius, r2 = a2.radius;
    if (d12 <= r1 + r2 && d12 >= std::abs(r1 - r2)) {
      double x = (d12 * d12 + r1 * r1 - r2 * r2) / (2 * d12);
      double h2 = r1 * r1 - x * x;
      double h = h2 > 0 ? std::sqrt(h2) : 0.0;
      Point2 u = (1.0 / d12) * c12;
      Point2 perp{-u.y, u.x};
      for (double sgn : {1.0, -1.0}) {
        Point2 hit = a1.center + x * u + (sgn * h) * perp;
        double p1 = normalize_angle(std::atan2(hit.y - a1.center.y, hit.x - a1.center.x));
        double p2 = normalize_angle(std::atan2(hit.y - a2.center.y, hit.x - a2.center.x));
        if (arc_contains_angle(a1, p1) && arc_contains_angle(a2, p2)) return 0.0;
      }
    }
  }
  return best;
}

}  // namespace detail

inline double min_distance_pieces(const Piece& a, const Piece& b) {
  if (const auto* la = std::get_if<LinePiece>(&a)) {
    if (const auto* lb = std::get_if<LinePiece>(&b))
      return detail::segment_segment_distance(*la, *lb);
    return detail::segment_arc_distance(*la, std::get<ArcPiece>(b));
  }
  const auto& aa = std::get<ArcPiece>(a);
  if (const auto* lb = std::get_if<LinePiece>(&b)) return detail::segment_arc_distance(*lb, aa);
  return detail::arc_arc_distance(aa, std::get<ArcPiece>(b));
}

inline double min_distance_piece_sets(std::span<const Piece> a, std::span<const Piece> b) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pa : a)
    for (const auto& pb : b) best = std::min(best, min_distance_pieces(pa, pb));
  return best;
}

inline double point_piece_distance(Point2 p, const Piece& piece) {
  if (const auto* l = std::get_if<LinePiece>(&piece))
    return point_segment_distance(p, l->start, l->end);
  return point_arc_distance(p, std::get<ArcPiece>(piece));
}

}  // namespace mtbound
