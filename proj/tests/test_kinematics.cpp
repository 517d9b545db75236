#include <catch2/catch_amalgamated.hpp>

#include "mtbound/kinematics.hpp"
#include "oracles.hpp"

using namespace mtbound;

namespace {

Trajectory one_line(Point2 a, Point2 b, double t0, double t1) {
  Trajectory t;
  t.pieces.emplace_back(LinePiece{a, b, t0, t1});
  t.speed = dist(a, b) / (t1 - t0);
  return t;
}

// Random moving-line trajectory confined to a band; speed strictly below cap.
Trajectory random_line_traj(Rng& rng, double y0, double y1, double t0, double t1,
                            double max_speed) {
  Point2 a{rng.uniform(0, 60), rng.uniform(y0, y1)};
  double speed = rng.uniform(0.3, max_speed);
  double heading = rng.uniform(0, kTwoPi);
  Point2 b = a + (speed * (t1 - t0)) * Point2{std::cos(heading), std::sin(heading)};
  Trajectory t;
  t.pieces.emplace_back(LinePiece{a, b, t0, t1});
  t.speed = speed;
  return t;
}

}  // namespace

TEST_CASE("travel_feasible boundary cases", "[kinematics]") {
  CHECK(travel_feasible({10, 10}, 0.0, {10, 14}, 1.0, 4.0));   // distance 4 = 4*1
  CHECK(!travel_feasible({10, 10}, 0.0, {10, 14}, 0.9, 4.0));  // just too tight
  CHECK(!travel_feasible({0, 0}, 1.0, {0, 0}, 0.5, 4.0));      // arrive < depart
}

TEST_CASE("efat_linear stationary target", "[kinematics]") {
  LinePiece stationary{{8, 0}, {8, 0}, 0, 10};
  auto t = efat_linear({0, 0}, 0.0, stationary, 4.0);
  REQUIRE(t);
  CHECK(*t == Catch::Approx(2.0).margin(1e-9));
}

TEST_CASE("efat_linear zero distance returns depart", "[kinematics]") {
  LinePiece piece{{0, 0}, {10, 0}, 0, 10};
  auto t = efat_linear(piece_position(Piece{piece}, 3.0), 3.0, piece, 4.0);
  REQUIRE(t);
  CHECK(*t == Catch::Approx(3.0).margin(1e-9));
}

TEST_CASE("efat_linear matches bisection on a moving target", "[kinematics]") {
  Trajectory traj = one_line({0, 0}, {10, 0}, 0, 10);  // speed 1
  auto closed = efat_linear({0, -3}, 0.0, std::get<LinePiece>(traj.pieces[0]), 2.0);
  auto bracket = efat_bisect({0, -3}, 0.0, traj, {0, 10}, 2.0, 1e-7);
  REQUIRE(closed);
  REQUIRE(bracket);
  CHECK(*closed == Catch::Approx(bracket->hi).margin(1e-6));
}

TEST_CASE("efat_linear agrees with bisection on random cases", "[kinematics]") {
  Rng rng(31);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Trajectory traj = random_line_traj(rng, 10, 30, 0, 20, 1.0);
    Point2 start{rng.uniform(0, 60), rng.uniform(0, 8)};
    double depart = rng.uniform(0, 10);
    double v_max = rng.uniform(1.5, 4.0);
    auto closed = efat_linear(start, depart, std::get<LinePiece>(traj.pieces[0]), v_max);
    auto bracket = efat_bisect(start, depart, traj, {0, 20}, v_max, 1e-8);
    REQUIRE(closed.has_value() == bracket.has_value());
    if (closed) {
      CHECK(*closed == Catch::Approx(bracket->hi).margin(1e-8 + 1e-7));
      ++checked;
    }
  }
  CHECK(checked > 50);
}

TEST_CASE("efat_trajectory reduces to efat_linear on one piece", "[kinematics]") {
  Trajectory traj = one_line({5, 5}, {25, 5}, 0, 20);
  Point2 start{0, 0};
  auto a = efat_trajectory(start, 0.0, traj, {0, 20}, 3.0);
  auto b = efat_linear(start, 0.0, std::get<LinePiece>(traj.pieces[0]), 3.0);
  REQUIRE(a);
  REQUIRE(b);
  CHECK(*a == Catch::Approx(*b).margin(1e-12));
}

TEST_CASE("efat_trajectory boundary-only reachability", "[kinematics]") {
  // Reachable exactly at the window end.
  Trajectory traj = one_line({8, 0}, {8, 0}, 0, 10);  // stationary at distance 8
  auto t = efat_trajectory({0, 0}, 0.0, traj, {0, 2.0}, 4.0);
  REQUIRE(t);
  CHECK(*t == Catch::Approx(2.0).margin(1e-9));
  CHECK(!efat_trajectory({0, 0}, 0.0, traj, {0, 1.9}, 4.0));
}

TEST_CASE("efat_trajectory matches bisection on polylines", "[kinematics]") {
  Rng rng(47);
  for (int trial = 0; trial < 50; ++trial) {
    Trajectory traj;
    traj.speed = rng.uniform(0.4, 1.0);
    Point2 pos{rng.uniform(0, 40), rng.uniform(15, 30)};
    double t = 0;
    for (int k = 0; k < 3; ++k) {
      double heading = rng.uniform(0, kTwoPi);
      double dur = rng.uniform(3, 8);
      Point2 next = pos + (traj.speed * dur) * Point2{std::cos(heading), std::sin(heading)};
      traj.pieces.emplace_back(LinePiece{pos, next, t, t + dur});
      pos = next;
      t += dur;
    }
    Point2 start{rng.uniform(0, 40), rng.uniform(0, 10)};
    double depart = rng.uniform(0, 5);
    double v_max = rng.uniform(1.5, 4.0);
    auto got = efat_trajectory(start, depart, traj, {0, t}, v_max);
    auto want = oracles::efat_bisect_plain(start, depart, traj, {0, t}, v_max, 1e-9);
    REQUIRE(got.has_value() == want.has_value());
    if (got) CHECK(*got == Catch::Approx(*want).margin(1e-6));
  }
}

TEST_CASE("efat_bisect brackets and edge cases", "[kinematics]") {
  Trajectory traj = one_line({8, 0}, {8, 0}, 0, 10);
  auto br = efat_bisect({0, 0}, 0.0, traj, {0, 10}, 4.0, 1e-6);
  REQUIRE(br);
  CHECK(br->hi - br->lo <= 1e-6);
  CHECK(br->lo <= 2.0 + 1e-6);
  CHECK(br->hi >= 2.0 - 1e-6);

  CHECK(!efat_bisect({100, 100}, 0.0, traj, {0, 0.1}, 1.0, 1e-6));  // unreachable window

  // Already reachable at the window start.
  auto instant = efat_bisect({8, 0}, 0.0, traj, {0, 10}, 4.0, 1e-6);
  REQUIRE(instant);
  CHECK(instant->lo == 0.0);
  CHECK(instant->hi == 0.0);
}

TEST_CASE("efat_bisect on arc trajectories verifies reachability", "[kinematics]") {
  ArcPiece a;
  a.center = {20, 20};
  a.radius = 10;
  a.theta_start = 0;
  a.theta_end = normalize_angle(3.0);
  a.ccw = true;
  a.t_start = 0;
  a.t_end = 30;
  Trajectory traj;
  traj.pieces.emplace_back(a);
  traj.speed = arc_length(a) / 30.0;
  auto br = efat_bisect({0, 0}, 0.0, traj, {0, 30}, 2.0, 1e-6);
  REQUIRE(br);
  CHECK(br->hi - br->lo <= 1e-6);
  CHECK(travel_feasible({0, 0}, 0.0, traj.position_at(br->hi), br->hi, 2.0));
  if (br->lo > 0)
    CHECK(!travel_feasible({0, 0}, 0.0, traj.position_at(br->lo - 1e-9), br->lo - 1e-9, 2.0));
}

TEST_CASE("lfdt_linear stationary piece", "[kinematics]") {
  LinePiece stationary{{8, 0}, {8, 0}, 0, 20};
  auto t = lfdt_linear(stationary, {0, 0}, 10.0, 4.0);
  REQUIRE(t);
  CHECK(*t == Catch::Approx(8.0).margin(1e-9));  // arrive - d/v_max
}

TEST_CASE("lfdt_linear arrival point on trajectory", "[kinematics]") {
  LinePiece piece{{0, 0}, {20, 0}, 0, 20};
  Point2 arrive_pt = piece_position(Piece{piece}, 7.0);
  auto t = lfdt_linear(piece, arrive_pt, 7.0, 4.0);
  REQUIRE(t);
  CHECK(*t == Catch::Approx(7.0).margin(1e-9));
}

TEST_CASE("lfdt inverts efat (fixed point)", "[kinematics]") {
  Rng rng(59);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Trajectory ti = random_line_traj(rng, 0, 10, 0, 20, 1.0);
    Trajectory tj = random_line_traj(rng, 20, 32, 0, 40, 1.0);
    double v_max = rng.uniform(1.6, 4.0);
    double t = rng.uniform(0, 15);
    auto e = efat_trajectory(ti.position_at(t), t, tj, {0, 40}, v_max);
    if (!e) continue;
    auto l = lfdt_trajectory(ti, {0, 20}, tj.position_at(*e), *e, v_max);
    REQUIRE(l);
    CHECK(std::abs(*l - t) <= 1e-6);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("efat is strictly monotonic in the departure time", "[kinematics]") {
  Rng rng(61);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Trajectory ti = random_line_traj(rng, 0, 10, 0, 20, 1.0);
    Trajectory tj = random_line_traj(rng, 20, 32, 0, 60, 1.0);
    double v_max = rng.uniform(1.6, 4.0);
    double t1 = rng.uniform(0, 18), t2 = rng.uniform(0, 18);
    if (t1 > t2) std::swap(t1, t2);
    if (dist(ti.position_at(t1), ti.position_at(t2)) <= 1e-6) continue;
    auto e1 = efat_trajectory(ti.position_at(t1), t1, tj, {0, 60}, v_max);
    auto e2 = efat_trajectory(ti.position_at(t2), t2, tj, {0, 60}, v_max);
    if (!e1 || !e2) continue;
    if (*e2 >= 60.0 - 1e-6) continue;  // window-clamped, monotonicity voided
    CHECK(*e1 < *e2);
    ++checked;
  }
  CHECK(checked > 80);
}

TEST_CASE("efat tightness: slightly earlier arrivals are infeasible", "[kinematics]") {
  Rng rng(67);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Trajectory tj = random_line_traj(rng, 20, 30, 0, 40, 1.0);
    Point2 start{rng.uniform(0, 50), rng.uniform(0, 10)};
    double depart = rng.uniform(0, 10);
    double v_max = rng.uniform(1.5, 3.5);
    auto e = efat_trajectory(start, depart, tj, {0, 40}, v_max);
    if (!e || *e <= depart + 1e-3) continue;
    double delta = 1e-4;
    double earlier = *e - delta;
    // Not feasible strictly before the EFAT (allowing the 1e-9 comparison slack
    // scaled through the local closing speed).
    double d = dist(start, tj.position_at(earlier));
    CHECK(d > v_max * (earlier - depart) - 1e-7);
    ++checked;
  }
  CHECK(checked > 30);
}

TEST_CASE("sft_stationary_points: stationary pair gives flat objective", "[kinematics]") {
  LinePiece pi{{0, 0}, {0, 0}, 0, 10};
  LinePiece pj{{8, 0}, {8, 0}, 0, 10};
  auto cands = sft_stationary_points(pi, pj, 4.0);
  REQUIRE(cands.size() >= 2);
  // EFAT(t) - t is constant (= 2) for every candidate admitting an arrival.
  for (double t : cands) {
    auto e = oracles::efat_piece({0, 0}, t, pj, 0, 30, 4.0);
    if (e) CHECK(*e - t == Catch::Approx(2.0).margin(1e-9));
  }
}

TEST_CASE("sft_stationary_points finds the grid minimum on perpendicular lines",
          "[kinematics]") {
  // Departure target moves along +x; arrival target along +y. The arrival
  // span is generous so the unrestricted EFAT exists for every departure;
  // binding arrival windows are handled by the AlgoSFT shrink, not here.
  LinePiece pi{{0, 0}, {20, 0}, 0, 20};
  LinePiece pj{{30, -10}, {30, 50}, 0, 60};
  double v_max = 3.0;
  Trajectory ti, tj;
  ti.pieces.emplace_back(pi);
  ti.speed = 1.0;
  tj.pieces.emplace_back(pj);
  tj.speed = 1.0;

  auto cands = sft_stationary_points(pi, pj, v_max);
  double best = std::numeric_limits<double>::infinity();
  for (double t : cands) {
    auto e = oracles::efat_piece(ti.position_at(t), t, pj, 0, 60, v_max);
    if (e) best = std::min(best, *e - t);
  }
  auto grid = oracles::sft_grid(ti, {0, 20}, tj, {0, 60}, v_max, 100000);
  REQUIRE(grid);
  CHECK(best == Catch::Approx(*grid).margin(1e-4));
}

TEST_CASE("sft_stationary_points near-intersecting trajectories", "[kinematics]") {
  // Paths cross 0.5 units apart in space-time: near-zero minimum, minimizer
  // strictly interior.
  double T = 28.2842712474619;
  LinePiece pi{{0, 0}, {20, 20}, 0, T};
  LinePiece pj{{0.5, 20.5}, {20.5, 0.5}, 0, T};
  double v_max = 4.0;
  Trajectory ti, tj;
  ti.pieces.emplace_back(pi);
  ti.speed = 1.0;
  tj.pieces.emplace_back(pj);
  tj.speed = 1.0;
  auto cands = sft_stationary_points(pi, pj, v_max);
  double best = std::numeric_limits<double>::infinity();
  for (double t : cands) {
    auto e = oracles::efat_piece(ti.position_at(t), t, pj, 0, T, v_max);
    if (e) best = std::min(best, *e - t);
  }
  auto grid = oracles::sft_grid(ti, {0, T}, tj, {0, T}, v_max, 100000);
  REQUIRE(grid);
  CHECK(best >= 0.0);
  CHECK(best == Catch::Approx(*grid).margin(1e-4));
  CHECK(*grid < 0.2);
}

TEST_CASE("sft_stationary_points pinpoints an exact space-time crossing", "[kinematics]") {
  double T = 28.2842712474619;
  LinePiece pi{{0, 0}, {20, 20}, 0, T};
  LinePiece pj{{0, 20}, {20, 0}, 0, T};
  auto cands = sft_stationary_points(pi, pj, 4.0);
  Trajectory ti, tj;
  ti.pieces.emplace_back(pi);
  ti.speed = 1.0;
  tj.pieces.emplace_back(pj);
  tj.speed = 1.0;
  // Some candidate sits at the crossing time, where the cost reaches 0.
  double closest = std::numeric_limits<double>::infinity();
  for (double t : cands)
    closest = std::min(closest, dist(ti.position_at(t), tj.position_at(t)));
  CHECK(closest <= 1e-6);
  auto grid = oracles::sft_grid(ti, {0, T}, tj, {0, T}, 4.0, 100000);
  REQUIRE(grid);
  CHECK(*grid < 1e-3);
}

TEST_CASE("oracle efat agrees with plain bisection", "[kinematics]") {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    Trajectory tj = random_line_traj(rng, 15, 30, 0, 30, 1.0);
    Point2 start{rng.uniform(0, 50), rng.uniform(0, 10)};
    double depart = rng.uniform(0, 10);
    double v_max = rng.uniform(1.5, 4.0);
    auto a = oracles::efat_window(start, depart, tj, {0, 30}, v_max);
    auto b = oracles::efat_bisect_plain(start, depart, tj, {0, 30}, v_max, 1e-10);
    REQUIRE(a.has_value() == b.has_value());
    if (a) CHECK(*a == Catch::Approx(*b).margin(1e-7));
  }
}
