#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gvdtg/map_io.hpp"
#include "gvdtg/sim.hpp"
#include "support.hpp"

using namespace gvdtg;

namespace {

World room_world(int w, int h) { return make_world(test::walled_room(w, h), "room"); }

Pose at_cell(const OccupancyGrid& g, Cell c, double theta = 0.0) {
  const Point2 p = g.cell_center(c);
  return {p.x, p.y, theta};
}

int steps_to_finish(Pose pose, const std::vector<Point2>& path, const Kinematics& k, const OccupancyGrid& belief) {
  std::size_t next = 0;
  for (int step = 1; step < 10000; ++step) {
    const DriveOutcome o = drive(pose, path, next, k, belief);
    REQUIRE_FALSE(o.replan);
    pose = o.pose;
    next = o.next;
    if (o.done) return step;
  }
  return -1;
}

}  // namespace

TEST_CASE("worlds reject unknown cells") {
  OccupancyGrid g(5, 5, 0.05, CellState::kFree);
  g.set(2, 2, CellState::kUnknown);
  CHECK_THROWS_AS(make_world(g, "bad"), SimError);
}

TEST_CASE("rays report the entry distance of each cell") {
  const OccupancyGrid g(20, 20, 0.05, CellState::kFree);
  std::vector<std::pair<Cell, double>> seen;
  trace_ray(g, g.cell_center({2, 5}), 0.0, 4.0, [&](Cell c, double t) {
    seen.emplace_back(c, t);
    return true;
  });
  REQUIRE(seen.size() == 5);
  CHECK(seen[0].first == Cell{2, 5});
  CHECK(seen[0].second == 0.0);
  CHECK(seen[1].first == Cell{3, 5});
  CHECK(seen[1].second == doctest::Approx(0.5));
  CHECK(seen[4].second == doctest::Approx(3.5));
}

TEST_CASE("swept cells include both sides of a corner crossing") {
  const OccupancyGrid g(10, 10, 0.05, CellState::kFree);
  const auto cells = swept_cells(g, g.cell_center({1, 1}), g.cell_center({2, 2}));
  CHECK(cells.size() == 4);
  const auto straight = swept_cells(g, g.cell_center({1, 1}), g.cell_center({4, 1}));
  CHECK(straight.size() == 4);
}

TEST_CASE("an empty world returns max-range misses") {
  const World w = make_world(OccupancyGrid(200, 200, 0.05, CellState::kFree), "open");
  const SensorModel s;
  const auto r = scan(w, at_cell(w.truth, {100, 100}), s);
  REQUIRE(r.size() == 360);
  for (const auto& b : r) {
    CHECK_FALSE(b.hit);
    CHECK(b.distance == s.range_m);
  }
}

TEST_CASE("a flat wall 2 m ahead is hit at 2 m within half a cell") {
  OccupancyGrid g(120, 60, 0.05, CellState::kFree);
  const Pose pose = at_cell(g, {20, 30});
  // Robot center at x = 1.025 m; column 60 spans 3.00 to 3.05 m.
  for (int y = 0; y < 60; ++y) g.set(60, y, CellState::kOccupied);
  const World w = make_world(g, "wall");
  SensorModel s;
  s.beams = 1;
  const auto r = scan(w, pose, s);
  REQUIRE(r.size() == 1);
  CHECK(r[0].bearing == doctest::Approx(0.0));
  CHECK(r[0].hit);
  CHECK(std::abs(r[0].distance - 2.0) <= 0.05 / 2 + 1e-12);
}

TEST_CASE("a single beam reads along the heading") {
  const World w = room_world(60, 60);
  SensorModel s;
  s.beams = 1;
  const auto r = scan(w, at_cell(w.truth, {30, 30}, 1.0), s);
  REQUIRE(r.size() == 1);
  CHECK(r[0].bearing == doctest::Approx(1.0));
}

TEST_CASE("integrating scans") {
  const World w = room_world(200, 200);
  const Pose pose = at_cell(w.truth, {100, 100});

  SUBCASE("a miss frees every traversed cell") {
    OccupancyGrid belief(200, 200, 0.05);
    const BeamReading miss{0.0, 3.5, false};
    const auto changed = integrate(belief, pose, std::span(&miss, 1));
    CHECK(belief.count(CellState::kOccupied) == 0);
    CHECK(belief.count(CellState::kFree) == changed.size());
    CHECK(changed.size() >= 70);
  }

  SUBCASE("one hit adds exactly one occupied cell") {
    SensorModel s;
    s.beams = 1;
    const auto r = scan(w, at_cell(w.truth, {20, 100}, std::numbers::pi), s);
    REQUIRE(r[0].hit);
    OccupancyGrid belief(200, 200, 0.05);
    integrate(belief, at_cell(w.truth, {20, 100}, std::numbers::pi), r);
    CHECK(belief.count(CellState::kOccupied) == 1);
    CHECK(belief.at(0, 100) == CellState::kOccupied);
  }

  SUBCASE("repeating a scan changes nothing") {
    OccupancyGrid belief(200, 200, 0.05);
    const auto r = scan(w, pose, SensorModel{});
    integrate(belief, pose, r);
    const OccupancyGrid once = belief;
    CHECK(integrate(belief, pose, r).empty());
    CHECK(belief == once);
  }
}

TEST_CASE("driving") {
  const OccupancyGrid belief(100, 100, 0.05, CellState::kFree);
  const Pose start = at_cell(belief, {50, 50});

  SUBCASE("at the waypoint only the index advances") {
    const std::vector<Point2> path{{start.x, start.y}};
    const auto o = drive(start, path, 0, Kinematics{}, belief);
    CHECK(o.next == 1);
    CHECK(o.done);
    CHECK(o.pose.x == start.x);
    CHECK(o.pose.y == start.y);
    CHECK(o.pose.theta == start.theta);
    CHECK(o.moved == 0.0);
  }

  SUBCASE("a 1 m leg at 0.3 m/s and 0.1 s steps") {
    const std::vector<Point2> path{{start.x + 1.0, start.y}};
    Kinematics exact;
    exact.reach_cells = 0.0;
    CHECK(steps_to_finish(start, path, exact, belief) == static_cast<int>(std::ceil(1.0 / 0.03 - 1e-9)));
    // The default half-cell reach tolerance ends the leg once 2.5 cm remain.
    CHECK(steps_to_finish(start, path, Kinematics{}, belief) == 33);
  }

  SUBCASE("a waypoint behind the robot starts with pure rotation") {
    const std::vector<Point2> path{{start.x - 1.0, start.y}};
    Pose p = start;
    const Kinematics k;
    const double turn = k.omega_max_deg * std::numbers::pi / 180.0 * k.dt;
    for (int i = 0; i < 10; ++i) {
      const auto o = drive(p, path, 0, k, belief);
      CHECK(o.moved == 0.0);
      CHECK(std::abs(std::abs(o.pose.theta - p.theta) - turn) < 1e-9);
      p = o.pose;
    }
    const int needed = static_cast<int>(std::ceil((180.0 - k.heading_gate_deg) / (k.omega_max_deg * k.dt)));
    CHECK(steps_to_finish(start, path, k, belief) > needed);
  }

  SUBCASE("an obstacle on the swept segment requests a replan") {
    OccupancyGrid blocked = belief;
    blocked.set(52, 50, CellState::kOccupied);
    const std::vector<Point2> path{blocked.cell_center({60, 50})};
    Pose p = start;
    bool replanned = false;
    for (int i = 0; i < 10 && !replanned; ++i) {
      const auto step = drive(p, path, 0, Kinematics{}, blocked);
      replanned = step.replan;
      p = step.pose;
    }
    CHECK(replanned);
    CHECK(blocked.at(blocked.world_to_cell({p.x, p.y})) == CellState::kFree);
  }
}

TEST_CASE("an empty room is explored") {
  const World w = load_world(test::data_path("fixtures/empty_room.grid"));
  Config cfg;
  cfg.seed = 3;
  const auto r = run_episode(w, cfg, Method::kGvdTg);
  CHECK(r.metrics.success);
  CHECK(r.metrics.termination == "coverage");
  CHECK(r.metrics.coverage >= 0.95);
  CHECK(r.metrics.revisit_ratio < 0.25);
  CHECK(r.metrics.steps <= cfg.episode.step_budget);
}

TEST_CASE("a fully visible world needs no motion") {
  const World w = room_world(40, 40);
  Config cfg;
  cfg.sensor.fov_deg = 360.0;
  cfg.sensor.range_m = 5.0;
  const auto r = run_episode(w, cfg, Method::kGvdTg);
  CHECK(r.metrics.success);
  CHECK(r.metrics.distance < 0.05);
}

TEST_CASE("a start sealed in a closet cannot reach the target coverage") {
  const World w = load_world(test::data_path("fixtures/closet.grid"));
  Config cfg;
  cfg.episode.start_x = 0.75;
  cfg.episode.start_y = 0.75;
  const auto r = run_episode(w, cfg, Method::kGvdTg);
  CHECK_FALSE(r.metrics.success);
  CHECK(r.metrics.termination == "no reachable frontier");
}

TEST_CASE("episodes are sound and deterministic") {
  const World w = load_world(test::data_path("worlds/s2_passages.grid"));
  Config cfg;
  cfg.seed = 5;
  double last_coverage = 0.0;
  bool monotone = true, sound = true;
  const auto observer = [&](const FrameView& v) {
    monotone = monotone && v.coverage >= last_coverage;
    last_coverage = v.coverage;
    for (std::size_t i = 0; i < v.belief.size(); ++i) {
      const CellState b = v.belief.cells()[i];
      if (b != CellState::kUnknown && b != w.truth.cells()[i]) sound = false;
    }
  };
  const auto a = run_episode(w, cfg, Method::kGvdTg, observer);
  CHECK(monotone);
  CHECK(sound);
  for (const Pose& p : a.metrics.trajectory) REQUIRE(w.truth.is_free(w.truth.world_to_cell({p.x, p.y})));

  const auto b = run_episode(w, cfg, Method::kGvdTg);
  CHECK(a.metrics.steps == b.metrics.steps);
  CHECK(a.metrics.distance == b.metrics.distance);
  REQUIRE(a.metrics.trajectory.size() == b.metrics.trajectory.size());
  for (std::size_t i = 0; i < a.metrics.trajectory.size(); ++i) {
    CHECK(a.metrics.trajectory[i].x == b.metrics.trajectory[i].x);
    CHECK(a.metrics.trajectory[i].y == b.metrics.trajectory[i].y);
  }
}

TEST_CASE("the greedy baseline explores the empty room") {
  const World w = load_world(test::data_path("fixtures/empty_room.grid"));
  const auto r = run_episode(w, Config{}, Method::kGreedy);
  CHECK(r.metrics.success);
  CHECK(r.metrics.method == "greedy");
}

TEST_CASE("method names parse") {
  CHECK(parse_method("gvd-tg") == Method::kGvdTg);
  CHECK(parse_method("greedy") == Method::kGreedy);
  CHECK_THROWS_AS(parse_method("random"), SimError);
}
