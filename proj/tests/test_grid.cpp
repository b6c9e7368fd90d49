#include <doctest.h>

#include <random>
#include <sstream>

#include "gvdtg/grid.hpp"
#include "gvdtg/map_io.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gvdtg;

TEST_CASE("diff of identical grids is empty") {
  const OccupancyGrid g(8, 8, 0.05, CellState::kFree);
  const auto d = diff(g, g);
  CHECK(d.changed.empty());
  CHECK(d.bbox.empty());
}

TEST_CASE("diff reports changed cells and their bounding box") {
  const OccupancyGrid prev(10, 10, 0.05);
  OccupancyGrid next = prev;
  next.set(3, 3, CellState::kFree);
  next.set(5, 7, CellState::kFree);
  const auto d = diff(next, prev);
  REQUIRE(d.changed.size() == 2);
  CHECK(d.changed[0] == Cell{3, 3});
  CHECK(d.changed[1] == Cell{5, 7});
  CHECK(d.bbox == Rect{3, 3, 3, 5});

  OccupancyGrid single = prev;
  single.set(2, 2, CellState::kOccupied);
  CHECK(diff(single, prev).bbox == Rect{2, 2, 1, 1});
}

TEST_CASE("diff rejects mismatched geometry") {
  CHECK_THROWS_AS(diff(OccupancyGrid(4, 4, 0.05), OccupancyGrid(4, 5, 0.05)), GridError);
}

TEST_CASE("denoise leaves an unchanged map alone") {
  std::mt19937_64 rng(3);
  const OccupancyGrid g = test::random_grid(20, 20, rng);
  CHECK(denoise(g, g) == g);
}

TEST_CASE("an unknown changed cell with four free neighbors is filled") {
  OccupancyGrid prev(9, 9, 0.05, CellState::kOccupied);
  OccupancyGrid next = prev;
  next.set(4, 4, CellState::kUnknown);
  next.set(2, 2, CellState::kFree);
  next.set(6, 6, CellState::kFree);
  next.set(2, 6, CellState::kFree);
  next.set(6, 2, CellState::kFree);
  CHECK(denoise(next, prev).at(4, 4) == CellState::kFree);

  next.set(6, 2, CellState::kOccupied);  // three votes is not enough
  CHECK(denoise(next, prev).at(4, 4) == CellState::kUnknown);
}

TEST_CASE("occupied neighbors vote only under the known-neighbor rule") {
  OccupancyGrid prev(9, 9, 0.05, CellState::kOccupied);
  OccupancyGrid next = prev;
  next.set(4, 4, CellState::kUnknown);
  DenoiseOptions known;
  known.rule = VoteRule::kKnownNeighbors;
  CHECK(denoise(next, prev).at(4, 4) == CellState::kUnknown);
  CHECK(denoise(next, prev, known).at(4, 4) == CellState::kFree);
}

TEST_CASE("denoise matches the per-cell transcription on random 30x30 pairs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const OccupancyGrid prev = test::random_grid(30, 30, rng);
    const OccupancyGrid next = test::perturb(prev, rng, 0.2);
    for (const VoteRule rule : {VoteRule::kFreeNeighbors, VoteRule::kKnownNeighbors}) {
      for (const DenoiseScope scope : {DenoiseScope::kChangedCells, DenoiseScope::kBoundingBox}) {
        DenoiseOptions o;
        o.rule = rule;
        o.scope = scope;
        REQUIRE(denoise(next, prev, o) == oracle::literal_denoise(next, prev, rule, scope));
      }
    }
  }
}

TEST_CASE("denoise only edits unknown cells and only turns them free") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const OccupancyGrid prev = test::random_grid(25, 25, rng);
    const OccupancyGrid next = test::perturb(prev, rng, 0.3);
    const OccupancyGrid out = denoise(next, prev);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (out.cells()[i] != next.cells()[i]) {
        CHECK(next.cells()[i] == CellState::kUnknown);
        CHECK(out.cells()[i] == CellState::kFree);
      }
    }
  }
}

TEST_CASE("line of sight basics") {
  OccupancyGrid g(10, 10, 0.05, CellState::kFree);
  CHECK(line_of_sight(g, {4, 4}, {4, 4}));
  g.set(7, 7, CellState::kOccupied);
  CHECK_FALSE(line_of_sight(g, {1, 1}, {7, 7}));
  g.set(6, 2, CellState::kUnknown);
  CHECK_FALSE(line_of_sight(g, {6, 0}, {6, 4}));
}

TEST_CASE("a wall with a single gap blocks all but the row through the gap") {
  OccupancyGrid g(10, 10, 0.05, CellState::kFree);
  for (int y = 0; y < 10; ++y)
    if (y != 3) g.set(5, y, CellState::kOccupied);
  CHECK(line_of_sight(g, {2, 3}, {8, 3}));
  CHECK_FALSE(line_of_sight(g, {2, 6}, {8, 6}));
}

TEST_CASE("supercover includes both side cells at an exact corner") {
  const auto cells = supercover_line({0, 0}, {2, 2});
  CHECK(cells.size() == 7);
  CHECK(std::find(cells.begin(), cells.end(), Cell{1, 0}) != cells.end());
  CHECK(std::find(cells.begin(), cells.end(), Cell{0, 1}) != cells.end());
  CHECK(supercover_line({3, 1}, {3, 1}).size() == 1);
  CHECK(supercover_line({0, 0}, {5, 0}).size() == 6);
}

TEST_CASE("line of sight agrees with dense segment sampling") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> coord(0, 14);
  for (int trial = 0; trial < 40; ++trial) {
    OccupancyGrid g(15, 15, 0.05, CellState::kFree);
    std::bernoulli_distribution wall(0.08);
    for (int y = 0; y < 15; ++y)
      for (int x = 0; x < 15; ++x)
        if (wall(rng)) g.set(x, y, CellState::kOccupied);
    for (int k = 0; k < 50; ++k) {
      const Cell a{coord(rng), coord(rng)}, b{coord(rng), coord(rng)};
      REQUIRE(line_of_sight(g, a, b) == oracle::sampled_line_of_sight(g, a, b));
      REQUIRE(line_of_sight(g, a, b) == line_of_sight(g, b, a));
    }
  }
}

TEST_CASE("world and cell coordinates round-trip") {
  const OccupancyGrid g(20, 10, 0.05, CellState::kFree, {1.0, -2.0});
  const Cell c{7, 3};
  const Point2 p = g.cell_center(c);
  CHECK(p.x == doctest::Approx(1.0 + 7.5 * 0.05));
  CHECK(g.world_to_cell(p) == c);
}

TEST_CASE("text grids parse and round-trip") {
  std::istringstream in("GRID 3 2 0.05\n.#?\n..#\n");
  const OccupancyGrid g = parse_grid_text(in);
  CHECK(g.width() == 3);
  CHECK(g.at(1, 0) == CellState::kOccupied);
  CHECK(g.at(2, 0) == CellState::kUnknown);
  std::ostringstream out;
  write_grid_text(out, g);
  std::istringstream back(out.str());
  CHECK(parse_grid_text(back) == g);
}

TEST_CASE("malformed grid input names the bad token and line") {
  std::istringstream bad_header("GRIDX 3 2 0.05\n...\n...\n");
  try {
    parse_grid_text(bad_header, "m.grid");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("GRIDX") != std::string::npos);
    CHECK(e.line() == 1);
  }
  std::istringstream bad_row("GRID 3 2 0.05\n...\n.x.\n");
  try {
    parse_grid_text(bad_row, "m.grid");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream short_map("GRID 3 2 0.05\n...\n");
  CHECK_THROWS_AS(parse_grid_text(short_map), ParseError);
}

TEST_CASE("pgm thresholds map to the three states") {
  std::string data = "P5\n3 1\n255\n";
  data.push_back(static_cast<char>(0));
  data.push_back(static_cast<char>(128));
  data.push_back(static_cast<char>(255));
  std::istringstream in(data);
  const OccupancyGrid g = parse_pgm(in, 0.05);
  CHECK(g.at(0, 0) == CellState::kOccupied);
  CHECK(g.at(1, 0) == CellState::kUnknown);
  CHECK(g.at(2, 0) == CellState::kFree);
}
