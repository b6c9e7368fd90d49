#include <doctest.h>

#include <random>

#include "gvdtg/connectivity.hpp"
#include "gvdtg/grid_search.hpp"
#include "gvdtg/map_io.hpp"
#include "gvdtg/sim.hpp"
#include "gvdtg/spatial_index.hpp"
#include "gvdtg/topology.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace gvdtg;

namespace {

// Every edge path starts and ends at its endpoints, steps between 8-neighbors and stays on free cells.
void audit_edges(const TopoGraph& g, const OccupancyGrid& map) {
  for (const TopoEdge& e : g.edges()) {
    REQUIRE_FALSE(e.path.empty());
    CHECK(e.path.front() == g.nodes()[static_cast<std::size_t>(e.a)].cell);
    CHECK(e.path.back() == g.nodes()[static_cast<std::size_t>(e.b)].cell);
    for (std::size_t i = 0; i < e.path.size(); ++i) {
      REQUIRE(map.is_free(e.path[i]));
      if (i > 0) {
        if (e.kind == EdgeKind::kAstar) {
          REQUIRE(std::abs(e.path[i].x - e.path[i - 1].x) <= 1);
          REQUIRE(std::abs(e.path[i].y - e.path[i - 1].y) <= 1);
        } else {
          REQUIRE(line_of_sight(map, e.path[i - 1], e.path[i]));
        }
      }
    }
  }
}

TopoGraph chain_graph(const std::vector<std::tuple<int, int, double>>& edges, int n) {
  TopoGraph g;
  for (int i = 0; i < n; ++i) g.add_node({{i, 0}, NodeKind::kGvd, 1.0, i});
  for (const auto& [a, b, w] : edges) g.add_edge({a, b, w, EdgeKind::kStraight, {}});
  return g;
}

}  // namespace

TEST_CASE("bandwidth is the interpolated quantile of pairwise distances") {
  const std::vector<Cell> two{{0, 0}, {4, 0}};
  CHECK(bandwidth(two, 0.3) == doctest::Approx(4.0));
  CHECK(bandwidth(two, 0.9) == doctest::Approx(4.0));

  const std::vector<Cell> line{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
  CHECK(bandwidth(line) == doctest::Approx(1.0));
  CHECK(bandwidth(line, 0.5) == doctest::Approx(2.0));
  CHECK(bandwidth(line, 0.85) == doctest::Approx(3.0));

  CHECK_THROWS_AS(bandwidth(std::vector<Cell>{{1, 1}}), TopologyError);
}

TEST_CASE("bandwidth defaults to the 0.3 quantile") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> c(0, 50);
  std::vector<Cell> pts;
  for (int i = 0; i < 30; ++i) pts.push_back({c(rng), c(rng)});
  CHECK(bandwidth(pts) == bandwidth(pts, 0.3));
  std::vector<double> d;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d.push_back(euclidean(pts[i], pts[j]));
  std::sort(d.begin(), d.end());
  const double pos = 0.3 * static_cast<double>(d.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  CHECK(bandwidth(pts) == doctest::Approx(d[lo] + (pos - lo) * (d[lo + 1] - d[lo])));
}

TEST_CASE("kd-tree radius queries equal a linear scan") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Point2> pts(3000);
  for (auto& p : pts) p = {u(rng), u(rng)};
  const KdTree tree(pts);
  for (int i = 0; i < 50; ++i) {
    const Point2 c{u(rng), u(rng)};
    const double r = u(rng) / 5.0;
    CHECK(tree.radius_query(c, r) == oracle::linear_radius(pts, c, r));
  }
  const KdTree empty(std::vector<Point2>{});
  CHECK(empty.radius_query({1, 1}, 5).empty());
}

TEST_CASE("connectivity cache memoizes and invalidates") {
  OccupancyGrid g(20, 20, 0.05, CellState::kFree);
  ConnectivityCache cache(16);
  CHECK(cache.connected(g, {2, 2}, {15, 9}));
  CHECK(cache.connected(g, {15, 9}, {2, 2}));
  CHECK(cache.evaluations() == 1);
  CHECK(cache.hits() == 1);

  // A wall appears across the segment; the update's box intersects it.
  OccupancyGrid next = g;
  for (int y = 0; y < 20; ++y) next.set(8, y, CellState::kOccupied);
  const auto d = diff(next, g);
  CHECK(cache.invalidate(d.bbox) == 1);
  CHECK_FALSE(cache.connected(next, {2, 2}, {15, 9}));
  CHECK(cache.evaluations() == 2);

  // An update elsewhere keeps the entry.
  CHECK(cache.invalidate(Rect{0, 15, 3, 3}) == 0);
  CHECK(cache.contains({2, 2}, {15, 9}));
}

TEST_CASE("connectivity cache evicts the least recently used pair") {
  const OccupancyGrid g(10, 10, 0.05, CellState::kFree);
  ConnectivityCache cache(2);
  cache.connected(g, {0, 0}, {1, 1});
  cache.connected(g, {0, 0}, {2, 2});
  cache.connected(g, {0, 0}, {1, 1});  // refresh
  cache.connected(g, {0, 0}, {3, 3});
  CHECK(cache.contains({0, 0}, {1, 1}));
  CHECK_FALSE(cache.contains({0, 0}, {2, 2}));
  CHECK(cache.contains({0, 0}, {3, 3}));
}

TEST_CASE("lru cache contract") {
  LruCache<int, int> c(2);
  c.put(1, 10);
  c.put(2, 20);
  CHECK(c.oldest() == 1);
  CHECK(c.get(1) == 10);
  CHECK(c.oldest() == 2);
  c.put(3, 30);
  CHECK_FALSE(c.contains(2));
  CHECK(c.size() == 2);
}

TEST_CASE("mean shift on trivial inputs") {
  const OccupancyGrid g(30, 30, 0.05, CellState::kFree);
  ConnectivityCache cache;
  const std::vector<Cell> one{{5, 7}};
  const auto c1 = mean_shift(one, g, cache, 3.0);
  REQUIRE(c1.centers.size() == 1);
  CHECK(c1.centers[0] == Cell{5, 7});
  CHECK(c1.labels == std::vector<int>{0});

  const std::vector<Cell> two{{10, 10}, {14, 10}};
  const auto c2 = mean_shift(two, g, cache, 6.0);
  REQUIRE(c2.centers.size() == 1);
  CHECK(c2.centers[0] == Cell{12, 10});
  CHECK(c2.labels == std::vector<int>{0, 0});
}

TEST_CASE("mean shift does not merge across a wall") {
  OccupancyGrid g(30, 30, 0.05, CellState::kFree);
  for (int y = 0; y < 30; ++y) g.set(15, y, CellState::kOccupied);
  const std::vector<Cell> pts{{12, 10}, {13, 12}, {12, 14}, {18, 10}, {17, 12}, {18, 14}};
  ConnectivityCache cache;
  const double bw = 20.0;  // every pair is within the bandwidth
  const auto c = mean_shift(pts, g, cache, bw);
  const auto o = oracle::naive_mean_shift(pts, g, bw);
  CHECK(c.centers == o.centers);
  CHECK(c.labels == o.labels);
  REQUIRE(c.centers.size() == 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Cell center = c.centers[static_cast<std::size_t>(c.labels[i])];
    CHECK((center.x < 15) == (pts[i].x < 15));
    CHECK(line_of_sight(g, pts[i], center));
  }
}

TEST_CASE("mean shift matches the naive oracle on cluttered maps") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    OccupancyGrid g = test::walled_room(60, 60);
    std::uniform_int_distribution<int> pos(3, 50), len(3, 12);
    for (int k = 0; k < 5; ++k) {
      const int x = pos(rng), y = pos(rng);
      if (k % 2) test::fill_rect(g, x, y, x, std::min(58, y + len(rng)), CellState::kOccupied);
      else test::fill_rect(g, x, y, std::min(58, x + len(rng)), y, CellState::kOccupied);
    }
    CoverageMask m(60, 60);
    std::vector<Cell> pts;
    for (const auto& n : sample_to_fixpoint(g, m, {30, 30}, SamplingParams{}, trial)) pts.push_back(n.center);
    if (pts.size() < 2) continue;
    const double bw = bandwidth(pts);
    ConnectivityCache cache;
    const auto c = mean_shift(pts, g, cache, bw);
    const auto o = oracle::naive_mean_shift(pts, g, bw);
    REQUIRE(c.centers == o.centers);
    REQUIRE(c.labels == o.labels);
  }
}

TEST_CASE("snap to free picks the Euclidean nearest free cell") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    OccupancyGrid g(25, 25, 0.05, CellState::kOccupied);
    std::bernoulli_distribution freecell(0.05);
    for (int y = 0; y < 25; ++y)
      for (int x = 0; x < 25; ++x)
        if (freecell(rng)) g.set(x, y, CellState::kFree);
    std::uniform_int_distribution<int> c(0, 24);
    const Cell q{c(rng), c(rng)};
    CHECK(snap_to_free(g, q, 50) == oracle::brute_snap(g, q));
  }
}

TEST_CASE("a single node forms one component without edges") {
  const OccupancyGrid g = test::walled_room(20, 20);
  TopoGraph graph;
  graph.add_node({{10, 10}, NodeKind::kCenter, 0.0, 0});
  ConnectivityCache cache;
  const ConnectStats st = connect_components(graph, g, cache, 10.0);
  CHECK(graph.component_count() == 1);
  CHECK(graph.edges().empty());
  CHECK(st.isolated_components == 0);
}

TEST_CASE("two rooms joined by a corridor form one audited component") {
  OccupancyGrid g(120, 60, 0.05, CellState::kOccupied);
  test::fill_rect(g, 1, 1, 40, 58, CellState::kFree);
  test::fill_rect(g, 79, 1, 118, 58, CellState::kFree);
  test::fill_rect(g, 41, 27, 78, 32, CellState::kFree);
  Config cfg;
  const Extraction ex = extract_topology(g, cfg);
  REQUIRE(ex.graph.nodes().size() >= 3);
  CHECK(ex.graph.component_count() == 1);
  audit_edges(ex.graph, g);
  for (std::size_t i = 0; i < ex.graph.nodes().size(); ++i) CHECK_FALSE(ex.graph.isolated(static_cast<int>(i)));
}

TEST_CASE("two rooms without a connection stay two isolated components") {
  const OccupancyGrid g = load_map(test::data_path("fixtures/disconnected.grid"));
  Config cfg;
  const Extraction ex = extract_topology(g, cfg);
  CHECK(ex.graph.component_count() == 2);
  audit_edges(ex.graph, g);
  const auto reach = flood_fill(g, ex.graph.nodes()[0].cell, [&](Cell c) { return g.is_free(c); }, true);
  for (const TopoEdge& e : ex.graph.edges()) {
    const bool a = reach[g.index(ex.graph.nodes()[static_cast<std::size_t>(e.a)].cell)] != 0;
    const bool b = reach[g.index(ex.graph.nodes()[static_cast<std::size_t>(e.b)].cell)] != 0;
    CHECK(a == b);
  }
  for (std::size_t i = 0; i < ex.graph.nodes().size(); ++i) CHECK(ex.graph.isolated(static_cast<int>(i)));
}

TEST_CASE("the corridor fixture yields a midline chain in one component") {
  const OccupancyGrid g = load_map(test::data_path("fixtures/corridor.grid"));
  Config cfg;
  const Extraction ex = extract_topology(g, cfg);
  CHECK(ex.graph.component_count() == 1);
  audit_edges(ex.graph, g);
  // Away from the closed ends every node sits on the midline (rows 19 and 20 of 14..25).
  int midline = 0;
  for (const auto& n : ex.nodes) {
    if (n.center.x < 10 || n.center.x > 90) continue;
    CHECK(std::abs(n.center.y * 2 - (14 + 25)) <= 1);
    ++midline;
  }
  CHECK(midline >= 5);
}

TEST_CASE("topological path lengths and intermediate counts") {
  const TopoGraph g = chain_graph({{0, 1, 3.0}, {1, 2, 4.0}}, 3);
  const TopoPath self = topo_path(g, 1, 1);
  CHECK(self.length == 0.0);
  CHECK(self.intermediate == 0);
  const TopoPath p = topo_path(g, 0, 2);
  CHECK(p.length == doctest::Approx(7.0));
  CHECK(p.intermediate == 1);
  CHECK(p.nodes == std::vector<int>{0, 1, 2});

  const TopoGraph split = chain_graph({{0, 1, 1.0}}, 3);
  CHECK_THROWS_WITH_AS(topo_path(split, 0, 2), "unreachable", TopologyError);
}

TEST_CASE("shortest paths break ties by hops then node sequence") {
  // Six nodes, two equal-cost routes 0-1-2-5 and 0-3-5 (fewer hops), and 0-4-5 (same hops, larger ids).
  const TopoGraph g = chain_graph({{0, 1, 1.0}, {1, 2, 1.0}, {2, 5, 1.0}, {0, 3, 1.5}, {3, 5, 1.5},
                                   {0, 4, 1.5}, {4, 5, 1.5}, {1, 3, 5.0}},
                                  6);
  const auto best = oracle::enumerate_best_path(g, 0, 5);
  const TopoPath p = topo_path(g, 0, 5);
  CHECK(p.nodes == best.nodes);
  CHECK(p.nodes == std::vector<int>{0, 3, 5});
  CHECK(p.length == doctest::Approx(best.cost));
}

TEST_CASE("shortest paths agree with exhaustive enumeration on random graphs") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> w(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::tuple<int, int, double>> edges;
    std::bernoulli_distribution link(0.45);
    for (int a = 0; a < 7; ++a)
      for (int b = a + 1; b < 7; ++b)
        if (link(rng)) edges.emplace_back(a, b, static_cast<double>(w(rng)));
    const TopoGraph g = chain_graph(edges, 7);
    const ShortestPaths sp(g, 0);
    for (int t = 0; t < 7; ++t) {
      const auto best = oracle::enumerate_best_path(g, 0, t);
      if (best.nodes.empty()) {
        CHECK_FALSE(sp.reachable(t));
        continue;
      }
      REQUIRE(sp.reachable(t));
      CHECK(sp.path_to(t).nodes == best.nodes);
      CHECK(sp.cost(t) == doctest::Approx(best.cost));
    }
  }
}
