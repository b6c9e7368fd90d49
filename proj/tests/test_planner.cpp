#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gvdtg/planner.hpp"
#include "planner_cases.hpp"

using namespace gvdtg;

namespace {

Candidate straight(int id, double d_t, double theta) {
  Candidate c;
  c.node = id;
  c.d_t = d_t;
  c.theta = theta;
  c.straight_ok = true;
  c.cost = straight_cost(d_t, theta, CostParams{});
  c.branch = Branch::kStraight;
  return c;
}

Candidate with_cost(int id, double cost, double d_t = 1.0) {
  Candidate c;
  c.node = id;
  c.d_t = d_t;
  c.cost = cost;
  c.branch = Branch::kTopological;
  return c;
}

}  // namespace

TEST_CASE("straight branch substitution") {
  const CostParams p;
  CHECK(straight_cost(7.5, 0.0, p) == 7.5);
  CHECK(std::abs(straight_cost(10.0, std::numbers::pi / 2, p) - 11.571) < 1e-3);
  CHECK(std::abs(straight_cost(10.0, std::numbers::pi / 2, p) - cases::straight_expected()) < 1e-9);
}

TEST_CASE("topological branch substitution") {
  const CostParams p;
  const double c = topological_cost(10.0, 3, std::numbers::pi / 2, 2.0, p);
  CHECK(std::abs(c - 13.157) < 1e-3);
  CHECK(std::abs(c - cases::topological_expected()) < 1e-9);
}

TEST_CASE("evaluate reproduces both branches on constructed scenes") {
  const Candidate a = cases::evaluate_scene(cases::straight_scene());
  CHECK(a.branch == Branch::kStraight);
  CHECK(a.d_t == doctest::Approx(10.0));
  CHECK(std::abs(a.cost - cases::straight_expected()) < 1e-9);

  const Candidate b = cases::evaluate_scene(cases::topological_scene());
  CHECK(b.branch == Branch::kTopological);
  CHECK(b.t == doctest::Approx(10.0));
  CHECK(b.n == 3);
  CHECK(b.d_e == doctest::Approx(2.0));
  CHECK(std::abs(b.cost - cases::topological_expected()) < 1e-9);
}

TEST_CASE("heading change is folded into [0, pi]") {
  CHECK(heading_change({0, 0}, 0.0, {5, 0}) == doctest::Approx(0.0));
  CHECK(heading_change({0, 0}, 0.0, {0, 5}) == doctest::Approx(std::numbers::pi / 2));
  CHECK(heading_change({0, 0}, 0.0, {-5, 0}) == doctest::Approx(std::numbers::pi));
  CHECK(heading_change({0, 0}, 3.0 * std::numbers::pi / 2, {0, 5}) == doctest::Approx(std::numbers::pi));
  CHECK(heading_change({0, 0}, -0.1, {5, 0}) == doctest::Approx(0.1));
}

TEST_CASE("select picks the cheapest and breaks ties") {
  CHECK(select({with_cost(4, 3.0)}).node == 4);
  CHECK(select({straight(0, 9.0, 0.3), straight(1, 5.0, 0.3)}).node == 1);
  CHECK(select({with_cost(2, 5.0, 4.0), with_cost(1, 5.0, 3.0)}).node == 1);
  CHECK(select({with_cost(2, 5.0, 3.0), with_cost(1, 5.0, 3.0)}).node == 1);
  CHECK(select({with_cost(2, kUnreachableCost), with_cost(9, 50.0)}).node == 9);
  CHECK_THROWS_WITH_AS(select({with_cost(2, kUnreachableCost)}), "no reachable frontier", PlannerError);
  CHECK_THROWS_AS(select({}), PlannerError);
}

TEST_CASE("switching hysteresis") {
  const double gamma = CostParams{}.gamma;
  CHECK(gamma == 0.9);
  const std::vector<Candidate> close{with_cost(1, 10.0), with_cost(2, 9.5)};
  CHECK(maybe_switch(1, close, gamma).node == 1);
  CHECK_FALSE(maybe_switch(1, close, gamma).switched);

  const std::vector<Candidate> far{with_cost(1, 10.0), with_cost(2, 5.0)};
  const auto s = maybe_switch(1, far, gamma);
  CHECK(s.node == 2);
  CHECK(s.switched);

  // The current target is no longer a frontier.
  const std::vector<Candidate> gone{with_cost(2, 9.5), with_cost(3, 12.0)};
  CHECK(maybe_switch(1, gone, gamma).node == 2);
  CHECK(maybe_switch(std::nullopt, gone, gamma).node == 2);
}

TEST_CASE("argmin is invariant under uniform distance scaling") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(1.0, 80.0), angle(0.0, std::numbers::pi), scale(0.05, 20.0);
  std::uniform_int_distribution<int> hops(0, 8);
  const CostParams p;
  for (int set = 0; set < 50; ++set) {
    const bool topo = set % 2 == 1;
    std::vector<std::array<double, 4>> raw;  // d or t, theta, n, d_e
    for (int i = 0; i < 12; ++i) raw.push_back({dist(rng), angle(rng), static_cast<double>(hops(rng)), dist(rng) / 10});
    auto build = [&](double s) {
      std::vector<Candidate> out;
      for (std::size_t i = 0; i < raw.size(); ++i) {
        Candidate c = with_cost(static_cast<int>(i), 0.0, raw[i][0] * s);
        c.cost = topo ? topological_cost(raw[i][0] * s, static_cast<int>(raw[i][2]), raw[i][1], raw[i][3] * s, p)
                      : straight_cost(raw[i][0] * s, raw[i][1], p);
        out.push_back(c);
      }
      return out;
    };
    const int base = select(build(1.0)).node;
    CHECK(select(build(scale(rng))).node == base);
  }
}

TEST_CASE("cost weights are validated") {
  CostParams p;
  p.gamma = 1.5;
  CHECK_THROWS(p.validate());
  p = CostParams{};
  p.alpha = -1.0;
  CHECK_THROWS(p.validate());
}
