#include "gvdtg/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gvdtg/grid_search.hpp"

namespace gvdtg {

void CostParams::validate() const {
  if (!(alpha >= 0.0)) throw PlannerError("alpha must be non-negative");
  if (!(beta >= 0.0)) throw PlannerError("beta must be non-negative");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw PlannerError("gamma must lie in (0, 1]");
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::kStraight: return "straight";
    case Branch::kTopological: return "topological";
    default: return "unreachable";
  }
}

double straight_cost(double d_t, double theta, const CostParams& p) { return d_t + p.alpha * theta * d_t; }

double topological_cost(double t, int n, double theta, double d_e, const CostParams& p) {
  return t + p.alpha * static_cast<double>(n) * t + p.beta * theta * d_e;
}

double heading_change(Cell from, double heading, Cell to) {
  if (from == to) return 0.0;
  const double bearing = std::atan2(static_cast<double>(to.y - from.y), static_cast<double>(to.x - from.x));
  return std::abs(std::remainder(bearing - heading, 2.0 * std::numbers::pi));
}

PlanContext::PlanContext(const TopoGraph& graph, const OccupancyGrid& grid, ConnectivityCache& cache, Cell robot,
                         double heading)
    : robot_(robot), heading_(heading) {
  const auto& nodes = graph.nodes();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double d = euclidean(robot, nodes[i].cell);
    if (d < best && cache.connected(grid, robot, nodes[i].cell)) {
      best = d;
      hop_node_ = static_cast<int>(i);
    }
  }
  if (hop_node_ >= 0) {
    hop_length_ = best;
  } else if (!nodes.empty() && grid.is_free(robot)) {
    // Nothing in sight: walk to the graph node nearest by path.
    std::vector<int> at(grid.size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::size_t idx = grid.index(nodes[i].cell);
      if (at[idx] < 0) at[idx] = static_cast<int>(i);
    }
    if (auto p = nearest_by_path(grid, robot, [&](Cell c) { return at[grid.index(c)] >= 0; })) {
      hop_node_ = at[grid.index(p->cells.back())];
      hop_length_ = p->length;
    }
  }
  if (hop_node_ >= 0) paths_.emplace(graph, hop_node_);
}

Candidate evaluate(const PlanContext& ctx, int node, const TopoGraph& graph, const OccupancyGrid& grid,
                   ConnectivityCache& cache, const CostParams& params) {
  Candidate c;
  c.node = node;
  c.cell = graph.nodes()[static_cast<std::size_t>(node)].cell;
  c.d_t = euclidean(ctx.robot(), c.cell);
  c.straight_ok = grid.is_free(ctx.robot()) && cache.connected(grid, ctx.robot(), c.cell);
  if (c.straight_ok) {
    c.theta = heading_change(ctx.robot(), ctx.heading(), c.cell);
    c.cost = straight_cost(c.d_t, c.theta, params);
    c.branch = Branch::kStraight;
    return c;
  }
  const ShortestPaths* sp = ctx.paths();
  if (!sp) return c;
  const int end = graph.center_of(node);
  if (!sp->reachable(end)) return c;
  const TopoPath path = sp->path_to(end);
  c.route = path.nodes;
  c.d_e = euclidean(graph.nodes()[static_cast<std::size_t>(end)].cell, c.cell);
  c.t = ctx.hop_length() + path.length + c.d_e;
  c.n = path.intermediate;
  Cell first = graph.nodes()[static_cast<std::size_t>(ctx.hop_node())].cell;
  for (const int id : path.nodes) {
    first = graph.nodes()[static_cast<std::size_t>(id)].cell;
    if (first != ctx.robot()) break;
  }
  if (first == ctx.robot()) first = c.cell;
  c.theta = heading_change(ctx.robot(), ctx.heading(), first);
  c.cost = topological_cost(c.t, c.n, c.theta, c.d_e, params);
  c.branch = Branch::kTopological;
  return c;
}

namespace {

bool better(const Candidate& a, const Candidate& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.d_t != b.d_t) return a.d_t < b.d_t;
  return a.node < b.node;
}

}  // namespace

const Candidate& select(const std::vector<Candidate>& candidates) {
  const Candidate* best = nullptr;
  for (const Candidate& c : candidates) {
    if (!std::isfinite(c.cost)) continue;
    if (!best || better(c, *best)) best = &c;
  }
  if (!best) throw PlannerError("no reachable frontier");
  return *best;
}

SwitchDecision maybe_switch(std::optional<int> current, const std::vector<Candidate>& candidates, double gamma) {
  const Candidate& best = select(candidates);
  if (!current) return {best.node, true};
  const auto it = std::find_if(candidates.begin(), candidates.end(),
                               [&](const Candidate& c) { return c.node == *current; });
  if (it == candidates.end() || !std::isfinite(it->cost)) return {best.node, best.node != *current};
  if (best.node != *current && best.cost < gamma * it->cost) return {best.node, true};
  return {*current, false};
}

}  // namespace gvdtg
