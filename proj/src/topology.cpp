#include "gvdtg/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <random>

#include "gvdtg/grid_search.hpp"
#include "gvdtg/spatial_index.hpp"

namespace gvdtg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinEdgeWeight = 1e-6;

Cell round_cell(Point2 p) {
  return {static_cast<int>(std::floor(p.x + 0.5)), static_cast<int>(std::floor(p.y + 0.5))};
}

Point2 to_point(Cell c) { return {static_cast<double>(c.x), static_cast<double>(c.y)}; }

double sq(Point2 a, Point2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return dx * dx + dy * dy;
}

}  // namespace

double bandwidth(std::span<const Cell> points, double q, std::uint64_t seed, std::size_t max_points) {
  if (points.size() < 2) throw TopologyError("insufficient points");
  if (!(q > 0.0 && q < 1.0)) throw TopologyError("quantile must lie in (0, 1)");
  std::vector<Cell> pts(points.begin(), points.end());
  if (pts.size() > max_points) {
    std::mt19937_64 rng(seed);
    std::shuffle(pts.begin(), pts.end(), rng);
    pts.resize(max_points);
  }
  std::vector<double> d;
  d.reserve(pts.size() * (pts.size() - 1) / 2);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d.push_back(euclidean(pts[i], pts[j]));
  const double pos = q * static_cast<double>(d.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(lo), d.end());
  const double a = d[lo];
  if (frac == 0.0 || lo + 1 >= d.size()) return a;
  const double b = *std::min_element(d.begin() + static_cast<std::ptrdiff_t>(lo) + 1, d.end());
  return a + frac * (b - a);
}

std::optional<Cell> snap_to_free(const OccupancyGrid& grid, Cell c, int max_radius) {
  if (grid.is_free(c)) return c;
  for (int k = 1; k <= max_radius; ++k) {
    // Candidates at Chebyshev ring k may still lose to ring k+1 on Euclidean
    // distance, so look one ring further before committing.
    std::optional<Cell> best;
    long long best_d = 0;
    const int reach = std::min(max_radius, static_cast<int>(std::ceil(k * std::sqrt(2.0))));
    for (int dy = -reach; dy <= reach; ++dy) {
      for (int dx = -reach; dx <= reach; ++dx) {
        const Cell q{c.x + dx, c.y + dy};
        if (!grid.is_free(q)) continue;
        const long long d = static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy;
        if (!best || d < best_d) {
          best = q;
          best_d = d;
        }
      }
    }
    if (best && best_d <= static_cast<long long>(k) * k) return best;
    if (best && reach == max_radius) return best;
  }
  return std::nullopt;
}

Clustering mean_shift(std::span<const Cell> points, const OccupancyGrid& grid, ConnectivityCache& cache,
                      double bw, const MeanShiftParams& params) {
  if (points.empty()) throw TopologyError("mean shift needs at least one point");
  if (!(bw > 0.0)) throw TopologyError("bandwidth must be positive");
  const std::size_t n = points.size();
  std::vector<Point2> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = to_point(points[i]);
  const KdTree tree(pts, params.leaf_capacity);
  const double bw2 = bw * bw;

  Clustering out;
  out.modes.resize(n);
  for (std::size_t seed = 0; seed < n; ++seed) {
    Point2 m = pts[seed];
    for (int it = 0; it < params.max_iters; ++it) {
      const Cell mc = round_cell(m);
      double sx = 0.0, sy = 0.0;
      std::size_t count = 0;
      for (const std::size_t j : tree.radius_query(m, bw)) {
        if (sq(m, pts[j]) >= bw2) continue;
        if (!cache.connected(grid, mc, points[j])) continue;
        sx += pts[j].x;
        sy += pts[j].y;
        ++count;
      }
      if (count == 0) break;
      const Point2 mean{sx / static_cast<double>(count), sy / static_cast<double>(count)};
      const Cell nc = round_cell(mean);
      if (!grid.is_free(nc) || !cache.connected(grid, mc, nc)) break;
      const double shift = std::sqrt(sq(m, mean));
      m = mean;
      if (shift < params.conv_eps) break;
    }
    out.modes[seed] = m;
  }

  // Merge nearby, mutually visible modes in seed order.
  struct Group {
    Point2 rep;
    double sx = 0, sy = 0;
    int count = 0;
  };
  std::vector<Group> groups;
  const double merge = params.merge_factor * bw;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 mode = out.modes[i];
    const Cell mc = round_cell(mode);
    Group* target = nullptr;
    for (Group& g : groups) {
      if (std::sqrt(sq(mode, g.rep)) < merge && cache.connected(grid, mc, round_cell(g.rep))) {
        target = &g;
        break;
      }
    }
    if (!target) {
      groups.push_back({mode});
      target = &groups.back();
    }
    target->sx += mode.x;
    target->sy += mode.y;
    ++target->count;
  }
  const int snap_limit = std::max(grid.width(), grid.height());
  for (const Group& g : groups) {
    const Point2 mean{g.sx / g.count, g.sy / g.count};
    const auto c = snap_to_free(grid, round_cell(mean), snap_limit);
    if (!c) continue;
    if (std::find(out.centers.begin(), out.centers.end(), *c) == out.centers.end()) out.centers.push_back(*c);
  }

  out.labels.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    int best = -1;
    double best_d = kInf;
    for (std::size_t k = 0; k < out.centers.size(); ++k) {
      const double d = euclidean(points[i], out.centers[k]);
      if (d < best_d && cache.connected(grid, points[i], out.centers[k])) {
        best = static_cast<int>(k);
        best_d = d;
      }
    }
    if (best < 0) {
      out.centers.push_back(points[i]);
      best = static_cast<int>(out.centers.size() - 1);
    }
    out.labels[i] = best;
  }
  return out;
}

const char* to_string(NodeKind k) { return k == NodeKind::kCenter ? "center" : "gvd"; }

const char* to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::kStraight: return "straight";
    case EdgeKind::kGvdChain: return "gvd-chain";
    default: return "astar";
  }
}

int TopoGraph::add_node(const TopoNode& n) {
  nodes_.push_back(n);
  adjacency_.emplace_back();
  isolated_.push_back(0);
  return static_cast<int>(nodes_.size() - 1);
}

void TopoGraph::add_edge(TopoEdge e) {
  const int id = static_cast<int>(edges_.size());
  adjacency_[static_cast<std::size_t>(e.a)].push_back(id);
  adjacency_[static_cast<std::size_t>(e.b)].push_back(id);
  edges_.push_back(std::move(e));
}

bool TopoGraph::has_edge(int a, int b) const {
  for (const int e : adjacency_[static_cast<std::size_t>(a)]) {
    const TopoEdge& edge = edges_[static_cast<std::size_t>(e)];
    if ((edge.a == a && edge.b == b) || (edge.a == b && edge.b == a)) return true;
  }
  return false;
}

void TopoGraph::set_isolated(int node, bool v) { isolated_[static_cast<std::size_t>(node)] = v ? 1 : 0; }

std::vector<int> TopoGraph::components() const {
  std::vector<int> comp(nodes_.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < nodes_.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{static_cast<int>(s)};
    comp[s] = next;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const int e : adjacency_[static_cast<std::size_t>(u)]) {
        const TopoEdge& edge = edges_[static_cast<std::size_t>(e)];
        const int v = edge.a == u ? edge.b : edge.a;
        if (comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  return comp;
}

int TopoGraph::component_count() const {
  const auto comp = components();
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

int TopoGraph::center_of(int node) const {
  if (nodes_[static_cast<std::size_t>(node)].kind == NodeKind::kCenter) return node;
  const int point = nodes_[static_cast<std::size_t>(node)].source;
  for (const Label& l : labels_)
    if (l.point_id == point) return l.center_id;
  return node;
}

TopoGraph build_graph(std::span<const GvdNode> gvd, const Clustering& clusters, const OccupancyGrid& grid,
                      bool unknown_blocks) {
  TopoGraph g;
  for (std::size_t k = 0; k < clusters.centers.size(); ++k) {
    const Cell c = clusters.centers[k];
    g.add_node({c, NodeKind::kCenter, clearance(grid, c, unknown_blocks), static_cast<int>(k)});
  }
  const int offset = static_cast<int>(clusters.centers.size());
  for (std::size_t i = 0; i < gvd.size(); ++i) {
    g.add_node({gvd[i].center, NodeKind::kGvd, gvd[i].radius, static_cast<int>(i)});
  }
  for (std::size_t i = 0; i < clusters.labels.size(); ++i) {
    g.labels().push_back({static_cast<int>(i), clusters.labels[i]});
  }
  (void)offset;
  return g;
}

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

TopoEdge straight_edge(const TopoGraph& g, int a, int b) {
  const Cell ca = g.nodes()[static_cast<std::size_t>(a)].cell;
  const Cell cb = g.nodes()[static_cast<std::size_t>(b)].cell;
  return {a, b, std::max(kMinEdgeWeight, euclidean(ca, cb)), EdgeKind::kStraight, supercover_line(ca, cb)};
}

}  // namespace

ConnectStats connect_components(TopoGraph& graph, const OccupancyGrid& grid, ConnectivityCache& cache,
                                double edge_radius) {
  ConnectStats stats;
  const auto& nodes = graph.nodes();
  const std::size_t n = nodes.size();
  if (n == 0) return stats;

  std::vector<Point2> pts(n);
  double max_radius = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pts[i] = to_point(nodes[i].cell);
    if (nodes[i].kind == NodeKind::kGvd) max_radius = std::max(max_radius, nodes[i].radius);
  }
  const KdTree tree(pts);
  Dsu dsu(n);

  for (std::size_t i = 0; i < n; ++i) {
    for (const std::size_t j : tree.radius_query(pts[i], edge_radius)) {
      if (j <= i) continue;
      if (!cache.connected(grid, nodes[i].cell, nodes[j].cell)) continue;
      graph.add_edge(straight_edge(graph, static_cast<int>(i), static_cast<int>(j)));
      dsu.unite(static_cast<int>(i), static_cast<int>(j));
      ++stats.straight;
    }
  }

  // GVD-node adjacency: overlapping disks (realized by a local A* path when not
  // in line of sight) or visibility within edge_radius.
  auto gvd_hop = [&](int u, int v) -> std::optional<TopoEdge> {
    const TopoNode& a = nodes[static_cast<std::size_t>(u)];
    const TopoNode& b = nodes[static_cast<std::size_t>(v)];
    const double d = euclidean(a.cell, b.cell);
    if (d <= edge_radius && cache.connected(grid, a.cell, b.cell)) {
      TopoEdge e = straight_edge(graph, u, v);
      e.kind = EdgeKind::kGvdChain;
      return e;
    }
    if (d < a.radius + b.radius) {
      if (auto p = bidirectional_astar(grid, a.cell, b.cell)) {
        return TopoEdge{u, v, std::max(kMinEdgeWeight, p->length), EdgeKind::kGvdChain, std::move(p->cells)};
      }
    }
    return std::nullopt;
  };

  std::vector<std::uint8_t> isolated_root(n, 0);
  while (true) {
    // Smallest non-isolated component; ties go to the smallest root.
    std::vector<int> size(n, 0);
    for (std::size_t i = 0; i < n; ++i) ++size[static_cast<std::size_t>(dsu.find(static_cast<int>(i)))];
    int roots = 0, smallest = -1;
    for (std::size_t r = 0; r < n; ++r) {
      if (size[r] == 0) continue;
      ++roots;
      if (isolated_root[r]) continue;
      if (smallest < 0 || size[r] < size[static_cast<std::size_t>(smallest)]) smallest = static_cast<int>(r);
    }
    if (roots <= 1 || smallest < 0) break;
    int open_roots = 0;
    for (std::size_t r = 0; r < n; ++r)
      if (size[r] > 0 && !isolated_root[r]) ++open_roots;
    if (open_roots <= 1 && roots - open_roots == 0) break;

    auto in_s = [&](int v) { return dsu.find(v) == smallest; };

    // GVD chain: uniform-cost search over GVD adjacency from every GVD node of S.
    std::vector<double> dist(n, kInf);
    std::vector<int> pred(n, -1);
    std::vector<std::optional<TopoEdge>> via(n);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t i = 0; i < n; ++i) {
      if (nodes[i].kind == NodeKind::kGvd && in_s(static_cast<int>(i))) {
        dist[i] = 0.0;
        pq.push({0.0, static_cast<int>(i)});
      }
    }
    int reached = -1;
    while (!pq.empty()) {
      const auto [du, u] = pq.top();
      pq.pop();
      if (du > dist[static_cast<std::size_t>(u)]) continue;
      if (!in_s(u)) {
        reached = u;
        break;
      }
      const double reach = std::max(edge_radius, nodes[static_cast<std::size_t>(u)].radius + max_radius);
      for (const std::size_t vj : tree.radius_query(pts[static_cast<std::size_t>(u)], reach)) {
        const int v = static_cast<int>(vj);
        if (v == u || nodes[vj].kind != NodeKind::kGvd) continue;
        if (in_s(v) && dist[vj] == 0.0) continue;
        auto hop = gvd_hop(u, v);
        if (!hop) continue;
        const double nd = du + hop->weight;
        if (nd < dist[vj]) {
          dist[vj] = nd;
          pred[vj] = u;
          via[vj] = std::move(hop);
          pq.push({nd, v});
        }
      }
    }
    if (reached >= 0) {
      for (int v = reached; pred[static_cast<std::size_t>(v)] >= 0; v = pred[static_cast<std::size_t>(v)]) {
        graph.add_edge(std::move(*via[static_cast<std::size_t>(v)]));
        dsu.unite(v, pred[static_cast<std::size_t>(v)]);
        ++stats.chain;
      }
      continue;
    }

    // A* fallback: closest node pair between S and each other component, nearest first.
    struct Pair {
      double d;
      int s, t;
    };
    std::vector<Pair> best_per_root(n, {kInf, -1, -1});
    for (std::size_t s = 0; s < n; ++s) {
      if (!in_s(static_cast<int>(s))) continue;
      for (std::size_t t = 0; t < n; ++t) {
        if (in_s(static_cast<int>(t))) continue;
        const double d = euclidean(nodes[s].cell, nodes[t].cell);
        Pair& bp = best_per_root[static_cast<std::size_t>(dsu.find(static_cast<int>(t)))];
        if (d < bp.d) bp = {d, static_cast<int>(s), static_cast<int>(t)};
      }
    }
    std::vector<Pair> order;
    for (const Pair& p : best_per_root)
      if (p.s >= 0) order.push_back(p);
    std::sort(order.begin(), order.end(), [](const Pair& a, const Pair& b) {
      return a.d != b.d ? a.d < b.d : a.t < b.t;
    });
    bool joined = false;
    for (const Pair& p : order) {
      auto path = bidirectional_astar(grid, nodes[static_cast<std::size_t>(p.s)].cell,
                                      nodes[static_cast<std::size_t>(p.t)].cell);
      if (!path) continue;
      graph.add_edge({p.s, p.t, std::max(kMinEdgeWeight, path->length), EdgeKind::kAstar, std::move(path->cells)});
      dsu.unite(p.s, p.t);
      ++stats.astar;
      joined = true;
      break;
    }
    if (!joined) isolated_root[static_cast<std::size_t>(smallest)] = 1;
  }

  // Whatever is still split could not be joined: every remaining component is isolated.
  if (graph.component_count() > 1) {
    const auto comp = graph.components();
    stats.isolated_components = *std::max_element(comp.begin(), comp.end()) + 1;
    for (std::size_t i = 0; i < n; ++i) graph.set_isolated(static_cast<int>(i), true);
  }
  return stats;
}

ShortestPaths::ShortestPaths(const TopoGraph& graph, int source)
    : cost_(graph.nodes().size(), kInf), route_(graph.nodes().size()) {
  const std::size_t n = graph.nodes().size();
  std::vector<std::uint8_t> done(n, 0);
  // Label order: cost, then hop count, then node sequence.
  auto better = [&](double c, const std::vector<int>& r, std::size_t v) {
    if (c != cost_[v]) return c < cost_[v];
    if (r.size() != route_[v].size()) return r.size() < route_[v].size();
    return r < route_[v];
  };
  cost_[static_cast<std::size_t>(source)] = 0.0;
  route_[static_cast<std::size_t>(source)] = {source};
  while (true) {
    int u = -1;
    for (std::size_t v = 0; v < n; ++v) {
      if (done[v] || cost_[v] == kInf) continue;
      if (u < 0 || better(cost_[v], route_[v], static_cast<std::size_t>(u))) u = static_cast<int>(v);
    }
    if (u < 0) break;
    done[static_cast<std::size_t>(u)] = 1;
    for (const int e : graph.incident(u)) {
      const TopoEdge& edge = graph.edges()[static_cast<std::size_t>(e)];
      const int v = edge.a == u ? edge.b : edge.a;
      if (done[static_cast<std::size_t>(v)]) continue;
      const double c = cost_[static_cast<std::size_t>(u)] + edge.weight;
      std::vector<int> r = route_[static_cast<std::size_t>(u)];
      r.push_back(v);
      if (cost_[static_cast<std::size_t>(v)] == kInf || better(c, r, static_cast<std::size_t>(v))) {
        cost_[static_cast<std::size_t>(v)] = c;
        route_[static_cast<std::size_t>(v)] = std::move(r);
      }
    }
  }
}

TopoPath ShortestPaths::path_to(int node) const {
  if (!reachable(node)) throw TopologyError("unreachable");
  TopoPath p;
  p.nodes = route_[static_cast<std::size_t>(node)];
  p.length = cost_[static_cast<std::size_t>(node)];
  p.intermediate = std::max(0, static_cast<int>(p.nodes.size()) - 2);
  return p;
}

TopoPath topo_path(const TopoGraph& graph, int a, int b) {
  const int n = static_cast<int>(graph.nodes().size());
  if (a < 0 || b < 0 || a >= n || b >= n) throw TopologyError("node id out of range");
  return ShortestPaths(graph, a).path_to(b);
}

}  // namespace gvdtg
