#include "gvdtg/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>

namespace gvdtg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = 1.4142135623730951;
constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

// Neighbors reachable by one move; diagonals need both orthogonal cells free.
template <typename F>
void for_moves(const OccupancyGrid& g, Cell c, F&& f) {
  for (int k = 0; k < 8; ++k) {
    const Cell n{c.x + kDx[k], c.y + kDy[k]};
    if (!g.is_free(n)) continue;
    if (k >= 4 && (!g.is_free({c.x + kDx[k], c.y}) || !g.is_free({c.x, c.y + kDy[k]}))) continue;
    f(n, k >= 4 ? kSqrt2 : 1.0);
  }
}

struct QueueItem {
  double f;
  double g;
  std::size_t idx;
  bool operator>(const QueueItem& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g < o.g;  // deeper first on ties
    return idx > o.idx;
  }
};

using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

std::vector<Cell> unwind(const OccupancyGrid& g, const std::vector<std::int64_t>& pred, std::size_t end) {
  std::vector<Cell> out;
  for (std::int64_t i = static_cast<std::int64_t>(end); i >= 0; i = pred[static_cast<std::size_t>(i)]) {
    out.push_back(g.cell_of(static_cast<std::size_t>(i)));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

double octile(Cell a, Cell b) {
  const double dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  return std::max(dx, dy) + (kSqrt2 - 1.0) * std::min(dx, dy);
}

double path_length(const std::vector<Cell>& cells) {
  double len = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) len += euclidean(cells[i - 1], cells[i]);
  return len;
}

std::optional<GridPath> bidirectional_astar(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.is_free(start) || !grid.is_free(goal)) return std::nullopt;
  if (start == goal) return GridPath{{start}, 0.0};

  const std::size_t n = grid.size();
  std::vector<double> g[2] = {std::vector<double>(n, kInf), std::vector<double>(n, kInf)};
  std::vector<std::int64_t> pred[2] = {std::vector<std::int64_t>(n, -1), std::vector<std::int64_t>(n, -1)};
  std::vector<std::uint8_t> closed[2] = {std::vector<std::uint8_t>(n, 0), std::vector<std::uint8_t>(n, 0)};
  const Cell target[2] = {goal, start};
  MinQueue open[2];

  const std::size_t s = grid.index(start), t = grid.index(goal);
  g[0][s] = 0.0;
  g[1][t] = 0.0;
  open[0].push({octile(start, goal), 0.0, s});
  open[1].push({octile(goal, start), 0.0, t});

  double best = kInf;
  std::size_t meet = n;
  int side = 0;
  while (!open[0].empty() && !open[1].empty()) {
    const double bound = std::max(open[0].top().f, open[1].top().f);
    if (best <= bound) break;

    auto& q = open[side];
    const QueueItem item = q.top();
    q.pop();
    if (!closed[side][item.idx] && item.g <= g[side][item.idx]) {
      closed[side][item.idx] = 1;
      const Cell c = grid.cell_of(item.idx);
      for_moves(grid, c, [&](Cell nb, double step) {
        const std::size_t ni = grid.index(nb);
        const double cand = g[side][item.idx] + step;
        if (cand < g[side][ni]) {
          g[side][ni] = cand;
          pred[side][ni] = static_cast<std::int64_t>(item.idx);
          open[side].push({cand + octile(nb, target[side]), cand, ni});
        }
        const double total = g[side][ni] + g[1 - side][ni];
        if (total < best) {
          best = total;
          meet = ni;
        }
      });
    }
    side = 1 - side;
  }
  if (meet == n) return std::nullopt;

  std::vector<Cell> fwd = unwind(grid, pred[0], meet);
  std::vector<Cell> bwd = unwind(grid, pred[1], meet);  // goal .. meet
  bwd.pop_back();
  std::reverse(bwd.begin(), bwd.end());
  fwd.insert(fwd.end(), bwd.begin(), bwd.end());
  GridPath path{std::move(fwd), 0.0};
  path.length = path_length(path.cells);
  return path;
}

std::optional<GridPath> astar(const OccupancyGrid& grid, Cell start, Cell goal, const std::vector<float>* extra_cost) {
  if (!grid.is_free(start) || !grid.is_free(goal)) return std::nullopt;
  const std::size_t n = grid.size();
  std::vector<double> g(n, kInf);
  std::vector<std::int64_t> pred(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  MinQueue open;
  const std::size_t s = grid.index(start), t = grid.index(goal);
  g[s] = 0.0;
  open.push({octile(start, goal), 0.0, s});
  while (!open.empty()) {
    const QueueItem item = open.top();
    open.pop();
    if (closed[item.idx]) continue;
    closed[item.idx] = 1;
    if (item.idx == t) break;
    for_moves(grid, grid.cell_of(item.idx), [&](Cell nb, double step) {
      const std::size_t ni = grid.index(nb);
      const double cand = g[item.idx] + step + (extra_cost ? (*extra_cost)[ni] : 0.0f);
      if (cand < g[ni]) {
        g[ni] = cand;
        pred[ni] = static_cast<std::int64_t>(item.idx);
        open.push({cand + octile(nb, goal), cand, ni});
      }
    });
  }
  if (!closed[t]) return std::nullopt;
  GridPath path{unwind(grid, pred, t), 0.0};
  path.length = path_length(path.cells);
  return path;
}

std::optional<GridPath> nearest_by_path(const OccupancyGrid& grid, Cell start, const std::function<bool(Cell)>& is_goal,
                                        const std::vector<float>* extra_cost) {
  if (!grid.is_free(start)) return std::nullopt;
  const std::size_t n = grid.size();
  std::vector<double> g(n, kInf);
  std::vector<std::int64_t> pred(n, -1);
  std::vector<std::uint8_t> closed(n, 0);
  MinQueue open;  // f == g here; idx tie-break gives (distance, y, x) order
  const std::size_t s = grid.index(start);
  g[s] = 0.0;
  open.push({0.0, 0.0, s});
  while (!open.empty()) {
    const QueueItem item = open.top();
    open.pop();
    if (closed[item.idx]) continue;
    closed[item.idx] = 1;
    const Cell c = grid.cell_of(item.idx);
    if (is_goal(c)) {
      GridPath path{unwind(grid, pred, item.idx), 0.0};
      path.length = path_length(path.cells);
      return path;
    }
    for_moves(grid, c, [&](Cell nb, double step) {
      const std::size_t ni = grid.index(nb);
      const double cand = g[item.idx] + step + (extra_cost ? (*extra_cost)[ni] : 0.0f);
      if (cand < g[ni]) {
        g[ni] = cand;
        pred[ni] = static_cast<std::int64_t>(item.idx);
        open.push({cand, 0.0, ni});
      }
    });
  }
  return std::nullopt;
}

std::vector<std::uint8_t> flood_fill(const OccupancyGrid& grid, Cell start, const std::function<bool(Cell)>& passable,
                                     bool eight_connected) {
  std::vector<std::uint8_t> seen(grid.size(), 0);
  if (!grid.in_bounds(start) || !passable(start)) return seen;
  std::deque<Cell> queue{start};
  seen[grid.index(start)] = 1;
  const int moves = eight_connected ? 8 : 4;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (int k = 0; k < moves; ++k) {
      const Cell nb{c.x + kDx[k], c.y + kDy[k]};
      if (!grid.in_bounds(nb) || seen[grid.index(nb)] || !passable(nb)) continue;
      seen[grid.index(nb)] = 1;
      queue.push_back(nb);
    }
  }
  return seen;
}

std::vector<Cell> shortcut_path(const OccupancyGrid& grid, const std::vector<Cell>& cells) {
  if (cells.size() <= 2) return cells;
  std::vector<Cell> out{cells.front()};
  std::size_t i = 0;
  while (i + 1 < cells.size()) {
    std::size_t j = i + 1;
    // Farthest visible successor; adjacent path cells are always mutually visible.
    for (std::size_t k = cells.size() - 1; k > i + 1; --k) {
      if (line_of_sight(grid, cells[i], cells[k])) {
        j = k;
        break;
      }
    }
    out.push_back(cells[j]);
    i = j;
  }
  return out;
}

std::vector<float> proximity_penalty(const OccupancyGrid& grid, int radius, float weight) {
  std::vector<float> pen(grid.size(), 0.0f);
  if (radius <= 0 || weight <= 0.0f) return pen;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.at(x, y) != CellState::kOccupied) continue;
      for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
          const Cell q{x + dx, y + dy};
          if (!grid.in_bounds(q)) continue;
          const int d = std::max(std::abs(dx), std::abs(dy));
          const float p = weight * static_cast<float>(radius + 1 - d) / static_cast<float>(radius);
          float& slot = pen[grid.index(q)];
          slot = std::max(slot, p);
        }
      }
    }
  }
  return pen;
}

}  // namespace gvdtg
