#include "gvdtg/gvd.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gvdtg {

void SamplingParams::validate() const {
  if (!(r_min > 0) || delta_r <= 0 || !(delta > 0) || step_fine <= 0 || step_coarse <= 0 || !(local_range_m > 0) ||
      !(pair_separation > 0) || snap_radius < 0) {
    throw std::invalid_argument("sampling parameters must be strictly positive");
  }
  if (step_fine > step_coarse) throw std::invalid_argument("fine sampling step must not exceed the coarse step");
}

Rect local_region(Cell robot, const SamplingParams& params, double resolution, int width, int height) {
  const int half = static_cast<int>(std::floor(params.local_range_m / (2.0 * resolution) + 1e-9));
  const int x0 = std::max(0, robot.x - half);
  const int y0 = std::max(0, robot.y - half);
  const int x1 = std::min(width - 1, robot.x + half);
  const int y1 = std::min(height - 1, robot.y + half);
  if (x1 < x0 || y1 < y0) return {};
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

namespace {

double dist(int dx, int dy) { return std::sqrt(static_cast<double>(dx * dx + dy * dy)); }

// Visits the in-bounds cells with Chebyshev distance exactly k from c.
template <typename F>
void for_ring(const OccupancyGrid& g, Cell c, int k, F&& f) {
  if (k == 0) {
    if (g.in_bounds(c)) f(c);
    return;
  }
  const int y_top = c.y - k, y_bot = c.y + k;
  const int x_lo = std::max(0, c.x - k), x_hi = std::min(g.width() - 1, c.x + k);
  if (y_top >= 0)
    for (int x = x_lo; x <= x_hi; ++x) f(Cell{x, y_top});
  if (y_bot < g.height())
    for (int x = x_lo; x <= x_hi; ++x) f(Cell{x, y_bot});
  const int y_lo = std::max(0, c.y - k + 1), y_hi = std::min(g.height() - 1, c.y + k - 1);
  if (c.x - k >= 0)
    for (int y = y_lo; y <= y_hi; ++y) f(Cell{c.x - k, y});
  if (c.x + k < g.width())
    for (int y = y_lo; y <= y_hi; ++y) f(Cell{c.x + k, y});
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double clearance(const OccupancyGrid& grid, Cell c, bool unknown_blocks) {
  const int cap = std::max(grid.width(), grid.height());
  double best = static_cast<double>(cap);
  for (int k = 0; k <= cap && k < best; ++k) {
    for_ring(grid, c, k, [&](Cell q) {
      if (is_blocking(grid, q, unknown_blocks)) best = std::min(best, dist(q.x - c.x, q.y - c.y));
    });
  }
  return best;
}

ObstacleSet nearest_obstacles(const OccupancyGrid& grid, Cell p, const SamplingParams& params) {
  const int cap = std::max(grid.width(), grid.height());
  const bool ub = params.unknown_blocks;
  bool found = false;
  auto scan_rings = [&](int from, int to) {
    for (int k = from; k <= to && !found; ++k) {
      for_ring(grid, p, k, [&](Cell q) { found = found || is_blocking(grid, q, ub); });
    }
  };

  int r = std::max(0, static_cast<int>(std::ceil(params.r_min)));
  scan_rings(0, r);
  while (!found && r < cap) {
    const int next = std::min(cap, r + params.delta_r);
    scan_rings(r + 1, next);
    r = next;
  }
  if (!found) return {static_cast<double>(cap), {}};

  // Rank the window's blockers by Euclidean distance. A blocker outside a window
  // of radius R is at least R + 1 away, so widen until the minimum is certified.
  double d_min = static_cast<double>(cap);
  auto rank_rings = [&](int from, int to) {
    for (int k = from; k <= to; ++k) {
      for_ring(grid, p, k, [&](Cell q) {
        if (is_blocking(grid, q, ub)) d_min = std::min(d_min, dist(q.x - p.x, q.y - p.y));
      });
    }
  };
  rank_rings(0, r);
  while (d_min > r + 1 && r < cap) {
    const int next = std::min(cap, static_cast<int>(std::ceil(d_min)));
    rank_rings(r + 1, next);
    r = next;
  }

  ObstacleSet out;
  out.d_min = d_min;
  const double band = d_min + params.delta;
  const int reach = static_cast<int>(std::ceil(band));
  const double manhattan_cut = band * std::sqrt(2.0);
  const int x0 = std::max(0, p.x - reach), x1 = std::min(grid.width() - 1, p.x + reach);
  const int y0 = std::max(0, p.y - reach), y1 = std::min(grid.height() - 1, p.y + reach);
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const int dx = x - p.x, dy = y - p.y;
      if (std::abs(dx) + std::abs(dy) > manhattan_cut) continue;
      if (!is_blocking(grid, {x, y}, ub)) continue;
      if (dist(dx, dy) < band) out.cells.push_back({x, y});
    }
  }
  return out;
}

std::optional<GvdNode> bisect_node(const OccupancyGrid& grid, const ObstacleSet& obstacles,
                                   const SamplingParams& params, int frame) {
  const auto& o = obstacles.cells;
  if (o.size() < 2) return std::nullopt;

  std::size_t ia = 0, ib = 0;
  long long best_sq = -1;
  for (std::size_t i = 0; i < o.size(); ++i) {
    for (std::size_t j = i + 1; j < o.size(); ++j) {
      const long long dx = o[i].x - o[j].x, dy = o[i].y - o[j].y;
      const long long sq = dx * dx + dy * dy;
      if (sq > best_sq) {
        best_sq = sq;
        ia = i;
        ib = j;
      }
    }
  }
  if (std::sqrt(static_cast<double>(best_sq)) <= params.pair_separation) return std::nullopt;

  Cell center{static_cast<int>(std::floor((o[ia].x + o[ib].x) / 2.0 + 0.5)),
              static_cast<int>(std::floor((o[ia].y + o[ib].y) / 2.0 + 0.5))};
  if (!grid.is_free(center)) {
    // Nearest free cell within the snap radius; ties resolved row-major.
    const int s = params.snap_radius;
    std::optional<Cell> snapped;
    double snapped_d = 0.0;
    for (int dy = -s; dy <= s; ++dy) {
      for (int dx = -s; dx <= s; ++dx) {
        const double d = dist(dx, dy);
        if (d > s) continue;
        const Cell q{center.x + dx, center.y + dy};
        if (!grid.is_free(q)) continue;
        if (!snapped || d < snapped_d) {
          snapped = q;
          snapped_d = d;
        }
      }
    }
    if (!snapped) return std::nullopt;
    center = *snapped;
  }

  const double r = clearance(grid, center, params.unknown_blocks);
  if (!(r > params.r_min)) return std::nullopt;

  // Medial check: the disk must touch at least two blocking cells within r + delta.
  const int reach = static_cast<int>(std::ceil(r + params.delta));
  int touching = 0;
  for (int dy = -reach; dy <= reach && touching < 2; ++dy) {
    for (int dx = -reach; dx <= reach && touching < 2; ++dx) {
      const Cell q{center.x + dx, center.y + dy};
      if (!grid.in_bounds(q) || !is_blocking(grid, q, params.unknown_blocks)) continue;
      if (dist(dx, dy) <= r + params.delta) ++touching;
    }
  }
  if (touching < 2) return std::nullopt;

  return GvdNode{center, r, frame};
}

int coverage_radius(double r) { return static_cast<int>(std::ceil(r)) + 1; }

void mark_coverage(CoverageMask& mask, const GvdNode& node) {
  const int rad = coverage_radius(node.radius);
  const long long rad_sq = static_cast<long long>(rad) * rad;
  for (int dy = -rad; dy <= rad; ++dy) {
    for (int dx = -rad; dx <= rad; ++dx) {
      if (static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy > rad_sq) continue;
      const Cell q{node.center.x + dx, node.center.y + dy};
      if (mask.in_bounds(q)) mask.set(q);
    }
  }
}

std::vector<GvdNode> sample_frame(const OccupancyGrid& grid, CoverageMask& mask, Cell robot,
                                  const SamplingParams& params, std::uint64_t seed, int frame,
                                  const AcceptObserver& observer) {
  if (!mask.matches(grid)) throw GridError("coverage mask dimensions do not match the grid");
  const Rect local = local_region(robot, params, grid.resolution(), grid.width(), grid.height());

  std::vector<Cell> candidates;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      const Cell c{x, y};
      const int step = local.contains(c) ? params.step_fine : params.step_coarse;
      if (x % step != 0 || y % step != 0) continue;
      if (grid.at(c) != CellState::kFree || mask.test(c)) continue;
      candidates.push_back(c);
    }
  }
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(frame))));
  std::shuffle(candidates.begin(), candidates.end(), rng);

  std::vector<GvdNode> proposals;
  for (const Cell c : candidates) {
    const ObstacleSet obs = nearest_obstacles(grid, c, params);
    if (auto node = bisect_node(grid, obs, params, frame)) proposals.push_back(*node);
  }
  // Radius priority; equal radii keep shuffled order.
  std::stable_sort(proposals.begin(), proposals.end(),
                   [](const GvdNode& a, const GvdNode& b) { return a.radius > b.radius; });

  std::vector<GvdNode> accepted;
  for (const GvdNode& n : proposals) {
    if (mask.test(n.center)) continue;
    if (observer) observer(n, mask);
    mark_coverage(mask, n);
    accepted.push_back(n);
  }
  return accepted;
}

std::vector<GvdNode> sample_to_fixpoint(const OccupancyGrid& grid, CoverageMask& mask, Cell robot,
                                        const SamplingParams& params, std::uint64_t seed,
                                        const AcceptObserver& observer, int max_frames) {
  std::vector<GvdNode> all;
  for (int frame = 0; frame < max_frames; ++frame) {
    auto fresh = sample_frame(grid, mask, robot, params, seed, frame, observer);
    if (fresh.empty()) break;
    all.insert(all.end(), fresh.begin(), fresh.end());
  }
  return all;
}

}  // namespace gvdtg
