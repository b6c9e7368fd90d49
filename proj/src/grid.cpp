#include "gvdtg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace gvdtg {

OccupancyGrid::OccupancyGrid(int width, int height, double resolution, CellState fill, Point2 origin)
    : width_(width), height_(height), resolution_(resolution), origin_(origin) {
  if (width <= 0 || height <= 0) {
    throw GridError("grid dimensions must be positive, got " + std::to_string(width) + "x" +
                    std::to_string(height));
  }
  if (!(resolution > 0.0)) {
    throw GridError("grid resolution must be positive");
  }
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

Cell OccupancyGrid::world_to_cell(Point2 p) const {
  return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
          static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
}

Point2 OccupancyGrid::cell_center(Cell c) const {
  return {origin_.x + (c.x + 0.5) * resolution_, origin_.y + (c.y + 0.5) * resolution_};
}

std::size_t OccupancyGrid::count(CellState s) const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), s));
}

namespace {

void require_compatible(const OccupancyGrid& a, const OccupancyGrid& b) {
  if (!a.same_geometry(b)) {
    throw GridError("grid mismatch: " + std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                    " vs " + std::to_string(b.width()) + "x" + std::to_string(b.height()) +
                    " (or differing resolution/origin)");
  }
}

}  // namespace

IncrementalRegion diff(const OccupancyGrid& next, const OccupancyGrid& prev) {
  require_compatible(next, prev);
  IncrementalRegion region;
  int min_x = next.width(), min_y = next.height(), max_x = -1, max_y = -1;
  const auto& a = next.cells();
  const auto& b = prev.cells();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    const Cell c = next.cell_of(i);
    region.changed.push_back(c);
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
    max_x = std::max(max_x, c.x);
    max_y = std::max(max_y, c.y);
  }
  if (!region.changed.empty()) {
    region.bbox = {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
  }
  return region;
}

OccupancyGrid denoise(const OccupancyGrid& next, const OccupancyGrid& prev, const DenoiseOptions& opts) {
  const IncrementalRegion region = diff(next, prev);
  OccupancyGrid out = next;
  if (region.changed.empty()) return out;

  // Summed-area table of votes over the bbox grown by the window radius.
  const int rad = opts.window_radius;
  const int x0 = std::max(0, region.bbox.x - rad);
  const int y0 = std::max(0, region.bbox.y - rad);
  const int x1 = std::min(next.width(), region.bbox.x + region.bbox.w + rad);
  const int y1 = std::min(next.height(), region.bbox.y + region.bbox.h + rad);
  const int sw = x1 - x0 + 1;
  std::vector<int> sat(static_cast<std::size_t>(sw) * static_cast<std::size_t>(y1 - y0 + 1), 0);
  auto at = [&](int x, int y) -> int& { return sat[static_cast<std::size_t>(y) * sw + x]; };
  for (int y = y0; y < y1; ++y) {
    int row = 0;
    for (int x = x0; x < x1; ++x) {
      const CellState s = next.at(x, y);
      const bool vote = opts.rule == VoteRule::kFreeNeighbors ? s == CellState::kFree : s != CellState::kUnknown;
      row += vote ? 1 : 0;
      at(x - x0 + 1, y - y0 + 1) = at(x - x0 + 1, y - y0) + row;
    }
  }
  auto votes = [&](Cell p) {
    const int ax = std::max(x0, p.x - rad) - x0;
    const int ay = std::max(y0, p.y - rad) - y0;
    const int bx = std::min(x1 - 1, p.x + rad) - x0 + 1;
    const int by = std::min(y1 - 1, p.y + rad) - y0 + 1;
    return at(bx, by) - at(ax, by) - at(bx, ay) + at(ax, ay);
  };

  auto consider = [&](Cell p) {
    if (next.at(p) != CellState::kUnknown) return;
    if (votes(p) > opts.vote_threshold) out.set(p, CellState::kFree);
  };

  if (opts.scope == DenoiseScope::kChangedCells) {
    for (const Cell p : region.changed) consider(p);
  } else {
    const Rect& b = region.bbox;
    for (int y = b.y; y < b.y + b.h; ++y)
      for (int x = b.x; x < b.x + b.w; ++x) consider({x, y});
  }
  return out;
}

std::vector<Cell> supercover_line(Cell a, Cell b) {
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  const int nx = std::abs(dx);
  const int ny = std::abs(dy);
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(nx + ny + 1));
  Cell p = a;
  out.push_back(p);
  for (int ix = 0, iy = 0; ix < nx || iy < ny;) {
    // Compare where the segment crosses the next vertical vs. horizontal cell boundary.
    const long long decision = static_cast<long long>(1 + 2 * ix) * ny - static_cast<long long>(1 + 2 * iy) * nx;
    if (decision == 0) {
      out.push_back({p.x + sx, p.y});
      out.push_back({p.x, p.y + sy});
      p.x += sx;
      p.y += sy;
      ++ix;
      ++iy;
    } else if (decision < 0) {
      p.x += sx;
      ++ix;
    } else {
      p.y += sy;
      ++iy;
    }
    out.push_back(p);
  }
  return out;
}

bool line_of_sight(const OccupancyGrid& grid, Cell a, Cell b) {
  if (!grid.in_bounds(a) || !grid.in_bounds(b)) {
    throw GridError("line_of_sight endpoint out of bounds");
  }
  // Same walk as supercover_line, without materializing the cell list.
  const int dx = b.x - a.x;
  const int dy = b.y - a.y;
  const int nx = std::abs(dx);
  const int ny = std::abs(dy);
  const int sx = dx > 0 ? 1 : -1;
  const int sy = dy > 0 ? 1 : -1;
  Cell p = a;
  if (grid.at(p) != CellState::kFree) return false;
  for (int ix = 0, iy = 0; ix < nx || iy < ny;) {
    const long long decision = static_cast<long long>(1 + 2 * ix) * ny - static_cast<long long>(1 + 2 * iy) * nx;
    if (decision == 0) {
      if (grid.at(p.x + sx, p.y) != CellState::kFree || grid.at(p.x, p.y + sy) != CellState::kFree) return false;
      p.x += sx;
      p.y += sy;
      ++ix;
      ++iy;
    } else if (decision < 0) {
      p.x += sx;
      ++ix;
    } else {
      p.y += sy;
      ++iy;
    }
    if (grid.at(p) != CellState::kFree) return false;
  }
  return true;
}

double euclidean(Cell a, Cell b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double euclidean(Point2 a, Point2 b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace gvdtg
