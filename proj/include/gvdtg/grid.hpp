#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gvdtg {

enum class CellState : std::uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Axis-aligned rectangle in cell units; w == 0 or h == 0 means empty.
struct Rect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  bool empty() const { return w <= 0 || h <= 0; }
  bool contains(Cell c) const { return c.x >= x && c.x < x + w && c.y >= y && c.y < y + h; }
  bool intersects(const Rect& o) const {
    return !empty() && !o.empty() && x < o.x + o.w && o.x < x + w && y < o.y + o.h && o.y < y + h;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ternary occupancy raster. Row-major, cell (x, y) at index y * width + x.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int width, int height, double resolution, CellState fill = CellState::kUnknown,
                Point2 origin = {});

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  Point2 origin() const { return origin_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x);
  }
  Cell cell_of(std::size_t idx) const {
    return {static_cast<int>(idx % static_cast<std::size_t>(width_)),
            static_cast<int>(idx / static_cast<std::size_t>(width_))};
  }

  CellState at(Cell c) const { return cells_[index(c)]; }
  CellState at(int x, int y) const { return at(Cell{x, y}); }
  void set(Cell c, CellState s) { cells_[index(c)] = s; }
  void set(int x, int y, CellState s) { set(Cell{x, y}, s); }

  bool is_free(Cell c) const { return in_bounds(c) && at(c) == CellState::kFree; }
  bool is_occupied(Cell c) const { return in_bounds(c) && at(c) == CellState::kOccupied; }

  /// Cell containing a world-frame point (meters).
  Cell world_to_cell(Point2 p) const;
  /// World-frame center of a cell.
  Point2 cell_center(Cell c) const;

  bool same_geometry(const OccupancyGrid& o) const {
    return width_ == o.width_ && height_ == o.height_ && resolution_ == o.resolution_ &&
           origin_.x == o.origin_.x && origin_.y == o.origin_.y;
  }

  std::size_t count(CellState s) const;
  const std::vector<CellState>& cells() const { return cells_; }

  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
    return a.same_geometry(b) && a.cells_ == b.cells_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 1.0;
  Point2 origin_{};
  std::vector<CellState> cells_;
};

struct IncrementalRegion {
  std::vector<Cell> changed;  // row-major order
  Rect bbox;
};

/// Which free-vote rule the denoiser applies.
enum class VoteRule {
  kFreeNeighbors,   // count neighbors observed as free
  kKnownNeighbors,  // count neighbors that are not unknown (literal pseudocode variant)
};

/// Which unknown cells are eligible for the vote.
enum class DenoiseScope {
  kChangedCells,  // cells that differ between new and old and are unknown in new
  kBoundingBox,   // every unknown cell inside the bounding box of the increment
};

struct DenoiseOptions {
  VoteRule rule = VoteRule::kFreeNeighbors;
  DenoiseScope scope = DenoiseScope::kChangedCells;
  int window_radius = 2;  // 5x5 window
  int vote_threshold = 3; // fill when votes > threshold
};

IncrementalRegion diff(const OccupancyGrid& next, const OccupancyGrid& prev);

/// Trusted-neighborhood voting over the increment between two frames.
/// Votes are counted on the pre-edit `next` map, so fills never cascade within one call.
OccupancyGrid denoise(const OccupancyGrid& next, const OccupancyGrid& prev, const DenoiseOptions& opts = {});

/// Every cell touched by the segment between two cell centers, including both
/// side cells where the segment passes exactly through a lattice corner.
std::vector<Cell> supercover_line(Cell a, Cell b);

/// True iff every supercover cell between a and b is free. Unknown blocks.
bool line_of_sight(const OccupancyGrid& grid, Cell a, Cell b);

double euclidean(Cell a, Cell b);
double euclidean(Point2 a, Point2 b);

}  // namespace gvdtg
