#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gvdtg/grid.hpp"

namespace gvdtg {

/// A sampled medial point with its maximum inscribed free disk.
struct GvdNode {
  Cell center;
  double radius = 0.0;  // cells, Euclidean
  int frame = 0;
};

/// Boolean raster of area already claimed by accepted GVD disks. Bits are only ever set.
class CoverageMask {
 public:
  CoverageMask() = default;
  CoverageMask(int width, int height)
      : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool test(Cell c) const { return bits_[static_cast<std::size_t>(c.y) * width_ + c.x] != 0; }
  void set(Cell c) {
    auto& b = bits_[static_cast<std::size_t>(c.y) * width_ + c.x];
    if (!b) {
      b = 1;
      ++count_;
    }
  }
  std::size_t count() const { return count_; }
  bool matches(const OccupancyGrid& g) const { return g.width() == width_ && g.height() == height_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

struct SamplingParams {
  double r_min = 2.0;          // cells; nodes need radius strictly above this
  int delta_r = 1;             // window growth per step, cells
  double delta = 1.5;          // equidistance tolerance, cells
  int step_fine = 2;           // lattice step inside the local region
  int step_coarse = 6;         // lattice step elsewhere
  double local_range_m = 5.0;  // side length L of the local region, meters
  double pair_separation = 3.0;  // minimum separation of the bisected obstacle pair, cells
  int snap_radius = 2;         // free-cell search radius when the midpoint is blocked
  bool unknown_blocks = true;  // treat unknown as an obstacle when measuring clearance

  void validate() const;
};

/// Blocking predicate shared by every clearance query in this module.
inline bool is_blocking(const OccupancyGrid& g, Cell c, bool unknown_blocks) {
  const CellState s = g.at(c);
  return s == CellState::kOccupied || (unknown_blocks && s == CellState::kUnknown);
}

/// Square region around the robot with half-width floor(L / (2 rho)) cells, clipped to the grid.
Rect local_region(Cell robot, const SamplingParams& params, double resolution, int width, int height);

struct ObstacleSet {
  double d_min = 0.0;
  std::vector<Cell> cells;  // row-major order
};

/// Grows a square window from r_min until it holds a blocking cell, then
/// returns the nearest blocking distance and every blocking cell closer than d_min + delta.
ObstacleSet nearest_obstacles(const OccupancyGrid& grid, Cell p, const SamplingParams& params);

/// Exact Euclidean distance from `c` to the nearest blocking cell, capped at max(width, height).
double clearance(const OccupancyGrid& grid, Cell c, bool unknown_blocks);

/// Bisects the farthest-apart pair of `obstacles` and validates the resulting disk.
std::optional<GvdNode> bisect_node(const OccupancyGrid& grid, const ObstacleSet& obstacles,
                                   const SamplingParams& params, int frame = 0);

/// Sets every cell within ceil(r) + 1 of the node center.
void mark_coverage(CoverageMask& mask, const GvdNode& node);
int coverage_radius(double r);

/// Called once per accepted node with the mask as it was just before marking.
using AcceptObserver = std::function<void(const GvdNode&, const CoverageMask&)>;

/// One frame of coverage-aware dual-granularity sampling. Returns the newly
/// accepted nodes in acceptance order (descending radius) and updates `mask`.
std::vector<GvdNode> sample_frame(const OccupancyGrid& grid, CoverageMask& mask, Cell robot,
                                  const SamplingParams& params, std::uint64_t seed, int frame,
                                  const AcceptObserver& observer = {});

/// Repeats sample_frame until a frame yields nothing new.
std::vector<GvdNode> sample_to_fixpoint(const OccupancyGrid& grid, CoverageMask& mask, Cell robot,
                                        const SamplingParams& params, std::uint64_t seed,
                                        const AcceptObserver& observer = {}, int max_frames = 1000);

}  // namespace gvdtg
