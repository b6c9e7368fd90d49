#pragma once

#include "gvdtg/grid.hpp"
#include "gvdtg/gvd.hpp"

namespace gvdtg {

enum class FrontierClass { kFrontier, kExplored, kPseudo };

const char* to_string(FrontierClass c);

struct FrontierParams {
  int contact_min = 5;           // fewer overlapping pixels than this means explored
  double pseudo_fraction = 0.8;  // obstacle share above this means pseudo-frontier
};

/// Pixel counts of one crop after a single 3x3 dilation of each class mask.
struct DilationCounts {
  int unknown = 0;
  int free = 0;
  int occupied = 0;
  int contact = 0;           // |dil(unknown) & dil(free)|
  int obstacle_contact = 0;  // |dil(occupied) & dil(unknown) & dil(free)|
};

/// Counts inside `crop`; dilation does not reach outside the crop.
DilationCounts dilation_counts(const OccupancyGrid& grid, const Rect& crop);

struct FrontierStatus {
  int node = -1;
  FrontierClass status = FrontierClass::kExplored;
  int contact_pixels = 0;
  double obstacle_fraction = 0.0;  // meaningful only when contact_pixels > 0
  bool frontier() const { return status == FrontierClass::kFrontier; }
};

/// Square crop of half-width ceil(r) + 1 around the node, clipped to the grid.
Rect frontier_crop(const OccupancyGrid& grid, const GvdNode& node);

FrontierStatus classify(const OccupancyGrid& grid, const GvdNode& node, const FrontierParams& params = {});

/// Classification of an explicit crop; classify() is this on frontier_crop().
FrontierStatus classify_region(const OccupancyGrid& grid, const Rect& crop, const FrontierParams& params = {});

}  // namespace gvdtg
