#pragma once

// Three 11x11 crops around a node at (5,5) with radius 4, one per frontier case.

#include "gvdtg/grid.hpp"
#include "support.hpp"

namespace fig6 {

using gvdtg::CellState;
using gvdtg::OccupancyGrid;

/// A single unknown cell walled into a corner: three contact pixels.
inline OccupancyGrid explored() {
  OccupancyGrid g(11, 11, 0.05, CellState::kFree);
  g.set(0, 0, CellState::kUnknown);
  g.set(1, 0, CellState::kOccupied);
  g.set(0, 1, CellState::kOccupied);
  g.set(1, 1, CellState::kOccupied);
  return g;
}

/// Unknown half sealed behind a wall spanning the crop: every contact touches the wall.
inline OccupancyGrid pseudo() {
  OccupancyGrid g(11, 11, 0.05, CellState::kFree);
  test::fill_rect(g, 5, 0, 5, 10, CellState::kOccupied);
  test::fill_rect(g, 6, 0, 10, 10, CellState::kUnknown);
  return g;
}

/// Unknown half meeting free space directly, with an obstacle away from the seam.
inline OccupancyGrid frontier() {
  OccupancyGrid g(11, 11, 0.05, CellState::kFree);
  test::fill_rect(g, 5, 0, 10, 10, CellState::kUnknown);
  g.set(0, 0, CellState::kOccupied);
  return g;
}

}  // namespace fig6
