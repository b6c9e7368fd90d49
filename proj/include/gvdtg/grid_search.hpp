#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gvdtg/grid.hpp"

namespace gvdtg {

struct GridPath {
  std::vector<Cell> cells;  // start to goal inclusive
  double length = 0.0;      // cells, octile step lengths
};

/// Octile distance, admissible for 8-connected unit/sqrt(2) moves.
double octile(Cell a, Cell b);

/// Sum of consecutive step lengths along a cell path.
double path_length(const std::vector<Cell>& cells);

/// Bidirectional A* over free cells, 8-connected without corner cutting.
std::optional<GridPath> bidirectional_astar(const OccupancyGrid& grid, Cell start, Cell goal);

/// Unidirectional A* over free cells with an optional additive per-cell entry
/// cost (indexed like the grid; must be non-negative).
std::optional<GridPath> astar(const OccupancyGrid& grid, Cell start, Cell goal,
                              const std::vector<float>* extra_cost = nullptr);

/// Dijkstra from `start` over free cells until the first cell satisfying
/// `is_goal` is settled. Ties settle in (distance, y, x) order.
std::optional<GridPath> nearest_by_path(const OccupancyGrid& grid, Cell start,
                                        const std::function<bool(Cell)>& is_goal,
                                        const std::vector<float>* extra_cost = nullptr);

/// Cells reachable from `start` through cells where `passable` holds.
std::vector<std::uint8_t> flood_fill(const OccupancyGrid& grid, Cell start,
                                     const std::function<bool(Cell)>& passable, bool eight_connected);

/// Greedy line-of-sight shortcutting of a cell path.
std::vector<Cell> shortcut_path(const OccupancyGrid& grid, const std::vector<Cell>& cells);

/// Per-cell penalty for cells within `radius` of an occupied cell, decaying linearly.
std::vector<float> proximity_penalty(const OccupancyGrid& grid, int radius, float weight);

}  // namespace gvdtg
