#pragma once

#include <random>
#include <string>

#include "gvdtg/grid.hpp"

#ifndef GVDTG_DATA_DIR
#define GVDTG_DATA_DIR "data"
#endif

namespace test {

inline std::string data_path(const std::string& rel) { return std::string(GVDTG_DATA_DIR) + "/" + rel; }

inline gvdtg::OccupancyGrid random_grid(int w, int h, std::mt19937_64& rng) {
  gvdtg::OccupancyGrid g(w, h, 0.05);
  std::uniform_int_distribution<int> state(0, 2);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) g.set(x, y, static_cast<gvdtg::CellState>(state(rng)));
  return g;
}

/// Copy of `g` with each cell redrawn with probability `p`.
inline gvdtg::OccupancyGrid perturb(const gvdtg::OccupancyGrid& g, std::mt19937_64& rng, double p) {
  gvdtg::OccupancyGrid out = g;
  std::bernoulli_distribution flip(p);
  std::uniform_int_distribution<int> state(0, 2);
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x)
      if (flip(rng)) out.set(x, y, static_cast<gvdtg::CellState>(state(rng)));
  return out;
}

/// Free interior with a one-cell occupied border.
inline gvdtg::OccupancyGrid walled_room(int w, int h, double res = 0.05) {
  gvdtg::OccupancyGrid g(w, h, res, gvdtg::CellState::kFree);
  for (int x = 0; x < w; ++x) {
    g.set(x, 0, gvdtg::CellState::kOccupied);
    g.set(x, h - 1, gvdtg::CellState::kOccupied);
  }
  for (int y = 0; y < h; ++y) {
    g.set(0, y, gvdtg::CellState::kOccupied);
    g.set(w - 1, y, gvdtg::CellState::kOccupied);
  }
  return g;
}

inline void fill_rect(gvdtg::OccupancyGrid& g, int x0, int y0, int x1, int y1, gvdtg::CellState s) {
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) g.set(x, y, s);
}

}  // namespace test
