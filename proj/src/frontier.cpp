#include "gvdtg/frontier.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gvdtg {

namespace {

// Separable 3x3 dilation of a w*h mask: horizontal pass then vertical pass.
std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& m, int w, int h) {
  std::vector<std::uint8_t> row(m.size(), 0), out(m.size(), 0);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* src = &m[static_cast<std::size_t>(y) * w];
    std::uint8_t* dst = &row[static_cast<std::size_t>(y) * w];
    for (int x = 0; x < w; ++x) {
      dst[x] = src[x] | (x > 0 ? src[x - 1] : 0) | (x + 1 < w ? src[x + 1] : 0);
    }
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      out[i] = row[i] | (y > 0 ? row[i - w] : 0) | (y + 1 < h ? row[i + w] : 0);
    }
  }
  return out;
}

}  // namespace

const char* to_string(FrontierClass c) {
  switch (c) {
    case FrontierClass::kFrontier: return "frontier";
    case FrontierClass::kPseudo: return "pseudo";
    default: return "explored";
  }
}

DilationCounts dilation_counts(const OccupancyGrid& grid, const Rect& crop) {
  DilationCounts out;
  if (crop.empty()) return out;
  const int w = crop.w, h = crop.h;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<std::uint8_t> mu(n, 0), mf(n, 0), mo(n, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      switch (grid.at(crop.x + x, crop.y + y)) {
        case CellState::kUnknown: mu[i] = 1; ++out.unknown; break;
        case CellState::kFree: mf[i] = 1; ++out.free; break;
        case CellState::kOccupied: mo[i] = 1; ++out.occupied; break;
      }
    }
  }
  const auto du = dilate(mu, w, h), df = dilate(mf, w, h), dob = dilate(mo, w, h);
  for (std::size_t i = 0; i < n; ++i) {
    if (du[i] && df[i]) {
      ++out.contact;
      if (dob[i]) ++out.obstacle_contact;
    }
  }
  return out;
}

Rect frontier_crop(const OccupancyGrid& grid, const GvdNode& node) {
  const int half = static_cast<int>(std::ceil(node.radius)) + 1;
  const int x0 = std::max(0, node.center.x - half), y0 = std::max(0, node.center.y - half);
  const int x1 = std::min(grid.width() - 1, node.center.x + half);
  const int y1 = std::min(grid.height() - 1, node.center.y + half);
  if (x1 < x0 || y1 < y0) return {};
  return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

FrontierStatus classify_region(const OccupancyGrid& grid, const Rect& crop, const FrontierParams& params) {
  FrontierStatus st;
  const DilationCounts c = dilation_counts(grid, crop);
  st.contact_pixels = c.contact;
  st.obstacle_fraction = c.contact > 0 ? static_cast<double>(c.obstacle_contact) / c.contact : 0.0;
  if (c.unknown == 0) {
    st.status = FrontierClass::kExplored;
  } else if (c.free > 0 && c.occupied == 0) {
    st.status = FrontierClass::kFrontier;
  } else if (c.contact < params.contact_min) {
    st.status = FrontierClass::kExplored;
  } else if (st.obstacle_fraction > params.pseudo_fraction) {
    st.status = FrontierClass::kPseudo;
  } else {
    st.status = FrontierClass::kFrontier;
  }
  return st;
}

FrontierStatus classify(const OccupancyGrid& grid, const GvdNode& node, const FrontierParams& params) {
  return classify_region(grid, frontier_crop(grid, node), params);
}

}  // namespace gvdtg
