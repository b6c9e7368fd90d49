#include "gvdtg/connectivity.hpp"

#include <algorithm>

namespace gvdtg {

namespace {

std::uint64_t pack(Cell c) {
  return (static_cast<std::uint64_t>(static_cast<std::uint16_t>(c.y)) << 16) | static_cast<std::uint16_t>(c.x);
}

Cell unpack(std::uint64_t v) {
  return {static_cast<int>(v & 0xffffu), static_cast<int>((v >> 16) & 0xffffu)};
}

}  // namespace

std::uint64_t ConnectivityCache::key(Cell a, Cell b) {
  std::uint64_t ka = pack(a), kb = pack(b);
  if (kb < ka) std::swap(ka, kb);
  return (ka << 32) | kb;
}

Rect ConnectivityCache::segment_box(std::uint64_t key) {
  const Cell a = unpack(key >> 32);
  const Cell b = unpack(key & 0xffffffffu);
  const int x0 = std::min(a.x, b.x), y0 = std::min(a.y, b.y);
  return {x0, y0, std::max(a.x, b.x) - x0 + 1, std::max(a.y, b.y) - y0 + 1};
}

bool ConnectivityCache::connected(const OccupancyGrid& grid, Cell a, Cell b) {
  const std::uint64_t k = key(a, b);
  {
    std::lock_guard lock(mu_);
    if (auto hit = cache_.get(k)) {
      ++hits_;
      return *hit;
    }
  }
  const bool result = line_of_sight(grid, a, b);
  std::lock_guard lock(mu_);
  ++evaluations_;
  cache_.put(k, result);
  return result;
}

std::size_t ConnectivityCache::invalidate(const Rect& changed) {
  if (changed.empty()) return 0;
  std::lock_guard lock(mu_);
  return cache_.erase_if([&](std::uint64_t k, bool) { return segment_box(k).intersects(changed); });
}

void ConnectivityCache::clear() {
  std::lock_guard lock(mu_);
  cache_.clear();
}

std::size_t ConnectivityCache::size() const {
  std::lock_guard lock(mu_);
  return cache_.size();
}

bool ConnectivityCache::contains(Cell a, Cell b) const {
  std::lock_guard lock(mu_);
  return cache_.contains(key(a, b));
}

}  // namespace gvdtg
