#pragma once

#include <cstdint>
#include <mutex>

#include "gvdtg/grid.hpp"
#include "gvdtg/lru_cache.hpp"

namespace gvdtg {

/// Memoized line-of-sight between unordered cell pairs.
///
/// Entries stay valid only while the grid inside the segment's bounding box is
/// unchanged; callers report each frame's changed bounding box via invalidate().
/// Safe for concurrent callers: a race may evaluate the same pair twice but
/// never stores a stale answer.
class ConnectivityCache {
 public:
  static constexpr std::size_t kDefaultCapacity = std::size_t{1} << 18;

  explicit ConnectivityCache(std::size_t capacity = kDefaultCapacity) : cache_(capacity) {}

  bool connected(const OccupancyGrid& grid, Cell a, Cell b);

  /// Drops every entry whose segment bounding box intersects `changed`.
  std::size_t invalidate(const Rect& changed);
  void clear();

  std::size_t size() const;
  std::size_t capacity() const { return cache_.capacity(); }
  std::uint64_t evaluations() const { return evaluations_; }
  std::uint64_t hits() const { return hits_; }
  bool contains(Cell a, Cell b) const;

  static std::uint64_t key(Cell a, Cell b);
  static Rect segment_box(std::uint64_t key);

 private:
  mutable std::mutex mu_;
  LruCache<std::uint64_t, bool> cache_;
  std::uint64_t evaluations_ = 0;
  std::uint64_t hits_ = 0;
};

}  // namespace gvdtg
