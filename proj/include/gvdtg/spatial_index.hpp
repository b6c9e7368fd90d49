#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gvdtg/grid.hpp"

namespace gvdtg {

/// Static 2-d tree over a point set. Levels split at the median, alternating
/// x then y, until a node holds at most `leaf_capacity` points.
class KdTree {
 public:
  explicit KdTree(std::span<const Point2> points, std::size_t leaf_capacity = 16);

  /// Indices of all points within Euclidean distance <= radius of `center`, ascending.
  std::vector<std::size_t> radius_query(Point2 center, double radius) const;

  std::size_t size() const { return points_.size(); }
  int height() const { return height_; }

 private:
  struct Node {
    std::size_t begin = 0;  // range into order_
    std::size_t end = 0;
    int axis = -1;          // -1 for leaves
    double split = 0.0;
    int left = -1;
    int right = -1;
    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  };

  int build(std::size_t begin, std::size_t end, int depth);

  std::vector<Point2> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_capacity_;
  int height_ = 0;
};

}  // namespace gvdtg
