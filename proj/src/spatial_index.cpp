#include "gvdtg/spatial_index.hpp"

#include <algorithm>
#include <numeric>

namespace gvdtg {

KdTree::KdTree(std::span<const Point2> points, std::size_t leaf_capacity)
    : points_(points.begin(), points.end()), order_(points.size()), leaf_capacity_(std::max<std::size_t>(1, leaf_capacity)) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!points_.empty()) build(0, points_.size(), 0);
}

int KdTree::build(std::size_t begin, std::size_t end, int depth) {
  height_ = std::max(height_, depth + 1);
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  Node node;
  node.begin = begin;
  node.end = end;
  node.min_x = node.max_x = points_[order_[begin]].x;
  node.min_y = node.max_y = points_[order_[begin]].y;
  for (std::size_t i = begin; i < end; ++i) {
    const Point2& p = points_[order_[i]];
    node.min_x = std::min(node.min_x, p.x);
    node.max_x = std::max(node.max_x, p.x);
    node.min_y = std::min(node.min_y, p.y);
    node.max_y = std::max(node.max_y, p.y);
  }
  if (end - begin > leaf_capacity_) {
    node.axis = depth % 2;
    const std::size_t mid = begin + (end - begin) / 2;
    auto key = [&](std::size_t i) { return node.axis == 0 ? points_[i].x : points_[i].y; };
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin), order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    node.split = key(order_[mid]);
    node.left = build(begin, mid, depth + 1);
    node.right = build(mid, end, depth + 1);
  }
  nodes_[static_cast<std::size_t>(id)] = node;
  return id;
}

std::vector<std::size_t> KdTree::radius_query(Point2 center, double radius) const {
  std::vector<std::size_t> out;
  if (nodes_.empty() || radius < 0) return out;
  const double r2 = radius * radius;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const Node& n = nodes_[static_cast<std::size_t>(stack.back())];
    stack.pop_back();
    // Distance from the query to the node's bounding box.
    const double dx = std::max({n.min_x - center.x, 0.0, center.x - n.max_x});
    const double dy = std::max({n.min_y - center.y, 0.0, center.y - n.max_y});
    if (dx * dx + dy * dy > r2) continue;
    if (n.axis < 0) {
      for (std::size_t i = n.begin; i < n.end; ++i) {
        const Point2& p = points_[order_[i]];
        const double ex = p.x - center.x, ey = p.y - center.y;
        if (ex * ex + ey * ey <= r2) out.push_back(order_[i]);
      }
    } else {
      stack.push_back(n.left);
      stack.push_back(n.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gvdtg
