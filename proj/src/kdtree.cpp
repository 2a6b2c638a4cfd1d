#include "rainsim/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rainsim {
namespace {

double axis_value(const Vec3& p, int axis) {
  switch (axis) {
    case 0:
      return p.x;
    case 1:
      return p.y;
    default:
      return p.z;
  }
}

}  // namespace

KdTree3::KdTree3(std::span<const Vec3> points) : points_(points.begin(), points.end()) {
  order_.resize(points_.size());
  for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
  nodes_.reserve(points_.size());
  if (!points_.empty()) {
    root_ = build(0, points_.size(), 0);
  }
}

std::int32_t KdTree3::build(std::size_t begin, std::size_t end, int depth) {
  if (begin >= end) return -1;
  const int axis = depth % 3;
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     return axis_value(points_[a], axis) < axis_value(points_[b], axis);
                   });
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{order_[mid], axis, -1, -1});
  nodes_[static_cast<std::size_t>(index)].left = build(begin, mid, depth + 1);
  nodes_[static_cast<std::size_t>(index)].right = build(mid + 1, end, depth + 1);
  return index;
}

void KdTree3::search(std::int32_t node, const Vec3& q, double& best_sq) const {
  if (node < 0) return;
  const Node& n = nodes_[static_cast<std::size_t>(node)];
  const Vec3& p = points_[n.point];
  best_sq = std::min(best_sq, (q - p).squared_norm());

  const double delta = axis_value(q, n.axis) - axis_value(p, n.axis);
  const std::int32_t near = delta < 0.0 ? n.left : n.right;
  const std::int32_t far = delta < 0.0 ? n.right : n.left;
  search(near, q, best_sq);
  if (delta * delta < best_sq) {
    search(far, q, best_sq);
  }
}

double KdTree3::nearest_distance(const Vec3& q) const {
  if (root_ < 0) {
    throw std::invalid_argument("KdTree3: query on an empty tree");
  }
  double best_sq = std::numeric_limits<double>::infinity();
  search(root_, q, best_sq);
  return std::sqrt(best_sq);
}

}  // namespace rainsim
