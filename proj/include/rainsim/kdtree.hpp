#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rainsim/vec3.hpp"

namespace rainsim {

// Median-split 3D kd-tree for exact nearest-neighbor queries. Built once
// over an immutable point span; query cost is O(log n) on typical clouds.
class KdTree3 {
 public:
  explicit KdTree3(std::span<const Vec3> points);

  bool empty() const { return points_.empty(); }

  // Euclidean distance from q to the nearest stored point. The tree must be
  // non-empty.
  double nearest_distance(const Vec3& q) const;

 private:
  struct Node {
    std::size_t point = 0;
    int axis = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::size_t begin, std::size_t end, int depth);
  void search(std::int32_t node, const Vec3& q, double& best_sq) const;

  std::vector<Vec3> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace rainsim
