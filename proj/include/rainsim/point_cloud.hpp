#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rainsim/vec3.hpp"

namespace rainsim {

enum class NoiseLabel : std::uint8_t { kClear = 0, kRainNoise = 1, kUnlabeled = 2 };

// One LiDAR return. Coordinates and intensity are stored as 32-bit floats to
// match the on-disk record layout bit for bit; all math runs in double.
struct Point {
  float x = 0.0f;
  float y = 0.0f;
  float z = 0.0f;
  float intensity = 0.0f;
  NoiseLabel noise_label = NoiseLabel::kUnlabeled;

  Vec3 position() const { return {x, y, z}; }

  // Distance from the sensor-frame origin.
  double range() const { return position().norm(); }

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

struct PointCloud {
  std::vector<Point> points;
  std::string frame_id;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

}  // namespace rainsim
