#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rainsim/point_cloud.hpp"
#include "rainsim/vec3.hpp"

namespace rainsim {

// Sensor geometry: where the unit sits, which elevation rings it fires, how
// finely it samples azimuth, and how far it can see.
struct LidarConfig {
  Vec3 origin;
  std::vector<double> ring_inclinations;  // radians, strictly monotonic
  double azimuth_resolution = 0.0;        // radians per column
  double max_range = 0.0;                 // meters
  std::optional<double> min_power_override;

  // Throws ValidationError if the invariants do not hold.
  void validate() const;
};

// Direction + distance of a return as seen from the sensor origin.
struct BeamCoord {
  double azimuth = 0.0;    // radians in [-pi, pi)
  double elevation = 0.0;  // radians
  double range = 0.0;      // meters from the sensor origin
};

struct BeamIndex {
  std::size_t ring = 0;
  std::size_t column = 0;

  bool operator==(const BeamIndex&) const = default;
};

// Throws ValidationError for a point coincident with the sensor origin.
BeamCoord to_beam_coord(const Vec3& p, const LidarConfig& lidar);
BeamCoord to_beam_coord(const Point& p, const LidarConfig& lidar);

// Total: every direction maps to some bin. Nearest ring wins, equidistant
// rings resolve to the lower index; column = floor((azimuth + pi) / res).
BeamIndex beam_index(const BeamCoord& b, const LidarConfig& lidar);

}  // namespace rainsim
