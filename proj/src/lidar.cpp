#include "rainsim/lidar.hpp"

#include <cmath>
#include <numbers>

#include "rainsim/errors.hpp"

namespace rainsim {

void LidarConfig::validate() const {
  if (ring_inclinations.empty()) {
    throw ValidationError("lidar config: ring_inclinations must not be empty");
  }
  if (ring_inclinations.size() > 1) {
    const bool ascending = ring_inclinations[0] < ring_inclinations[1];
    for (std::size_t i = 0; i + 1 < ring_inclinations.size(); ++i) {
      const bool ok = ascending ? ring_inclinations[i] < ring_inclinations[i + 1]
                                : ring_inclinations[i] > ring_inclinations[i + 1];
      if (!ok) {
        throw ValidationError("lidar config: ring_inclinations must be strictly monotonic");
      }
    }
  }
  if (!(max_range > 0.0)) {
    throw ValidationError("lidar config: max_range must be > 0");
  }
  if (!(azimuth_resolution > 0.0)) {
    throw ValidationError("lidar config: azimuth_resolution must be > 0");
  }
}

BeamCoord to_beam_coord(const Vec3& p, const LidarConfig& lidar) {
  const Vec3 d = p - lidar.origin;
  const double range = d.norm();
  if (range <= 0.0) {
    throw ValidationError("degenerate point: coincident with the sensor origin");
  }
  double azimuth = std::atan2(d.y, d.x);
  // atan2 may return +pi; fold it onto the lower bound.
  if (azimuth >= std::numbers::pi) {
    azimuth -= 2.0 * std::numbers::pi;
  }
  const double elevation = std::asin(d.z / range);
  return {azimuth, elevation, range};
}

BeamCoord to_beam_coord(const Point& p, const LidarConfig& lidar) {
  return to_beam_coord(p.position(), lidar);
}

BeamIndex beam_index(const BeamCoord& b, const LidarConfig& lidar) {
  const auto& rings = lidar.ring_inclinations;
  std::size_t best = 0;
  double best_dist = std::abs(b.elevation - rings[0]);
  for (std::size_t i = 1; i < rings.size(); ++i) {
    const double dist = std::abs(b.elevation - rings[i]);
    if (dist < best_dist) {
      best = i;
      best_dist = dist;
    }
  }
  const double shifted = b.azimuth + std::numbers::pi;
  auto column = static_cast<std::size_t>(std::floor(shifted / lidar.azimuth_resolution));
  // Guard the open upper bound: azimuth just below +pi can round into the
  // one-past-last column.
  const auto n_columns =
      static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi / lidar.azimuth_resolution));
  if (column >= n_columns) {
    column = n_columns - 1;
  }
  return {best, column};
}

}  // namespace rainsim
