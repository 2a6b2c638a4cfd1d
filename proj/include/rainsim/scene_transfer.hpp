#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rainsim/atmosphere.hpp"
#include "rainsim/lidar.hpp"
#include "rainsim/point_cloud.hpp"
#include "rainsim/splash.hpp"

namespace rainsim {

// A rain particle occluding a LiDAR return on the same beam. The particle is
// always nearer than the point it shadows (r_particle < r_point).
struct MatchedPair {
  std::size_t point_index = 0;
  double r_point = 0.0;       // meters from the sensor
  double point_intensity = 0.0;
  double r_particle = 0.0;    // meters from the sensor
  std::size_t particle_index = 0;
};

// Pairs particles with cloud points that fall in the same (ring, column)
// beam bin. Per beam the nearest particle wins and shadows the nearest point
// behind it; each point joins at most one pair. Output sorted by point index.
std::vector<MatchedPair> match_pairs(const PointCloud& cloud, const RainParticleSet& particles,
                                     const LidarConfig& lidar);

// Optical crossover ramp: 0 below r1, linear on (r1, r2), 1 above r2.
double gamma_term(double range, const AtmosphereParams& atmos);

// Unit step with heaviside(0) = 1.
double heaviside(double x);

// Return intensity of an occluding particle: the pulse-shaped scattering
// integral over the emission window, scaled so a fully transmitted pulse
// reproduces the original return's radiometry. Evaluated with composite
// Simpson on a fixed 129-sample grid for reproducibility; the near-field
// pole is excluded (the crossover term is zero there, the guard only
// protects pathological configs). Throws std::domain_error for
// r_particle <= 0.
double rain_particle_intensity(const MatchedPair& pair, const AtmosphereParams& atmos);

// Replaces each paired point with its occluding particle (position, computed
// intensity, rain-noise label); every unpaired point is labeled clear. Point
// count and index correspondence are preserved.
PointCloud apply_occlusion(const PointCloud& cloud, std::span<const MatchedPair> pairs,
                           std::span<const double> particle_intensities,
                           const RainParticleSet& particles);

// Scales each clear point's intensity by exp(-2 * alpha * range); rain-noise
// points already carry attenuation from the intensity integral.
PointCloud attenuate_clear_points(const PointCloud& cloud, const AtmosphereParams& atmos);

// Keeps points whose received power intensity / range^2 meets the sensor
// floor: min_power_override when set, else 0.9 / max_range^2 (a
// 0.9-reflectance target at full range). Relative order is preserved.
PointCloud power_filter(const PointCloud& cloud, const LidarConfig& lidar);

// Full scene processing: match, compute particle intensities, occlude,
// attenuate, filter. Deterministic; never grows the cloud.
PointCloud simulate_rain(const PointCloud& cloud, const RainParticleSet& particles,
                         const AtmosphereParams& atmos, const LidarConfig& lidar);

}  // namespace rainsim
