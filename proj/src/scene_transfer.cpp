#include "rainsim/scene_transfer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "rainsim/errors.hpp"
#include "rainsim/quadrature.hpp"

namespace rainsim {
namespace {

constexpr std::size_t kIntensitySamples = 129;  // fixed grid keeps outputs reproducible
constexpr double kPoleGuard = 1e-6;             // meters

struct BeamOccupants {
  // Best (nearest) particle seen on this beam so far.
  double particle_range = std::numeric_limits<double>::infinity();
  std::size_t particle_index = 0;
  bool has_particle = false;
  std::vector<std::pair<double, std::size_t>> points;  // (range, index)
};

std::uint64_t beam_key(const BeamIndex& b) {
  return (static_cast<std::uint64_t>(b.ring) << 32) | static_cast<std::uint64_t>(b.column);
}

}  // namespace

void AtmosphereParams::validate() const {
  if (!(alpha >= 0.0)) throw ValidationError("atmosphere: alpha must be >= 0");
  if (!(beta >= 0.0)) throw ValidationError("atmosphere: beta must be >= 0");
  if (!(beta0 > 0.0)) throw ValidationError("atmosphere: beta0 must be > 0");
  if (!(tau_h > 0.0)) throw ValidationError("atmosphere: tau_h must be > 0");
  if (!(r1 >= 0.0) || !(r2 > r1)) {
    throw ValidationError("atmosphere: requires 0 <= r1 < r2");
  }
  if (!(c > 0.0)) throw ValidationError("atmosphere: c must be > 0");
}

std::vector<MatchedPair> match_pairs(const PointCloud& cloud, const RainParticleSet& particles,
                                     const LidarConfig& lidar) {
  lidar.validate();

  std::unordered_map<std::uint64_t, BeamOccupants> beams;
  beams.reserve(cloud.size());
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const BeamCoord coord = to_beam_coord(cloud.points[i], lidar);
    beams[beam_key(beam_index(coord, lidar))].points.emplace_back(coord.range, i);
  }
  for (std::size_t j = 0; j < particles.particles.size(); ++j) {
    const BeamCoord coord = to_beam_coord(particles.particles[j].position, lidar);
    auto it = beams.find(beam_key(beam_index(coord, lidar)));
    if (it == beams.end()) {
      continue;  // nothing to occlude on this beam
    }
    BeamOccupants& beam = it->second;
    if (!beam.has_particle || coord.range < beam.particle_range) {
      beam.has_particle = true;
      beam.particle_range = coord.range;
      beam.particle_index = j;
    }
  }

  std::vector<MatchedPair> pairs;
  for (const auto& [key, beam] : beams) {
    if (!beam.has_particle) continue;
    // Nearest point strictly behind the particle; ties go to the lowest index.
    double best_range = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    bool found = false;
    for (const auto& [range, index] : beam.points) {
      if (range <= beam.particle_range) continue;
      if (range < best_range || (range == best_range && found && index < best_index)) {
        best_range = range;
        best_index = index;
        found = true;
      }
    }
    if (!found) continue;
    pairs.push_back(MatchedPair{best_index, best_range,
                                static_cast<double>(cloud.points[best_index].intensity),
                                beam.particle_range, beam.particle_index});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const MatchedPair& a, const MatchedPair& b) { return a.point_index < b.point_index; });
  return pairs;
}

double gamma_term(double range, const AtmosphereParams& atmos) {
  if (range <= atmos.r1) return 0.0;
  if (range >= atmos.r2) return 1.0;
  return (range - atmos.r1) / (atmos.r2 - atmos.r1);
}

double heaviside(double x) { return x >= 0.0 ? 1.0 : 0.0; }

double rain_particle_intensity(const MatchedPair& pair, const AtmosphereParams& atmos) {
  atmos.validate();
  if (!(pair.r_particle > 0.0)) {
    throw std::domain_error("rain_particle_intensity: particle range must be > 0");
  }

  const double scale =
      pair.point_intensity * pair.r_point * pair.r_point / atmos.beta0 * atmos.beta;
  const double window = 2.0 * atmos.tau_h;
  const double h = window / static_cast<double>(kIntensitySamples - 1);

  std::array<double, kIntensitySamples> samples{};
  for (std::size_t k = 0; k < kIntensitySamples; ++k) {
    const double t = static_cast<double>(k) * h;
    const double r = pair.r_particle - atmos.c * t / 2.0;
    if (std::abs(r) < kPoleGuard) {
      samples[k] = 0.0;
      continue;
    }
    const double pulse = std::sin(std::numbers::pi * t / window);
    samples[k] = pulse * pulse * std::exp(-2.0 * atmos.alpha * r) / (r * r) *
                 gamma_term(r, atmos) * heaviside(pair.r_point - pair.r_particle + atmos.c * t / 2.0);
  }
  return scale * simpson_integrate(samples, h);
}

PointCloud apply_occlusion(const PointCloud& cloud, std::span<const MatchedPair> pairs,
                           std::span<const double> particle_intensities,
                           const RainParticleSet& particles) {
  if (pairs.size() != particle_intensities.size()) {
    throw std::invalid_argument("apply_occlusion: one intensity per pair required");
  }

  PointCloud out = cloud;
  for (Point& p : out.points) {
    p.noise_label = NoiseLabel::kClear;
  }
  std::vector<bool> replaced(cloud.size(), false);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const MatchedPair& pair = pairs[i];
    if (pair.point_index >= out.points.size()) {
      throw std::invalid_argument("apply_occlusion: pair point index out of range");
    }
    if (replaced[pair.point_index]) {
      throw std::invalid_argument("apply_occlusion: duplicate point index in pairs");
    }
    replaced[pair.point_index] = true;
    const Vec3 pos = particles.particles.at(pair.particle_index).position;
    Point& p = out.points[pair.point_index];
    p.x = static_cast<float>(pos.x);
    p.y = static_cast<float>(pos.y);
    p.z = static_cast<float>(pos.z);
    p.intensity = static_cast<float>(particle_intensities[i]);
    p.noise_label = NoiseLabel::kRainNoise;
  }
  return out;
}

PointCloud attenuate_clear_points(const PointCloud& cloud, const AtmosphereParams& atmos) {
  atmos.validate();
  PointCloud out = cloud;
  for (Point& p : out.points) {
    if (p.noise_label == NoiseLabel::kRainNoise) continue;
    p.intensity = static_cast<float>(static_cast<double>(p.intensity) *
                                     std::exp(-2.0 * atmos.alpha * p.range()));
  }
  return out;
}

PointCloud power_filter(const PointCloud& cloud, const LidarConfig& lidar) {
  lidar.validate();
  const double min_power = lidar.min_power_override
                               ? *lidar.min_power_override
                               : 0.9 / (lidar.max_range * lidar.max_range);
  PointCloud out;
  out.frame_id = cloud.frame_id;
  out.points.reserve(cloud.size());
  for (const Point& p : cloud.points) {
    const double range = (p.position() - lidar.origin).norm();
    if (range <= 0.0) {
      throw ValidationError("power_filter: degenerate point at the sensor origin");
    }
    if (static_cast<double>(p.intensity) / (range * range) >= min_power) {
      out.points.push_back(p);
    }
  }
  return out;
}

PointCloud simulate_rain(const PointCloud& cloud, const RainParticleSet& particles,
                         const AtmosphereParams& atmos, const LidarConfig& lidar) {
  const auto pairs = match_pairs(cloud, particles, lidar);
  std::vector<double> intensities;
  intensities.reserve(pairs.size());
  for (const MatchedPair& pair : pairs) {
    intensities.push_back(rain_particle_intensity(pair, atmos));
  }
  const PointCloud occluded = apply_occlusion(cloud, pairs, intensities, particles);
  const PointCloud adjusted = attenuate_clear_points(occluded, atmos);
  return power_filter(adjusted, lidar);
}

}  // namespace rainsim
