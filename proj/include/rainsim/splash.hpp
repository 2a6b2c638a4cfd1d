#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "rainsim/vec3.hpp"

namespace rainsim {

// Splash emission mechanisms around a rolling wheel.
enum class Mechanism : std::uint8_t { kBowWave = 0, kSideWave = 1, kTreadPickup = 2 };

struct VehicleState {
  Vec3 position;          // center of the wheel footprint, ground level
  double heading = 0.0;   // radians, yaw about +z
  double speed = 0.0;     // m/s, >= 0
  double wheelbase = 2.8;    // meters, front-to-rear axle
  double track_width = 1.6;  // meters, left-to-right wheel

  void validate() const;
};

// Wheel contact points in order FL, FR, RL, RR.
std::array<Vec3, 4> wheel_contact_points(const VehicleState& vehicle);

struct SplashConfig {
  double emission_rate = 200.0;  // particles / s / mechanism / wheel
  // Initial-speed scale per mechanism, indexed by Mechanism.
  std::array<double, 3> mechanism_gains = {0.35, 0.30, 0.40};
  double gravity = 9.81;          // m/s^2
  double drag_coefficient = 2.5;  // 1/s
  double wind_amplitude = 3.0;    // m/s^2
  double wind_frequency = 0.5;    // 1/m
  double duration = 1.0;          // s
  double dt = 0.01;               // s
  std::uint64_t seed = 0;

  void validate() const;
};

struct RainParticle {
  Vec3 position;
  Vec3 velocity;
  double birth_time = 0.0;
  Mechanism mechanism = Mechanism::kBowWave;
};

struct RainParticleSet {
  std::vector<RainParticle> particles;
  std::uint64_t seed = 0;

  std::size_t size() const { return particles.size(); }
};

// Emits round(emission_rate * dt * speed_factor) particles per wheel per
// mechanism at time t, where speed_factor = clamp(speed / 10, 0, 3). A
// stationary vehicle emits nothing. Deterministic in
// (vehicle, cfg.seed, t, vehicle_index).
std::vector<RainParticle> emit_splash(const VehicleState& vehicle, const SplashConfig& cfg,
                                      double t, std::size_t vehicle_index = 0);

// Semi-implicit Euler step: gravity, linear drag, and gradient-noise wind
// acceleration sampled at position * wind_frequency. Particles crossing
// below z = 0 are absorbed by the ground and removed.
std::vector<RainParticle> step_particles(std::vector<RainParticle> particles, double dt,
                                         const SplashConfig& cfg, double t);

// Runs the emit/step loop over [0, duration) and returns the particles alive
// at the end. Pure function of (vehicles, cfg) including the seed.
RainParticleSet simulate_splash(const std::vector<VehicleState>& vehicles,
                                const SplashConfig& cfg);

}  // namespace rainsim
