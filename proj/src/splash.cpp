#include "rainsim/splash.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rainsim/errors.hpp"
#include "rainsim/perlin.hpp"
#include "rainsim/rng.hpp"

namespace rainsim {
namespace {

constexpr double kReferenceSpeed = 10.0;  // m/s mapped to speed_factor 1
constexpr double kMaxSpeedFactor = 3.0;
constexpr double kSpeedJitter = 0.2;

// Launch angles above horizontal per mechanism.
constexpr double kBowWaveAngle = 30.0 * std::numbers::pi / 180.0;
constexpr double kSideWaveAngle = 45.0 * std::numbers::pi / 180.0;
constexpr double kTreadPickupAngle = 60.0 * std::numbers::pi / 180.0;

// Wind axes draw from decorrelated tables.
constexpr std::uint64_t kWindSeedTag = 0x57494E44ULL;  // "WIND"

std::uint64_t stream_seed(std::uint64_t seed, std::size_t vehicle, std::size_t wheel,
                          std::size_t mechanism, std::int64_t step) {
  std::uint64_t s = hash_combine(seed, static_cast<std::uint64_t>(vehicle));
  s = hash_combine(s, static_cast<std::uint64_t>(wheel));
  s = hash_combine(s, static_cast<std::uint64_t>(mechanism));
  s = hash_combine(s, static_cast<std::uint64_t>(step));
  return s;
}

Vec3 launch_direction(Mechanism mechanism, const Vec3& forward, const Vec3& outward) {
  switch (mechanism) {
    case Mechanism::kBowWave:
      return forward * std::cos(kBowWaveAngle) + Vec3{0, 0, std::sin(kBowWaveAngle)};
    case Mechanism::kSideWave:
      return outward * std::cos(kSideWaveAngle) + Vec3{0, 0, std::sin(kSideWaveAngle)};
    case Mechanism::kTreadPickup:
      return forward * -std::cos(kTreadPickupAngle) + Vec3{0, 0, std::sin(kTreadPickupAngle)};
  }
  return {0, 0, 1};
}

}  // namespace

void VehicleState::validate() const {
  if (!(speed >= 0.0)) {
    throw ValidationError("vehicle: speed must be >= 0");
  }
  if (!(wheelbase > 0.0) || !(track_width > 0.0)) {
    throw ValidationError("vehicle: wheelbase and track_width must be > 0");
  }
}

void SplashConfig::validate() const {
  if (!(dt > 0.0)) {
    throw ValidationError("splash config: dt must be > 0");
  }
  if (!(duration >= dt)) {
    throw ValidationError("splash config: duration must be >= dt");
  }
  for (double gain : mechanism_gains) {
    if (!(gain >= 0.0)) {
      throw ValidationError("splash config: mechanism gains must be >= 0");
    }
  }
  if (!(emission_rate >= 0.0)) {
    throw ValidationError("splash config: emission_rate must be >= 0");
  }
}

std::array<Vec3, 4> wheel_contact_points(const VehicleState& vehicle) {
  const Vec3 forward{std::cos(vehicle.heading), std::sin(vehicle.heading), 0.0};
  const Vec3 left{-std::sin(vehicle.heading), std::cos(vehicle.heading), 0.0};
  const Vec3 half_wb = forward * (vehicle.wheelbase / 2.0);
  const Vec3 half_tw = left * (vehicle.track_width / 2.0);
  return {vehicle.position + half_wb + half_tw, vehicle.position + half_wb - half_tw,
          vehicle.position - half_wb + half_tw, vehicle.position - half_wb - half_tw};
}

std::vector<RainParticle> emit_splash(const VehicleState& vehicle, const SplashConfig& cfg,
                                      double t, std::size_t vehicle_index) {
  vehicle.validate();
  cfg.validate();

  const double speed_factor =
      std::clamp(vehicle.speed / kReferenceSpeed, 0.0, kMaxSpeedFactor);
  const auto count =
      static_cast<std::size_t>(std::lround(cfg.emission_rate * cfg.dt * speed_factor));
  if (count == 0) {
    return {};
  }

  const Vec3 forward{std::cos(vehicle.heading), std::sin(vehicle.heading), 0.0};
  const Vec3 left{-std::sin(vehicle.heading), std::cos(vehicle.heading), 0.0};
  const auto wheels = wheel_contact_points(vehicle);
  const auto step = static_cast<std::int64_t>(std::llround(t / cfg.dt));

  std::vector<RainParticle> out;
  out.reserve(count * wheels.size() * 3);
  for (std::size_t wheel = 0; wheel < wheels.size(); ++wheel) {
    const bool left_side = (wheel % 2 == 0);  // FL, RL
    const Vec3 outward = left_side ? left : left * -1.0;
    for (std::size_t mech = 0; mech < 3; ++mech) {
      const auto mechanism = static_cast<Mechanism>(mech);
      const Vec3 direction = launch_direction(mechanism, forward, outward);
      SplitMix64 rng(stream_seed(cfg.seed, vehicle_index, wheel, mech, step));
      for (std::size_t k = 0; k < count; ++k) {
        const double u = rng.uniform_symmetric();
        const double magnitude =
            cfg.mechanism_gains[mech] * vehicle.speed * (1.0 + kSpeedJitter * u);
        out.push_back(RainParticle{wheels[wheel], direction * magnitude, t, mechanism});
      }
    }
  }
  return out;
}

std::vector<RainParticle> step_particles(std::vector<RainParticle> particles, double dt,
                                         const SplashConfig& cfg, double /*t*/) {
  if (!(dt > 0.0)) {
    throw ValidationError("step_particles: dt must be > 0");
  }
  const Perlin3 wind_x(hash_combine(cfg.seed, kWindSeedTag + 0));
  const Perlin3 wind_y(hash_combine(cfg.seed, kWindSeedTag + 1));
  const Perlin3 wind_z(hash_combine(cfg.seed, kWindSeedTag + 2));

  for (RainParticle& p : particles) {
    Vec3 accel{0.0, 0.0, -cfg.gravity};
    accel += p.velocity * -cfg.drag_coefficient;
    if (cfg.wind_amplitude != 0.0) {
      const double sx = p.position.x * cfg.wind_frequency;
      const double sy = p.position.y * cfg.wind_frequency;
      const double sz = p.position.z * cfg.wind_frequency;
      accel += Vec3{wind_x(sx, sy, sz), wind_y(sx, sy, sz), wind_z(sx, sy, sz)} *
               cfg.wind_amplitude;
    }
    p.velocity += accel * dt;
    p.position += p.velocity * dt;
  }
  std::erase_if(particles, [](const RainParticle& p) { return p.position.z < 0.0; });
  return particles;
}

RainParticleSet simulate_splash(const std::vector<VehicleState>& vehicles,
                                const SplashConfig& cfg) {
  cfg.validate();
  const auto steps = static_cast<std::int64_t>(std::llround(cfg.duration / cfg.dt));

  std::vector<RainParticle> alive;
  for (std::int64_t step = 0; step < steps; ++step) {
    const double t = static_cast<double>(step) * cfg.dt;
    for (std::size_t v = 0; v < vehicles.size(); ++v) {
      auto emitted = emit_splash(vehicles[v], cfg, t, v);
      alive.insert(alive.end(), emitted.begin(), emitted.end());
    }
    alive = step_particles(std::move(alive), cfg.dt, cfg, t);
  }
  return RainParticleSet{std::move(alive), cfg.seed};
}

}  // namespace rainsim
