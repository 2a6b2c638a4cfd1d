#pragma once

#include <array>
#include <cstdint>

namespace rainsim {

// Classic 3D gradient noise with a seed-shuffled permutation table and
// unit-length gradients. Output is bounded by sqrt(3)/2 (so always within
// [-1, 1]) and is exactly 0 at integer lattice points.
class Perlin3 {
 public:
  explicit Perlin3(std::uint64_t seed);

  double operator()(double x, double y, double z) const;

 private:
  std::array<std::uint8_t, 512> perm_{};
};

// One-shot evaluation; builds the table per call. Prefer a Perlin3 instance
// in loops.
double perlin3(double x, double y, double z, std::uint64_t seed);

}  // namespace rainsim
