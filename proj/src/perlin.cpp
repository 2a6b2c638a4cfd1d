#include "rainsim/perlin.hpp"

#include <cmath>

#include "rainsim/rng.hpp"

namespace rainsim {
namespace {

// 12 cube-edge directions normalized to unit length.
constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kGrad[12][3] = {
    {kInvSqrt2, kInvSqrt2, 0},  {-kInvSqrt2, kInvSqrt2, 0},  {kInvSqrt2, -kInvSqrt2, 0},
    {-kInvSqrt2, -kInvSqrt2, 0}, {kInvSqrt2, 0, kInvSqrt2},  {-kInvSqrt2, 0, kInvSqrt2},
    {kInvSqrt2, 0, -kInvSqrt2},  {-kInvSqrt2, 0, -kInvSqrt2}, {0, kInvSqrt2, kInvSqrt2},
    {0, -kInvSqrt2, kInvSqrt2},  {0, kInvSqrt2, -kInvSqrt2},  {0, -kInvSqrt2, -kInvSqrt2}};

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double lerp(double a, double b, double t) { return a + t * (b - a); }

double grad_dot(std::uint8_t hash, double x, double y, double z) {
  const double* g = kGrad[hash % 12];
  return g[0] * x + g[1] * y + g[2] * z;
}

}  // namespace

Perlin3::Perlin3(std::uint64_t seed) {
  for (int i = 0; i < 256; ++i) {
    perm_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  }
  // Fisher-Yates with an explicit generator; std::shuffle is not
  // reproducible across standard libraries.
  SplitMix64 rng(seed);
  for (int i = 255; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.next() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm_[static_cast<std::size_t>(i)], perm_[j]);
  }
  for (std::size_t i = 0; i < 256; ++i) {
    perm_[256 + i] = perm_[i];
  }
}

double Perlin3::operator()(double x, double y, double z) const {
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double fz = std::floor(z);
  const auto xi = static_cast<std::size_t>(static_cast<std::int64_t>(fx) & 255);
  const auto yi = static_cast<std::size_t>(static_cast<std::int64_t>(fy) & 255);
  const auto zi = static_cast<std::size_t>(static_cast<std::int64_t>(fz) & 255);
  const double xf = x - fx;
  const double yf = y - fy;
  const double zf = z - fz;

  const double u = fade(xf);
  const double v = fade(yf);
  const double w = fade(zf);

  const std::uint8_t a = perm_[xi];
  const std::uint8_t b = perm_[xi + 1];
  const std::uint8_t aa = perm_[a + yi];
  const std::uint8_t ab = perm_[a + yi + 1];
  const std::uint8_t ba = perm_[b + yi];
  const std::uint8_t bb = perm_[b + yi + 1];

  const double n000 = grad_dot(perm_[aa + zi], xf, yf, zf);
  const double n100 = grad_dot(perm_[ba + zi], xf - 1, yf, zf);
  const double n010 = grad_dot(perm_[ab + zi], xf, yf - 1, zf);
  const double n110 = grad_dot(perm_[bb + zi], xf - 1, yf - 1, zf);
  const double n001 = grad_dot(perm_[aa + zi + 1], xf, yf, zf - 1);
  const double n101 = grad_dot(perm_[ba + zi + 1], xf - 1, yf, zf - 1);
  const double n011 = grad_dot(perm_[ab + zi + 1], xf, yf - 1, zf - 1);
  const double n111 = grad_dot(perm_[bb + zi + 1], xf - 1, yf - 1, zf - 1);

  const double x00 = lerp(n000, n100, u);
  const double x10 = lerp(n010, n110, u);
  const double x01 = lerp(n001, n101, u);
  const double x11 = lerp(n011, n111, u);
  const double y0 = lerp(x00, x10, v);
  const double y1 = lerp(x01, x11, v);
  return lerp(y0, y1, w);
}

double perlin3(double x, double y, double z, std::uint64_t seed) {
  return Perlin3(seed)(x, y, z);
}

}  // namespace rainsim
