#pragma once

namespace rainsim {

// Rainy-atmosphere and sensor optics constants for the particle return
// intensity integral. Shipped defaults are plausible presets for moderate
// rain, not measured ground truth; calibrate per sensor.
struct AtmosphereParams {
  double alpha = 0.004;      // attenuation coefficient, 1/m
  double beta = 0.005;       // scattering rate, 1/m
  double beta0 = 1e-8;       // differential reflectance, dimensionless
  double tau_h = 1e-8;       // half-power pulse width, s
  double r1 = 0.9;           // near optical crossover, m
  double r2 = 1.0;           // far optical crossover, m
  double c = 2.99792458e8;   // speed of light, m/s

  void validate() const;
};

}  // namespace rainsim
