#include "rainsim/quadrature.hpp"

#include <stdexcept>

namespace rainsim {

double simpson_integrate(std::span<const double> samples, double h) {
  if (samples.size() < 3 || samples.size() % 2 == 0) {
    throw std::invalid_argument("simpson_integrate: sample count must be odd and >= 3");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("simpson_integrate: step must be > 0");
  }
  double odd_sum = 0.0;
  double even_sum = 0.0;
  const std::size_t last = samples.size() - 1;
  for (std::size_t i = 1; i < last; ++i) {
    (i % 2 == 1 ? odd_sum : even_sum) += samples[i];
  }
  return (h / 3.0) * (samples.front() + 4.0 * odd_sum + 2.0 * even_sum + samples.back());
}

}  // namespace rainsim
