#pragma once

#include <span>

namespace rainsim {

// Composite Simpson 1/3 estimate over equally spaced samples with step h.
// Requires an odd sample count >= 3 (an even number of panels); throws
// std::invalid_argument otherwise. Exact for polynomials of degree <= 3.
double simpson_integrate(std::span<const double> samples, double h);

}  // namespace rainsim
