#include "dipole/sampler.hpp"

#include <cmath>
#include <numbers>

namespace dipole {

Vec DirectionSampler::next_direction() {
  constexpr double pi = std::numbers::pi;
  if (dim_ == 2) {
    const double a = 2.0 * pi * next_uniform();
    return {std::cos(a), std::sin(a), 0.0};
  }
  const double c = 2.0 * next_uniform() - 1.0;
  const double phi = pi * next_uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const double sx = next_sign();
  const double sy = next_sign();
  return {sx * s * std::cos(phi), sy * s * std::sin(phi), c};
}

}  // namespace dipole
