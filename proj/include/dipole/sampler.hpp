#pragma once
#include <cstdint>
#include <random>

#include "dipole/vec.hpp"

namespace dipole {

// Isotropic unit-direction sampler.
//
// The generator identity is frozen: std::mt19937_64 seeded directly with the
// 64-bit seed, uniforms taken as (word >> 11) * 2^-53 in [0, 1). Golden data
// in the tests depends on this exact stream; changing it is a breaking
// change. Parallel ensembles give every trial its own sampler, so no
// splitting or jump-ahead is needed.
class DirectionSampler {
 public:
  DirectionSampler(int dim, std::uint64_t seed) : dim_(dim), eng_(seed) {}

  int dim() const { return dim_; }

  // Uniform on [0, 1).
  double next_uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Fair +-1 branch; + when the underlying draw falls in [0, 0.5).
  double next_sign() { return next_uniform() < 0.5 ? 1.0 : -1.0; }

  // 3D: cos(theta) uniform on [-1, 1], phi uniform on [0, pi], then
  // independent sign branches on the x and y components (draw order:
  // cos(theta), phi, sign_x, sign_y). 2D: a single angle uniform on [0, 2pi).
  Vec next_direction();

 private:
  int dim_;
  std::mt19937_64 eng_;
};

}  // namespace dipole
