#pragma once
#include <vector>

#include "dipole/vec.hpp"

namespace dipole {

// Velocity field of a point dipole sitting at the origin,
//
//   V(x) = m / (r + dr)^D * (u - D * xhat * (xhat . u)),   r = |x|,
//
// where u is the unit moment direction. The optional cutoff dr regularizes
// the magnitude near the origin only; direction vectors always use the true
// radial unit vector. The field is incompressible away from the origin when
// dr == 0.
struct DipoleField {
  int dim = 3;          // 2 or 3
  double moment = 1.0;  // dipole strength
  double cutoff = 0.0;  // dr >= 0
};

Vec dipole_velocity(const DipoleField& f, Vec x, Vec moment_dir);

// Ideal potential flow driven by point sources and sinks, V = sum Q_i grad G.
// An antipodal +-Q pair converges to the dipole field as the separation
// shrinks at fixed pair moment.
struct PointSource {
  Vec pos;
  double strength = 0.0;  // volume flux, negative for a sink
};

struct SourceSet {
  int dim = 3;
  std::vector<PointSource> sources;
};

Vec multi_source_velocity(const SourceSet& s, Vec x);

// Central-difference divergence of the dipole field at x with spacing h.
double divergence_check(const DipoleField& f, Vec x, Vec moment_dir, double h);

}  // namespace dipole
