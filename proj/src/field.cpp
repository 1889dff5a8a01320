#include "dipole/field.hpp"

#include <cmath>
#include <numbers>

#include "dipole/errors.hpp"

namespace dipole {

namespace {

constexpr double pi = std::numbers::pi;

// Accept |u| within 1e-12 of unit, renormalize quietly within 1e-6, reject
// anything farther off. Comparisons are done on |u|^2 to skip the sqrt.
Vec checked_unit(Vec u) {
  const double n2 = norm2(u);
  if (std::abs(n2 - 1.0) <= 2e-12) return u;
  if (std::abs(n2 - 1.0) <= 2e-6) return (1.0 / std::sqrt(n2)) * u;
  throw InputError("moment direction is not a unit vector");
}

}  // namespace

Vec dipole_velocity(const DipoleField& f, Vec x, Vec moment_dir) {
  const Vec u = checked_unit(moment_dir);
  const double r2 = norm2(x);
  if (r2 == 0.0 && f.cutoff == 0.0)
    throw SingularityError("dipole field evaluated at the origin with no cutoff");
  const double r = std::sqrt(r2);
  const double rd = r + f.cutoff;
  const double amp = f.moment / (f.dim == 2 ? rd * rd : rd * rd * rd);
  if (r == 0.0) return amp * u;  // cutoff active, radial direction degenerate
  const Vec xhat = (1.0 / r) * x;
  return amp * (u - (f.dim * dot(xhat, u)) * xhat);
}

Vec multi_source_velocity(const SourceSet& s, Vec x) {
  Vec v{};
  for (const PointSource& src : s.sources) {
    const Vec y = x - src.pos;
    const double r2 = norm2(y);
    if (r2 == 0.0) throw SingularityError("field evaluated on a point source");
    if (s.dim == 2) {
      v += (src.strength / (2.0 * pi * r2)) * y;
    } else {
      const double r = std::sqrt(r2);
      v += (src.strength / (4.0 * pi * r2 * r)) * y;
    }
  }
  return v;
}

double divergence_check(const DipoleField& f, Vec x, Vec moment_dir, double h) {
  if (h <= 0.0) throw InputError("divergence spacing must be positive");
  double div = 0.0;
  for (int c = 0; c < f.dim; ++c) {
    Vec xp = x, xm = x;
    set_component(xp, c, component(x, c) + h);
    set_component(xm, c, component(x, c) - h);
    div += (component(dipole_velocity(f, xp, moment_dir), c) -
            component(dipole_velocity(f, xm, moment_dir), c)) /
           (2.0 * h);
  }
  return div;
}

}  // namespace dipole
