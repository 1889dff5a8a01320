#include "dipole/rkf45.hpp"

namespace dipole {

AdaptResult adapt_dt(double local_error, double dt, const StepControl& ctl) {
  // Per-step error target: accept when |x5 - x4| < error_tol. The update
  // rule's fixed point then sits at local_error = safety^5 * error_tol,
  // strictly inside the acceptance region, so the controller always
  // terminates. (Targeting error_tol * dt instead would chase a fixed point
  // the acceptance test can never reach at small dt and the controller
  // would stall near the field singularity.) A step already at the dt floor
  // is accepted as-is: refinement is exhausted, and the resulting oversized
  // displacement is the mechanism that throws the particle back out of the
  // singular region.
  const bool accepted = local_error < ctl.error_tol || dt <= ctl.dt_min;
  const double le = std::max(local_error, 1e-300);  // avoid division by zero
  const double next = std::clamp(ctl.safety * dt * std::pow(ctl.error_tol / le, 0.2),
                                 ctl.dt_min, ctl.dt_max);
  return {accepted, next};
}

}  // namespace dipole
