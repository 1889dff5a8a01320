#pragma once
#include <algorithm>
#include <cmath>

#include "dipole/errors.hpp"
#include "dipole/vec.hpp"

namespace dipole {

// Fehlberg 4(5) embedded pair, exact tableau rationals. The fourth-order
// solution is propagated; the fifth-order one only feeds the error estimate.
namespace rkf {
inline constexpr double c2 = 1.0 / 4.0;
inline constexpr double c3 = 3.0 / 8.0;
inline constexpr double c4 = 12.0 / 13.0;
inline constexpr double c5 = 1.0;
inline constexpr double c6 = 1.0 / 2.0;

inline constexpr double a21 = 1.0 / 4.0;
inline constexpr double a31 = 3.0 / 32.0, a32 = 9.0 / 32.0;
inline constexpr double a41 = 1932.0 / 2197.0, a42 = -7200.0 / 2197.0,
                        a43 = 7296.0 / 2197.0;
inline constexpr double a51 = 439.0 / 216.0, a52 = -8.0, a53 = 3680.0 / 513.0,
                        a54 = -845.0 / 4104.0;
inline constexpr double a61 = -8.0 / 27.0, a62 = 2.0, a63 = -3544.0 / 2565.0,
                        a64 = 1859.0 / 4104.0, a65 = -11.0 / 40.0;

// fourth-order weights
inline constexpr double b1 = 25.0 / 216.0, b3 = 1408.0 / 2565.0,
                        b4 = 2197.0 / 4104.0, b5 = -1.0 / 5.0;
// fifth-order weights
inline constexpr double e1 = 16.0 / 135.0, e3 = 6656.0 / 12825.0,
                        e4 = 28561.0 / 56430.0, e5 = -9.0 / 50.0,
                        e6 = 2.0 / 55.0;
}  // namespace rkf

struct StepPair {
  Vec fourth;  // propagated solution
  Vec fifth;   // error estimator
};

// One raw embedded step of size dt from (x, t). f(x, t) must return finite
// velocities at all six stage points or a StageFailure is thrown carrying the
// offending position.
template <typename F>
StepPair rkf_step(F&& f, Vec x, double t, double dt) {
  using namespace rkf;
  const Vec k1 = f(x, t);
  if (!all_finite(k1)) throw StageFailure("non-finite stage velocity", x);

  const Vec z2 = x + dt * (a21 * k1);
  const Vec k2 = f(z2, t + c2 * dt);
  if (!all_finite(k2)) throw StageFailure("non-finite stage velocity", z2);

  const Vec z3 = x + dt * (a31 * k1 + a32 * k2);
  const Vec k3 = f(z3, t + c3 * dt);
  if (!all_finite(k3)) throw StageFailure("non-finite stage velocity", z3);

  const Vec z4 = x + dt * (a41 * k1 + a42 * k2 + a43 * k3);
  const Vec k4 = f(z4, t + c4 * dt);
  if (!all_finite(k4)) throw StageFailure("non-finite stage velocity", z4);

  const Vec z5 = x + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
  const Vec k5 = f(z5, t + c5 * dt);
  if (!all_finite(k5)) throw StageFailure("non-finite stage velocity", z5);

  const Vec z6 = x + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
  const Vec k6 = f(z6, t + c6 * dt);
  if (!all_finite(k6)) throw StageFailure("non-finite stage velocity", z6);

  StepPair p;
  p.fourth = x + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5);
  p.fifth = x + dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6);
  if (!all_finite(p.fourth) || !all_finite(p.fifth))
    throw StageFailure("non-finite step result", x);
  return p;
}

struct StepControl {
  double error_tol = 1e-4;  // per-step target: accept when |x5 - x4| < this
  double dt_init = 0.01;
  // Floor of the step ladder. Near the field singularity the resolved step
  // time falls without bound, so the floor sets how hard the forced step
  // kicks the particle back out; 1e-10 reproduces the published dimension
  // plateaus in both box protocols and both spatial dimensions.
  double dt_min = 1e-10;
  double dt_max = 0.01;
  double safety = 0.8;
  int max_rejects = 50;
};

struct AdaptResult {
  bool accepted;
  double dt_next;
};

// Accepts when local_error < error_tol, or unconditionally once dt has hit
// dt_min (the controller cannot refine further; near the field singularity
// this floor is what kicks the particle off instead of stalling). Proposes
// dt_next = safety * dt * (error_tol / local_error)^(1/5), clamped to
// [dt_min, dt_max].
AdaptResult adapt_dt(double local_error, double dt, const StepControl& ctl);

struct AdvanceResult {
  Vec x;
  double t;
  double dt_used;
  double dt_next;
  int rejects;
  double local_error;
};

// One accepted step under the controller, retrying with shrunken dt after
// rejections or non-finite stages. Throws StepCollapse when stages stay
// non-finite at the dt floor or rejections exceed the cap.
template <typename F>
AdvanceResult advance_one_step(F&& f, Vec x, double t, double dt_try,
                               const StepControl& ctl) {
  double dt = std::clamp(dt_try, ctl.dt_min, ctl.dt_max);
  int rejects = 0;
  for (;;) {
    bool stage_ok = true;
    StepPair p;
    try {
      p = rkf_step(f, x, t, dt);
    } catch (const StageFailure&) {
      stage_ok = false;
    }
    if (stage_ok) {
      const AdaptResult a = adapt_dt(norm(p.fourth - p.fifth), dt, ctl);
      if (a.accepted)
        return {p.fourth, t + dt, dt, a.dt_next, rejects,
                norm(p.fourth - p.fifth)};
      dt = a.dt_next;
    } else {
      // No usable error estimate through a non-finite stage; shrink hard.
      if (dt <= ctl.dt_min)
        throw StepCollapse("non-finite stages at the smallest step size", x, t);
      dt = std::max(dt * 0.1, ctl.dt_min);
    }
    if (++rejects > ctl.max_rejects)
      throw StepCollapse("too many consecutive step rejections", x, t);
  }
}

}  // namespace dipole
