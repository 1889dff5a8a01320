// Embedded Fehlberg 4(5) pair: tableau identities, closed-form oracles,
// polynomial exactness, the acceptance controller, and the convergence
// order of both weight sets.

#include <cmath>
#include <string>
#include <vector>

#include "dipole/rkf45.hpp"
#include "support.hpp"

using namespace dipole;
using namespace testsup;

namespace {

void tableau() {
  using namespace rkf;
  check(a21 == 0.25 && c2 == 0.25, "stage 2 row sum");
  check_close(a31 + a32, c3, 1e-16, "stage 3 row sum");
  check_close(a41 + a42 + a43, c4, 1e-15, "stage 4 row sum");
  check_close(a51 + a52 + a53 + a54, c5, 1e-15, "stage 5 row sum");
  check_close(a61 + a62 + a63 + a64 + a65, c6, 1e-15, "stage 6 row sum");
  check_close(b1 + b3 + b4 + b5, 1.0, 1e-15, "fourth-order weights sum to 1");
  check_close(e1 + e3 + e4 + e5 + e6, 1.0, 1e-15, "fifth-order weights sum to 1");
  // spot values pinned as exact rationals
  check(a41 == 1932.0 / 2197.0 && a42 == -7200.0 / 2197.0 &&
            a43 == 7296.0 / 2197.0,
        "stage 4 couplings");
  check(b1 == 25.0 / 216.0 && e1 == 16.0 / 135.0 && e6 == 2.0 / 55.0,
        "propagated and estimator weights");
}

void single_steps() {
  // zero field: both solutions stay put
  auto zero = [](Vec, double) { return Vec{}; };
  const StepPair p0 = rkf_step(zero, {0.3, -0.2, 0.7}, 0.0, 0.01);
  check(p0.fourth.x == 0.3 && p0.fourth.y == -0.2 && p0.fourth.z == 0.7 &&
            p0.fifth.x == 0.3,
        "zero field leaves the state unchanged");

  // exponential decay, one step of 0.1 from 1
  auto decay = [](Vec x, double) { return -1.0 * x; };
  const StepPair p1 = rkf_step(decay, {1, 0, 0}, 0.0, 0.1);
  check_close(p1.fourth.x, std::exp(-0.1), 1e-7, "one decay step, 4th order");
  // the embedded gap here is exactly 1.33013e-8, close to the 4th-order
  // truncation error 1.42e-8 it stands in for
  check_in(std::abs(p1.fifth.x - p1.fourth.x), 1e-8, 2e-8,
           "embedded gap tracks the 4th-order truncation error");

  // dx/dt = t^4 is integrated exactly by the fifth-order weights
  auto quartic = [](Vec, double t) { return Vec{t * t * t * t, 0, 0}; };
  const StepPair p2 = rkf_step(quartic, {}, 0.0, 1.0);
  check_close(p2.fifth.x, 0.2, 1e-14, "quartic in t, 5th order exact");
  check(std::abs(p2.fourth.x - 0.2) > 1e-14,
        "quartic in t separates the embedded orders");

  // a non-finite stage velocity raises StageFailure with the stage position
  auto blows = [](Vec x, double) {
    return x.x > 1.001 ? Vec{std::nan(""), 0, 0} : Vec{1, 0, 0};
  };
  bool threw = false;
  try {
    rkf_step(blows, {1, 0, 0}, 0.0, 0.1);
  } catch (const StageFailure& e) {
    threw = e.stage_pos.x > 1.0;
  }
  check(threw, "stage failure carries the offending position");
}

void controller() {
  const StepControl ctl{};  // frozen defaults
  check(ctl.error_tol == 1e-4 && ctl.dt_init == 0.01 && ctl.dt_min == 1e-10 &&
            ctl.dt_max == 0.01 && ctl.safety == 0.8,
        "frozen controller defaults");

  // an exact step is accepted and the proposal grows to the cap
  const AdaptResult a0 = adapt_dt(0.0, 0.01, ctl);
  check(a0.accepted && a0.dt_next == ctl.dt_max, "zero error accepts at the cap");

  // error above the target rejects and shrinks by 0.8 * 10^(-1/5)
  const AdaptResult a1 = adapt_dt(10.0 * ctl.error_tol, 0.01, ctl);
  check(!a1.accepted, "tenfold error rejects");
  check_rel(a1.dt_next, 0.8 * 0.01 * std::pow(0.1, 0.2), 1e-12,
            "rejection shrink factor");

  // error below the target accepts and still follows the update rule
  const double le = ctl.error_tol / std::sqrt(2.0);
  const AdaptResult a2 = adapt_dt(le, 0.005, ctl);
  check(a2.accepted, "sub-target error accepts");
  check_rel(a2.dt_next, 0.8 * 0.005 * std::pow(std::sqrt(2.0), 0.2), 1e-12,
            "acceptance growth factor");

  // at the floor the step is accepted regardless of the error
  const AdaptResult a3 = adapt_dt(1.0, ctl.dt_min, ctl);
  check(a3.accepted && a3.dt_next == ctl.dt_min, "floor step is forced through");

  // proposal decreases monotonically with the error
  double prev = 1e9;
  bool mono = true;
  for (double e = 1e-8; e < 1e2; e *= 10) {
    const double next = adapt_dt(e, 0.005, ctl).dt_next;
    if (next > prev) mono = false;
    prev = next;
  }
  check(mono, "proposal monotone in the error");
}

void advance() {
  const StepControl ctl{};
  // stages beyond a time barrier blow up; the controller must shrink past it
  auto barrier = [](Vec x, double t) {
    return t > 0.0005 ? Vec{std::nan(""), 0, 0} : -1.0 * x;
  };
  const AdvanceResult r = advance_one_step(barrier, {1, 0, 0}, 0.0, 0.01, ctl);
  check(r.dt_used <= 0.0005 && r.rejects >= 1 && std::isfinite(r.x.x),
        "recovers from non-finite stages by shrinking");

  // permanently non-finite stages collapse at the floor
  auto nan_field = [](Vec, double) { return Vec{std::nan(""), 0, 0}; };
  bool collapsed = false;
  try {
    advance_one_step(nan_field, {1, 0, 0}, 0.0, 0.01, ctl);
  } catch (const StepCollapse& e) {
    collapsed = e.position.x == 1.0 && e.time == 0.0;
  }
  check(collapsed, "collapse at the dt floor keeps the failure state");

  // every accepted step on a smooth problem meets the error target
  auto decay = [](Vec x, double) { return -1.0 * x; };
  Vec x{1, 0, 0};
  double t = 0.0, dt = ctl.dt_init;
  bool bounded = true;
  for (int i = 0; i < 1000; ++i) {
    const AdvanceResult s = advance_one_step(decay, x, t, dt, ctl);
    if (!(s.local_error < ctl.error_tol)) bounded = false;
    x = s.x;
    t = s.t;
    dt = s.dt_next;
  }
  check(bounded, "accepted steps stay under the error target");
}

// Fixed-step global error at t = 1 for dx/dt = -x, x(0) = 1.
double global_error(double dt, bool fifth) {
  auto decay = [](Vec x, double) { return -1.0 * x; };
  Vec x{1, 0, 0};
  double t = 0.0;
  const int n = int(std::round(1.0 / dt));
  for (int i = 0; i < n; ++i) {
    const StepPair p = rkf_step(decay, x, t, dt);
    x = fifth ? p.fifth : p.fourth;
    t += dt;
  }
  return std::abs(x.x - std::exp(-1.0));
}

void convergence_order() {
  const double dts[3] = {0.1, 0.05, 0.025};
  double e4[3], e5[3];
  for (int i = 0; i < 3; ++i) {
    e4[i] = global_error(dts[i], false);
    e5[i] = global_error(dts[i], true);
  }
  for (int i = 0; i + 1 < 3; ++i) {
    check_in(e4[i] / e4[i + 1], 16.0 / 1.5, 16.0 * 1.5,
             "4th-order halving ratio near 16, step " + std::to_string(i));
    check_in(e5[i] / e5[i + 1], 32.0 / 2.0, 32.0 * 2.0,
             "5th-order halving ratio near 32, step " + std::to_string(i));
  }
}

}  // namespace

int main() {
  tableau();
  single_steps();
  controller();
  advance();
  convergence_order();
  return finish("rkf45");
}
