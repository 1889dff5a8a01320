#pragma once
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "dipole/field.hpp"
#include "dipole/rkf45.hpp"
#include "dipole/sampler.hpp"

namespace dipole {

enum class BoundaryMode { Periodic, Reset, Absorbing };

enum class EventKind { Wrap, Reset, Absorbed };

struct TrajEvent {
  std::size_t step;  // 1-based step index the event occurred on
  EventKind kind;
};

enum class TrajStatus { Completed, Absorbed, Truncated };

struct SimConfig {
  int dim = 3;
  double moment = 60.0;        // dipole strength
  double half_width = 0.1;     // box half-width L
  Vec start{-0.02, 0.0, 0.0};  // initial position
  std::size_t steps = 100000;  // number of direction samples / adaptive steps
  BoundaryMode boundary = BoundaryMode::Periodic;
  double cutoff = 0.0;
  StepControl control{};
  std::uint64_t seed = 0;
  int trials = 150;  // ensemble size
};

void validate(const SimConfig& cfg);  // throws InputError

// Trajectory of one particle. One sample per accepted step plus the initial
// state: steps + 1 samples for completed runs, fewer when absorbed or
// truncated by a step collapse. Times are non-decreasing; near the origin
// accepted steps can be smaller than the resolution of t, so consecutive
// times may coincide.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> positions;
  std::vector<TrajEvent> events;
  TrajStatus status = TrajStatus::Completed;
  std::size_t steps_taken = 0;
};

// Flight-dominance parameter m * dt / (2 L)^(D+1); values >> 1 mean a single
// step near the box scale overshoots the box.
double levy_flight_condition(double moment, double dt, double half_width, int dim);

struct StepOutcome {
  Vec position;    // before boundary processing
  double t;        // time after the step
  double dt_used;  // accepted step size
  double dt_next;  // controller proposal for the next step
};

// One accepted adaptive step with the moment direction held fixed across all
// six stages. A particle sitting exactly on the origin (with no cutoff) is
// nudged 1e-12 along the current direction before evaluating.
StepOutcome step_once(const SimConfig& cfg, Vec x, double t, Vec moment_dir,
                      double dt_try);

struct BoundaryOutcome {
  Vec position;
  std::optional<EventKind> event;
};

// Applies the configured boundary once: Periodic wraps every coordinate into
// [-L, L), Reset returns the particle to the start when any coordinate
// leaves [-L, L], Absorbing flags termination instead.
BoundaryOutcome apply_boundary(const SimConfig& cfg, Vec x);

using DirectionSource = std::function<Vec()>;

// Full run: per step draw a direction, take one accepted adaptive step, then
// apply the boundary. A step collapse truncates the trajectory (recorded in
// status) rather than failing the run.
Trajectory simulate_trajectory(const SimConfig& cfg);
Trajectory simulate_trajectory(const SimConfig& cfg, DirectionSource next_dir);

}  // namespace dipole
