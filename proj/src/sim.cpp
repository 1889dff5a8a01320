#include "dipole/sim.hpp"

#include <cmath>

#include "dipole/errors.hpp"

namespace dipole {

void validate(const SimConfig& cfg) {
  if (cfg.dim != 2 && cfg.dim != 3) throw InputError("dim must be 2 or 3");
  if (!(cfg.half_width > 0.0)) throw InputError("half_width must be positive");
  if (cfg.dim == 2 && cfg.start.z != 0.0)
    throw InputError("2D start position must have no third component");
  if (norm2(cfg.start) == 0.0) throw InputError("start must be off the origin");
  for (int c = 0; c < cfg.dim; ++c)
    if (std::abs(component(cfg.start, c)) >= cfg.half_width)
      throw InputError("start must lie strictly inside the box");
  if (cfg.cutoff < 0.0) throw InputError("cutoff must be non-negative");
  if (!(cfg.control.error_tol > 0.0)) throw InputError("error_tol must be positive");
  if (!(cfg.control.dt_min > 0.0) || cfg.control.dt_min > cfg.control.dt_init ||
      cfg.control.dt_init > cfg.control.dt_max)
    throw InputError("need 0 < dt_min <= dt_init <= dt_max");
  if (!(cfg.control.safety > 0.0) || cfg.control.safety > 1.0)
    throw InputError("safety must be in (0, 1]");
  if (cfg.control.max_rejects < 1) throw InputError("max_rejects must be >= 1");
  if (cfg.trials < 1) throw InputError("trials must be >= 1");
}

double levy_flight_condition(double moment, double dt, double half_width, int dim) {
  return moment * dt / std::pow(2.0 * half_width, dim + 1);
}

StepOutcome step_once(const SimConfig& cfg, Vec x, double t, Vec moment_dir,
                      double dt_try) {
  const DipoleField f{cfg.dim, cfg.moment, cfg.cutoff};
  if (norm2(x) == 0.0 && cfg.cutoff == 0.0) x += 1e-12 * moment_dir;
  auto rhs = [&f, moment_dir](Vec p, double) {
    if (norm2(p) == 0.0 && f.cutoff == 0.0) p += 1e-12 * moment_dir;
    return dipole_velocity(f, p, moment_dir);
  };
  const AdvanceResult r = advance_one_step(rhs, x, t, dt_try, cfg.control);
  return {r.x, r.t, r.dt_used, r.dt_next};
}

BoundaryOutcome apply_boundary(const SimConfig& cfg, Vec x) {
  const double L = cfg.half_width;
  switch (cfg.boundary) {
    case BoundaryMode::Periodic: {
      Vec y = x;
      bool moved = false;
      for (int c = 0; c < cfg.dim; ++c) {
        const double v = component(y, c);
        const double w = v - 2.0 * L * std::floor((v + L) / (2.0 * L));
        if (w != v) {
          set_component(y, c, w);
          moved = true;
        }
      }
      if (moved) return {y, EventKind::Wrap};
      return {y, std::nullopt};
    }
    case BoundaryMode::Reset:
      for (int c = 0; c < cfg.dim; ++c)
        if (std::abs(component(x, c)) > L) return {cfg.start, EventKind::Reset};
      return {x, std::nullopt};
    case BoundaryMode::Absorbing:
      for (int c = 0; c < cfg.dim; ++c)
        if (std::abs(component(x, c)) > L) return {x, EventKind::Absorbed};
      return {x, std::nullopt};
  }
  return {x, std::nullopt};
}

Trajectory simulate_trajectory(const SimConfig& cfg, DirectionSource next_dir) {
  validate(cfg);
  Trajectory tr;
  tr.times.reserve(cfg.steps + 1);
  tr.positions.reserve(cfg.steps + 1);
  Vec x = cfg.start;
  double t = 0.0;
  tr.times.push_back(t);
  tr.positions.push_back(x);
  double dt_try = cfg.control.dt_init;
  for (std::size_t i = 1; i <= cfg.steps; ++i) {
    const Vec u = next_dir();
    StepOutcome out;
    try {
      out = step_once(cfg, x, t, u, dt_try);
    } catch (const StepCollapse&) {
      tr.status = TrajStatus::Truncated;
      return tr;
    }
    dt_try = out.dt_next;
    t = out.t;
    const BoundaryOutcome b = apply_boundary(cfg, out.position);
    x = b.position;
    tr.times.push_back(t);
    tr.positions.push_back(x);
    tr.steps_taken = i;
    if (b.event) {
      tr.events.push_back({i, *b.event});
      if (*b.event == EventKind::Absorbed) {
        tr.status = TrajStatus::Absorbed;
        return tr;
      }
    }
  }
  tr.status = TrajStatus::Completed;
  return tr;
}

Trajectory simulate_trajectory(const SimConfig& cfg) {
  DirectionSampler sampler(cfg.dim, cfg.seed);
  return simulate_trajectory(cfg, [&sampler] { return sampler.next_direction(); });
}

}  // namespace dipole
