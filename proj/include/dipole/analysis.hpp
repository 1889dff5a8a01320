#pragma once
#include <cstddef>
#include <optional>
#include <vector>

#include "dipole/boxcount.hpp"
#include "dipole/sim.hpp"

namespace dipole {

struct TrialEstimate {
  int trial = 0;
  double dimension = 0.0;
  double r2 = 0.0;
  bool gate_passed = false;  // usable estimate (enough scales and r2 > 0.8)
};

struct EnsembleStats {
  std::vector<TrialEstimate> trials;
  double mean = 0.0;              // over gate-passing trials
  std::optional<double> sigma;    // sample stddev; empty with < 2 usable trials
  int used = 0;
  int gate_failures = 0;
};

// Runs cfg.trials independent trajectories (per-trial seed = seed xor trial
// index), box-counts each and averages the gated dimension estimates.
// depth < 0 selects the per-dimension default. Throws NoEstimate when every
// trial fails the gate.
EnsembleStats fractal_dimension_of_run(const SimConfig& cfg, int depth = -1,
                                       int workers = -1, bool parallel = true);

struct SurvivalCurve {
  std::vector<std::size_t> checkpoints;  // 0, 1, 2, 4, ..., <= steps
  std::vector<int> counts;               // particles still inside
  double lambda = 0.0;                   // decay rate per step
  double r2 = 1.0;                       // of the log-linear fit
};

// Absorbing-mode ensemble: counts survivors at power-of-two step checkpoints
// and fits ln(count) against the checkpoint index, starting at the last fully
// populated checkpoint so the pre-decay plateau does not flatten the slope.
// A curve that never decays reports lambda = 0 with R^2 = 1. Throws Error
// when no particle survives past the first checkpoint or the decay regime is
// a single point, and InputError unless the boundary mode is Absorbing.
SurvivalCurve survival_experiment(const SimConfig& cfg, int workers = -1,
                                  bool parallel = true);

struct Histogram {
  std::vector<double> edges;    // bins + 1, log-spaced
  std::vector<double> density;  // sum(density * width) == 1
  std::size_t samples = 0;      // positive step lengths binned
  bool degenerate = false;      // no positive displacement found
};

// Per-step displacement magnitudes. Under Periodic boundaries displacements
// use the minimum-image convention; steps that ended in a reset are
// excluded, as are exact zeros.
std::vector<double> step_lengths(const Trajectory& tr, const SimConfig& cfg);

// Log-spaced histogram of positive lengths, normalized to unit integral.
Histogram histogram_lengths(const std::vector<double>& lengths, int bins = 64);

Histogram step_length_histogram(const Trajectory& tr, const SimConfig& cfg,
                                int bins = 64);

struct LevyFit {
  double alpha = 0.0;   // tail exponent
  double mu = 0.0;      // location of the divergence
  double sigma = 0.0;   // exponential tilt rate
  double fit_from = 0.0;
  double fit_to = 0.0;
  double r2 = 0.0;
  bool levy_like = true;  // false when alpha leaves (0, 5]
};

// Fits ln p = ln C + (sigma/2)(x - mu) - (1 + alpha) ln(x - mu) over the
// tail bins right of the modal bin, scanning mu and solving the remaining
// linear problem. Needs >= 10 nonempty tail bins.
LevyFit fit_levy(const Histogram& h);

inline double df_from_alpha(double alpha) { return 1.0 / alpha; }

// Energy dissipation rate outside radius r for the randomly oriented dipole,
// averaged over orientations: closed form and independent numeric radial
// quadrature of the mean squared strain. The two agree to the quadrature
// tolerance for all parameters.
double dissipation_closed_form(int dim, double nu, double moment,
                               double half_width, double r);
double dissipation_numeric(int dim, double nu, double moment,
                           double half_width, double r,
                           double r_max_factor = 1e6, double rel_tol = 1e-8);

}  // namespace dipole
