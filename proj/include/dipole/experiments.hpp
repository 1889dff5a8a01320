#pragma once
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dipole/analysis.hpp"
#include "dipole/sim.hpp"

namespace dipole {

enum class SweepParam { Moment, Steps, HalfWidth, Start };

const char* sweep_param_name(SweepParam p);         // "dh", "steps", "lf", "x0"
SweepParam sweep_param_from_name(const std::string& s);  // throws InputError

// Allowed sweep ranges. Moment in [5, 100], Steps in [2.5e4, 5e5],
// HalfWidth in [0.025, 0.5]; Start values must lie strictly inside the box.
void check_sweep_value(SweepParam p, double value, const SimConfig& base);

struct SweepSpec {
  SimConfig base;
  SweepParam param = SweepParam::Moment;
  std::vector<double> values;
  int depth = -1;  // box-count depth, < 0 selects the default
};

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;  // derived per-value seed actually used
  bool ok = false;
  std::string error;            // diagnostic when !ok
  double mean = 0.0;            // mean fractal dimension over gated trials
  std::optional<double> sigma;  // sample stddev
  int used = 0;
  int gate_failures = 0;
  int trials = 0;
};

struct SweepTable {
  SweepParam param = SweepParam::Moment;
  std::vector<SweepRow> rows;
};

// Per-value seed: a splitmix-style hash of the base seed, the parameter name
// and the value's bit pattern. Hashing the value (not its grid position)
// keeps each row's result independent of the rest of the grid, so permuting
// or subsetting the grid permutes or subsets rows without changing them.
std::uint64_t sweep_value_seed(std::uint64_t base_seed, SweepParam p,
                               double value);

// One fractal-dimension ensemble per grid value. A row that fails (for
// example every trial misses the regression gate) is recorded with ok=false
// and the sweep continues.
SweepTable run_sweep(const SweepSpec& spec, int workers = -1,
                     bool parallel = true);

struct CutoffRow {
  double value = 0.0;  // swept half-width
  SweepRow a;          // first cutoff
  SweepRow b;          // second cutoff
  double delta = 0.0;  // mean_a - mean_b when both ok
  std::optional<double> combined_sigma;  // sqrt(sigma_a^2 + sigma_b^2)
  bool within_one_sigma = false;         // |delta| <= combined sigma
};

struct CutoffTable {
  double cutoff_a = 0.0;
  double cutoff_b = 0.0;
  std::vector<CutoffRow> rows;
};

// Runs the half-width sweep once per cutoff with identical per-value seeds
// (common random numbers), pairing the rows for the insensitivity check.
CutoffTable run_cutoff_comparison(const SimConfig& base,
                                  const std::vector<double>& half_widths,
                                  double cutoff_a, double cutoff_b,
                                  int depth = -1, int workers = -1,
                                  bool parallel = true);

struct Preset {
  SimConfig config;
  std::string summary;
};

// Frozen named configurations for one-command reproduction runs.
const std::map<std::string, Preset>& presets();
const Preset& preset_or_throw(const std::string& name);  // InputError lists names

// Grid syntax: "lo:hi:linN" (N linearly spaced), "lo:hi:logN" (N
// log-spaced), or a comma list "v1,v2,v3".
std::vector<double> parse_grid(const std::string& text);

}  // namespace dipole
