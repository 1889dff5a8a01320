#pragma once
#include <string>
#include <vector>

#include "dipole/analysis.hpp"
#include "dipole/experiments.hpp"
#include "dipole/sim.hpp"

namespace dipole {

// All floating point output goes through %.17g so values round-trip exactly.
std::string fmt17(double v);

std::string boundary_name(BoundaryMode m);
BoundaryMode boundary_from_name(const std::string& s);  // throws InputError

// CSV writers. Each creates/truncates the file and throws Error on I/O
// failure. Headers are one line, no quoting is ever needed.
void write_trajectory_csv(const std::string& path, const Trajectory& tr,
                          int dim);
void write_trials_csv(const std::string& path, const EnsembleStats& st);
void write_sweep_csv(const std::string& path, const SweepTable& t);
void write_cutoff_csv(const std::string& path, const CutoffTable& t);
void write_survival_csv(const std::string& path, const SurvivalCurve& sc);
void write_histogram_csv(const std::string& path, const Histogram& h);
void write_boxcount_csv(const std::string& path, const BoxCountResult& r);

// JSON documents (two-space indent, trailing newline).
std::string ensemble_summary_json(const EnsembleStats& st);
std::string survival_summary_json(const SurvivalCurve& sc);
std::string levy_summary_json(const LevyFit& fit);

// Config round-trip: flat JSON whose keys mirror the command-line flags
// (dim, dh, lf, steps, boundary, x0, dr, eps, dt0, dtmin, dtmax, seed,
// trials). Unknown keys are rejected.
std::string config_to_json(const SimConfig& cfg);
SimConfig config_from_json_text(const std::string& text);
// Applies only the keys present in the document, leaving the rest of cfg.
void apply_config_json(SimConfig& cfg, const std::string& text);
bool config_has_key(const std::string& text, const std::string& key);

// Run manifest: enough to replay the run bit for bit with the same build.
std::string run_manifest_json(const std::string& command, const SimConfig& cfg,
                              const std::vector<std::string>& outputs);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace dipole
