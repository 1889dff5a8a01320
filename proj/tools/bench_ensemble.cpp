#include <chrono>
#include <cstdlib>
#include <iostream>

#include "dipole/analysis.hpp"
#include "dipole/experiments.hpp"

// Times the OpenMP ensemble kernel against the serial reference on a reduced
// preset and checks they produce identical estimates.

int main(int argc, char** argv) {
  using namespace dipole;
  using clock = std::chrono::steady_clock;

  SimConfig cfg = preset_or_throw("fig3-cond1-3d").config;
  cfg.trials = argc > 1 ? std::atoi(argv[1]) : 16;
  cfg.steps = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 20000;
  cfg.seed = 1;

  const auto t0 = clock::now();
  const EnsembleStats serial = fractal_dimension_of_run(cfg, -1, -1, false);
  const auto t1 = clock::now();
  const EnsembleStats parallel = fractal_dimension_of_run(cfg, -1, -1, true);
  const auto t2 = clock::now();

  const double ts = std::chrono::duration<double>(t1 - t0).count();
  const double tp = std::chrono::duration<double>(t2 - t1).count();

  bool same = serial.trials.size() == parallel.trials.size();
  for (std::size_t i = 0; same && i < serial.trials.size(); ++i)
    same = serial.trials[i].dimension == parallel.trials[i].dimension &&
           serial.trials[i].r2 == parallel.trials[i].r2;

  std::cout << "trials " << cfg.trials << ", steps " << cfg.steps << "\n"
            << "serial reference: " << ts << " s\n"
            << "openmp kernel:    " << tp << " s\n"
            << "speedup:          " << (tp > 0 ? ts / tp : 0.0) << "x\n"
            << "identical output: " << (same ? "yes" : "NO") << "\n";
  return same ? 0 : 1;
}
