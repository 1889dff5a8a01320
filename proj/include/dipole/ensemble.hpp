#pragma once
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dipole {

// Worker count for the parallel kernels: an explicit request wins, then the
// DIPOLE_WORKERS environment variable, then the hardware default.
int resolve_workers(int requested);

// Runs fn(0), ..., fn(count-1) and collects the results by index. The OpenMP
// kernel and the serial reference produce identical vectors because every
// result depends only on its index, never on scheduling. The serial path is
// kept as the comparison baseline for tests and the benchmark.
template <typename T, typename Fn>
std::vector<T> run_indexed(int count, int workers, Fn&& fn,
                           bool parallel = true) {
  std::vector<T> out(static_cast<std::size_t>(count));
#ifdef _OPENMP
  if (parallel) {
    std::exception_ptr err = nullptr;
    const int w = resolve_workers(workers);
#pragma omp parallel for schedule(dynamic) num_threads(w)
    for (int i = 0; i < count; ++i) {
      try {
        out[i] = fn(i);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    return out;
  }
#else
  (void)workers;
  (void)parallel;
#endif
  for (int i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

}  // namespace dipole
