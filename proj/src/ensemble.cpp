#include "dipole/ensemble.hpp"

#include <cstdlib>
#include <string>

namespace dipole {

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DIPOLE_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (...) {
    }
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace dipole
