#pragma once
#include <stdexcept>
#include <string>

#include "dipole/vec.hpp"

namespace dipole {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Field evaluated at the singular point with no cutoff.
struct SingularityError : Error {
  using Error::Error;
};

// Invalid configuration or arguments.
struct InputError : Error {
  using Error::Error;
};

// A stage velocity (or the combined step) came out non-finite.
struct StageFailure : Error {
  Vec stage_pos;
  StageFailure(const std::string& what, Vec p) : Error(what), stage_pos(p) {}
};

// The step controller stalled: either it demanded a step below the floor or
// rejected too many attempts in a row.
struct StepCollapse : Error {
  Vec position;
  double time;
  StepCollapse(const std::string& what, Vec p, double t)
      : Error(what), position(p), time(t) {}
};

// Analysis could not produce any estimate.
struct NoEstimate : Error {
  using Error::Error;
};

// Degenerate or non-convergent fit.
struct FitError : Error {
  using Error::Error;
};

}  // namespace dipole
