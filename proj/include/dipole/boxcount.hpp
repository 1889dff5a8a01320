#pragma once
#include <cstddef>
#include <vector>

#include "dipole/vec.hpp"

namespace dipole {

// Occupied-cell counts on nested dyadic grids over [-L, L]^dim. Scale k uses
// cells of edge 2L / 2^k for k = 0..depth; cells are half-open with the top
// face closed, and only occupied cells are stored, so memory scales with the
// number of points. Throws InputError when a point falls outside the box or
// depth is out of [1, 20].
std::vector<std::size_t> box_count(const std::vector<Vec>& pts, double L,
                                   int depth, int dim);

// Edge lengths matching box_count's scales.
std::vector<double> box_scales(double L, int depth);

struct BoxCountResult {
  std::vector<double> scales;
  std::vector<std::size_t> counts;
  std::vector<int> retained;  // scale indices used in the regression
  double dimension = 0.0;     // slope of ln n against ln(1/scale)
  double r2 = 0.0;
  double slope_stderr = 0.0;
  bool gate_passed = false;  // r2 > 0.8
};

// Least squares of ln n against ln(1/scale) over the scales that pass the
// retention rule: count >= min_count and count <= saturation * n_points.
// The upper cap drops scales where the count is pinned to the sample size
// (nearly every point in its own cell) and so carries no scaling signal;
// without it a finite sample drags the slope toward zero at fine scales.
// Throws NoEstimate when fewer than three scales survive. A weak fit
// (r2 <= 0.8) is reported through gate_passed, not an exception.
BoxCountResult regress_dimension(const std::vector<double>& scales,
                                 const std::vector<std::size_t>& counts,
                                 std::size_t n_points,
                                 std::size_t min_count = 8,
                                 double saturation = 0.3);

// Default grid depth used for trajectory runs: 7 in 2D, 8 in 3D.
int default_depth(int dim);

}  // namespace dipole
