#include "dipole/boxcount.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_set>

#include "dipole/errors.hpp"

namespace dipole {

// In 2D the grid has few cells per scale, so the sample-size retention cap
// rarely binds and the window must stop before dedup-limited scales; 3D runs
// self-limit through the cap and tolerate a deeper grid.
int default_depth(int dim) { return dim == 2 ? 7 : 8; }

std::vector<double> box_scales(double L, int depth) {
  std::vector<double> s;
  s.reserve(depth + 1);
  for (int k = 0; k <= depth; ++k) s.push_back(2.0 * L / double(1ull << k));
  return s;
}

std::vector<std::size_t> box_count(const std::vector<Vec>& pts, double L,
                                   int depth, int dim) {
  if (depth < 1 || depth > 20) throw InputError("depth must be in [1, 20]");
  if (!(L > 0.0)) throw InputError("box half-width must be positive");
  if (dim != 2 && dim != 3) throw InputError("dim must be 2 or 3");
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int c = 0; c < dim; ++c)
      if (!(std::abs(component(pts[i], c)) <= L))
        throw InputError("point " + std::to_string(i) + " outside the box");

  std::vector<std::size_t> counts;
  counts.reserve(depth + 1);
  std::unordered_set<std::uint64_t> cells;
  cells.reserve(pts.size() * 2);
  for (int k = 0; k <= depth; ++k) {
    const std::uint64_t n_axis = 1ull << k;
    const double inv_edge = double(n_axis) / (2.0 * L);
    cells.clear();
    for (const Vec& p : pts) {
      std::uint64_t key = 0;
      for (int c = 0; c < dim; ++c) {
        double f = std::floor((component(p, c) + L) * inv_edge);
        if (f < 0.0) f = 0.0;  // roundoff guard
        std::uint64_t idx = static_cast<std::uint64_t>(f);
        if (idx >= n_axis) idx = n_axis - 1;  // top face closed
        key = (key << 21) | idx;
      }
      cells.insert(key);
    }
    counts.push_back(cells.size());
  }
  return counts;
}

BoxCountResult regress_dimension(const std::vector<double>& scales,
                                 const std::vector<std::size_t>& counts,
                                 std::size_t n_points, std::size_t min_count,
                                 double saturation) {
  if (scales.size() != counts.size() || scales.empty())
    throw InputError("scales and counts must be equal-length and nonempty");
  BoxCountResult res;
  res.scales = scales;
  res.counts = counts;
  const double cap = saturation * double(n_points);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (counts[i] >= min_count && double(counts[i]) <= cap)
      res.retained.push_back(int(i));
  }
  if (res.retained.size() < 3)
    throw NoEstimate("fewer than 3 scales survive the retention rule");

  const std::size_t m = res.retained.size();
  double sx = 0, sy = 0;
  for (int i : res.retained) {
    sx += std::log(1.0 / scales[i]);
    sy += std::log(double(counts[i]));
  }
  const double mx = sx / double(m), my = sy / double(m);
  double sxx = 0, sxy = 0, syy = 0;
  for (int i : res.retained) {
    const double dx = std::log(1.0 / scales[i]) - mx;
    const double dy = std::log(double(counts[i])) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  res.dimension = sxy / sxx;
  double ssr = 0;
  for (int i : res.retained) {
    const double dx = std::log(1.0 / scales[i]) - mx;
    const double dy = std::log(double(counts[i])) - my;
    const double e = dy - res.dimension * dx;
    ssr += e * e;
  }
  res.r2 = syy > 0.0 ? 1.0 - ssr / syy : 0.0;
  res.slope_stderr = m > 2 ? std::sqrt(ssr / double(m - 2) / sxx) : 0.0;
  res.gate_passed = res.r2 > 0.8;
  return res;
}

}  // namespace dipole
