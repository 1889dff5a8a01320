#pragma once
#include <cmath>

namespace dipole {

// Fixed three-slot vector. 2D states keep z == 0 so the arithmetic can be
// shared between dimensions; only sampling, boundaries and binning ever look
// at the runtime dimension.
struct Vec {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec operator*(double s, Vec v) { return {s * v.x, s * v.y, s * v.z}; }
inline Vec operator*(Vec v, double s) { return s * v; }
inline Vec& operator+=(Vec& a, Vec b) { a = a + b; return a; }

inline double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm2(Vec v) { return dot(v, v); }
inline double norm(Vec v) { return std::sqrt(norm2(v)); }

inline double component(Vec v, int c) { return c == 0 ? v.x : (c == 1 ? v.y : v.z); }
inline void set_component(Vec& v, int c, double val) {
  if (c == 0) v.x = val;
  else if (c == 1) v.y = val;
  else v.z = val;
}

inline bool all_finite(Vec v) {
  return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

}  // namespace dipole
