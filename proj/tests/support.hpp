#pragma once
// Minimal check harness shared by the test binaries: one [PASS]/[FAIL] line
// per check, a counter summary, and the failure count as the exit code.

#include <cmath>
#include <cstdio>
#include <string>

namespace testsup {

inline int g_pass = 0;
inline int g_fail = 0;

inline void check(bool ok, const std::string& label) {
  if (ok) {
    ++g_pass;
    std::printf("[PASS] %s\n", label.c_str());
  } else {
    ++g_fail;
    std::printf("[FAIL] %s\n", label.c_str());
  }
}

inline void check_close(double got, double want, double tol,
                        const std::string& label) {
  const bool ok = std::isfinite(got) && std::abs(got - want) <= tol;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s (got %.10g, want %.10g +- %.3g)",
                label.c_str(), got, want, tol);
  check(ok, buf);
}

inline void check_rel(double got, double want, double rel_tol,
                      const std::string& label) {
  const double scale = std::abs(want) > 0.0 ? std::abs(want) : 1.0;
  const bool ok = std::isfinite(got) && std::abs(got - want) <= rel_tol * scale;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s (got %.10g, want %.10g rel %.3g)",
                label.c_str(), got, want, rel_tol);
  check(ok, buf);
}

inline void check_in(double got, double lo, double hi,
                     const std::string& label) {
  const bool ok = std::isfinite(got) && got >= lo && got <= hi;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s (got %.10g, want [%.10g, %.10g])",
                label.c_str(), got, lo, hi);
  check(ok, buf);
}

// Runs fn and passes only if it throws E.
template <typename E, typename Fn>
void check_throws(Fn&& fn, const std::string& label) {
  bool threw = false;
  try {
    fn();
  } catch (const E&) {
    threw = true;
  } catch (...) {
  }
  check(threw, label + " (throws)");
}

inline int finish(const char* suite) {
  std::printf("%s: %d passed, %d failed\n", suite, g_pass, g_fail);
  return g_fail == 0 ? 0 : 1;
}

}  // namespace testsup
