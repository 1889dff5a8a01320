#include "dipole/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dipole/ensemble.hpp"
#include "dipole/errors.hpp"

namespace dipole {

namespace {
constexpr double pi = std::numbers::pi;

struct LinFit {
  double slope = 0.0, intercept = 0.0, r2 = 1.0;
};

// OLS of y against x; r2 defaults to 1 for a zero-variance response.
LinFit lin_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  if (syy > 0.0) {
    double ssr = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - f.intercept - f.slope * x[i];
      ssr += e * e;
    }
    f.r2 = 1.0 - ssr / syy;
  }
  return f;
}

}  // namespace

EnsembleStats fractal_dimension_of_run(const SimConfig& cfg, int depth,
                                       int workers, bool parallel) {
  validate(cfg);
  const int d = depth < 0 ? default_depth(cfg.dim) : depth;
  auto trial_fn = [&cfg, d](int i) {
    SimConfig c = cfg;
    c.seed = cfg.seed ^ static_cast<std::uint64_t>(i);
    Trajectory tr = simulate_trajectory(c);
    std::vector<Vec> pts = std::move(tr.positions);
    if (tr.status == TrajStatus::Absorbed && !pts.empty()) pts.pop_back();
    TrialEstimate e;
    e.trial = i;
    try {
      const auto counts = box_count(pts, c.half_width, d, c.dim);
      const auto res =
          regress_dimension(box_scales(c.half_width, d), counts, pts.size());
      e.dimension = res.dimension;
      e.r2 = res.r2;
      e.gate_passed = res.gate_passed;
    } catch (const NoEstimate&) {
      e.gate_passed = false;
    }
    return e;
  };
  EnsembleStats stats;
  stats.trials = run_indexed<TrialEstimate>(cfg.trials, workers, trial_fn, parallel);
  double sum = 0.0;
  for (const auto& e : stats.trials) {
    if (!e.gate_passed) continue;
    sum += e.dimension;
    ++stats.used;
  }
  stats.gate_failures = cfg.trials - stats.used;
  if (stats.used == 0) throw NoEstimate("every trial failed the regression gate");
  stats.mean = sum / double(stats.used);
  if (stats.used >= 2) {
    double ss = 0.0;
    for (const auto& e : stats.trials)
      if (e.gate_passed) ss += (e.dimension - stats.mean) * (e.dimension - stats.mean);
    stats.sigma = std::sqrt(ss / double(stats.used - 1));
  }
  return stats;
}

SurvivalCurve survival_experiment(const SimConfig& cfg, int workers,
                                  bool parallel) {
  validate(cfg);
  if (cfg.boundary != BoundaryMode::Absorbing)
    throw InputError("survival experiment needs the absorbing boundary");
  // -1 marks a survivor; otherwise the 1-based step of absorption.
  auto trial_fn = [&cfg](int i) -> long long {
    SimConfig c = cfg;
    c.seed = cfg.seed ^ static_cast<std::uint64_t>(i);
    const Trajectory tr = simulate_trajectory(c);
    if (tr.status == TrajStatus::Absorbed)
      return static_cast<long long>(tr.events.back().step);
    return -1;
  };
  const auto absorbed =
      run_indexed<long long>(cfg.trials, workers, trial_fn, parallel);

  SurvivalCurve sc;
  sc.checkpoints.push_back(0);
  for (std::size_t s = 1; s <= cfg.steps; s *= 2) sc.checkpoints.push_back(s);
  for (std::size_t s : sc.checkpoints) {
    int alive = 0;
    for (long long a : absorbed)
      if (a < 0 || static_cast<std::size_t>(a) > s) ++alive;
    sc.counts.push_back(alive);
  }
  if (sc.counts.size() >= 2 && sc.counts[1] == 0)
    throw Error("all particles absorbed before the second checkpoint");

  // The published curve is drawn against n with step = 2^n, so the decay that
  // looks exponential lives on the checkpoint index, not the raw step count.
  // Leading checkpoints where every particle is still alive carry no rate
  // information and only flatten the fit, so the regression starts at the
  // last fully populated checkpoint.
  std::size_t onset = sc.counts.size();
  for (std::size_t i = 0; i < sc.counts.size(); ++i)
    if (sc.counts[i] < sc.counts[0]) {
      onset = i;
      break;
    }
  if (onset == sc.counts.size()) {
    sc.lambda = 0.0;
    sc.r2 = 1.0;
    return sc;
  }
  std::vector<double> xs, ys;
  for (std::size_t i = onset - 1; i < sc.checkpoints.size(); ++i) {
    if (sc.counts[i] <= 0) break;
    xs.push_back(double(i));
    ys.push_back(std::log(double(sc.counts[i])));
  }
  if (xs.size() < 2)
    throw Error("survival collapse leaves no decay regime to fit");
  const LinFit f = lin_fit(xs, ys);
  sc.lambda = -f.slope;
  sc.r2 = f.r2;
  return sc;
}

std::vector<double> step_lengths(const Trajectory& tr, const SimConfig& cfg) {
  std::vector<bool> reset_step(tr.positions.size(), false);
  for (const TrajEvent& e : tr.events)
    if (e.kind == EventKind::Reset && e.step < reset_step.size())
      reset_step[e.step] = true;

  const double L = cfg.half_width;
  std::vector<double> lens;
  lens.reserve(tr.positions.size());
  for (std::size_t i = 1; i < tr.positions.size(); ++i) {
    if (reset_step[i]) continue;
    Vec d = tr.positions[i] - tr.positions[i - 1];
    if (cfg.boundary == BoundaryMode::Periodic)
      for (int c = 0; c < cfg.dim; ++c) {
        const double v = component(d, c);
        set_component(d, c, v - 2.0 * L * std::round(v / (2.0 * L)));
      }
    const double len = norm(d);
    if (len > 0.0) lens.push_back(len);
  }
  return lens;
}

Histogram histogram_lengths(const std::vector<double>& lens, int bins) {
  if (bins < 2) throw InputError("need at least 2 bins");
  for (double v : lens)
    if (!(v > 0.0)) throw InputError("lengths must be positive");
  Histogram h;
  if (lens.empty()) {
    h.degenerate = true;
    return h;
  }
  auto [lo_it, hi_it] = std::minmax_element(lens.begin(), lens.end());
  double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) hi = lo * (1.0 + 1e-9);
  // nudge the top edge so the maximum falls inside the last bin
  hi *= 1.0 + 1e-12;
  const double lr = std::log(hi / lo);
  h.edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i)
    h.edges[i] = lo * std::exp(lr * double(i) / double(bins));
  std::vector<std::size_t> cnt(bins, 0);
  for (double v : lens) {
    int idx = int(std::floor(std::log(v / lo) / lr * double(bins)));
    idx = std::clamp(idx, 0, bins - 1);
    ++cnt[idx];
  }
  h.samples = lens.size();
  h.density.resize(bins);
  for (int i = 0; i < bins; ++i)
    h.density[i] = double(cnt[i]) / (double(lens.size()) * (h.edges[i + 1] - h.edges[i]));
  return h;
}

Histogram step_length_histogram(const Trajectory& tr, const SimConfig& cfg,
                                int bins) {
  return histogram_lengths(step_lengths(tr, cfg), bins);
}

namespace {

// Solves the 3x3 normal equations by Gaussian elimination with partial
// pivoting; returns false on a singular system.
bool solve3(double A[3][3], double b[3], double out[3]) {
  int idx[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[idx[r]][col]) > std::abs(A[idx[piv]][col])) piv = r;
    std::swap(idx[col], idx[piv]);
    const double d = A[idx[col]][col];
    if (std::abs(d) < 1e-300) return false;
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[idx[r]][col] / d;
      for (int c = col; c < 3; ++c) A[idx[r]][c] -= f * A[idx[col]][c];
      b[idx[r]] -= f * b[idx[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double s = b[idx[col]];
    for (int c = col + 1; c < 3; ++c) s -= A[idx[col]][c] * out[c];
    out[col] = s / A[idx[col]][col];
  }
  return std::isfinite(out[0]) && std::isfinite(out[1]) && std::isfinite(out[2]);
}

}  // namespace

LevyFit fit_levy(const Histogram& h) {
  if (h.degenerate) throw InputError("degenerate histogram");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < h.density.size(); ++i)
    if (h.density[i] > 0.0) {
      xs.push_back(0.5 * (h.edges[i] + h.edges[i + 1]));
      ys.push_back(std::log(h.density[i]));
    }
  if (xs.empty()) throw InputError("histogram has no occupied bins");
  std::size_t mode = 0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (ys[i] > ys[mode]) mode = i;
  std::vector<double> tx(xs.begin() + mode + 1, xs.end());
  std::vector<double> ty(ys.begin() + mode + 1, ys.end());
  if (tx.size() < 10) throw InputError("need at least 10 nonempty tail bins");

  const double x0 = tx.front(), x1 = tx.back();
  const double span = x1 - x0;
  double best_ssr = 0.0, best[3] = {0, 0, 0}, best_mu = 0.0;
  bool have = false;
  const int kMuGrid = 400;
  for (int g = 0; g < kMuGrid; ++g) {
    const double lo = std::max(0.0, x0 - span);
    const double mu = lo + (x0 * (1.0 - 1e-9) - lo) * double(g) / double(kMuGrid - 1);
    if (!(mu < x0)) continue;
    // ln p = b0 + b1 (x - mu) + b2 ln(x - mu)
    double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double b[3] = {0, 0, 0};
    for (std::size_t i = 0; i < tx.size(); ++i) {
      const double u1 = tx[i] - mu;
      const double u2 = std::log(u1);
      const double row[3] = {1.0, u1, u2};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) A[r][c] += row[r] * row[c];
        b[r] += row[r] * ty[i];
      }
    }
    double sol[3];
    if (!solve3(A, b, sol)) continue;
    double ssr = 0.0;
    for (std::size_t i = 0; i < tx.size(); ++i) {
      const double e = ty[i] - (sol[0] + sol[1] * (tx[i] - mu) +
                                sol[2] * std::log(tx[i] - mu));
      ssr += e * e;
    }
    if (!have || ssr < best_ssr) {
      have = true;
      best_ssr = ssr;
      best_mu = mu;
      for (int k = 0; k < 3; ++k) best[k] = sol[k];
    }
  }
  if (!have) throw FitError("tail fit did not converge (singular scan)");

  LevyFit fit;
  fit.mu = best_mu;
  fit.sigma = 2.0 * best[1];
  fit.alpha = -best[2] - 1.0;
  fit.fit_from = x0;
  fit.fit_to = x1;
  double my = 0;
  for (double v : ty) my += v;
  my /= double(ty.size());
  double syy = 0;
  for (double v : ty) syy += (v - my) * (v - my);
  fit.r2 = syy > 0.0 ? 1.0 - best_ssr / syy : 0.0;
  fit.levy_like = fit.alpha > 0.0 && fit.alpha <= 5.0;
  return fit;
}

namespace {

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double both = left + right;
  if (depth <= 0 || std::abs(both - whole) <= 15.0 * tol)
    return both + (both - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double tol = std::abs(whole) * rel_tol;
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double dissipation_closed_form(int dim, double nu, double moment,
                               double half_width, double r) {
  if (dim != 2 && dim != 3) throw InputError("dim must be 2 or 3");
  if (!(r > 0.0) || !(half_width > 0.0))
    throw InputError("r and half_width must be positive");
  if (dim == 2)
    return 8.0 * pi * nu * moment * moment /
           (half_width * half_width * std::pow(r, 4));
  return (288.0 * pi / 5.0) * nu * moment * moment /
         (std::pow(half_width, 3) * std::pow(r, 5));
}

double dissipation_numeric(int dim, double nu, double moment,
                           double half_width, double r, double r_max_factor,
                           double rel_tol) {
  if (dim != 2 && dim != 3) throw InputError("dim must be 2 or 3");
  if (!(r > 0.0) || !(half_width > 0.0))
    throw InputError("r and half_width must be positive");
  if (!(r_max_factor > 1.0)) throw InputError("r_max_factor must exceed 1");
  // Orientation-averaged squared strain of the dipole field at radius rho:
  //   <sum_ab (d_a V_b + d_b V_a)^2> = 4 D^2 m^2 rho^(-2(D+1)) *
  //                                    (2 + (D+1)(D-2) <(rhat.u)^2>),
  // with <(rhat.u)^2> = 1/2. The dissipation outside r integrates this over
  // the shell measure S_(D-1) rho^(D-1), weighted nu/2 and the box volume
  // normalization L^-D.
  const double surf = dim == 2 ? 2.0 * pi : 4.0 * pi;
  const double bracket = 2.0 + double((dim + 1) * (dim - 2)) * 0.5;
  const double pref = 0.5 * nu * std::pow(half_width, -dim) * surf * 4.0 *
                      double(dim * dim) * moment * moment * bracket;
  // integrate pref * rho^(-D-3) * rho  d(ln rho)  from r to r * factor
  auto f = [pref, dim, r](double s) {
    const double rho = r * std::exp(s);
    return pref * std::pow(rho, -dim - 2);
  };
  return integrate(f, 0.0, std::log(r_max_factor), rel_tol);
}

}  // namespace dipole
