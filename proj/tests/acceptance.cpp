// Acceptance gate: twelve end-to-end checks of the published behavior,
// one verdict line each. The exit code is the number of failed criteria,
// so a red run shows exactly how many targets are missed and the log says
// which and by how much.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dipole/analysis.hpp"
#include "dipole/boxcount.hpp"
#include "dipole/errors.hpp"
#include "dipole/experiments.hpp"
#include "dipole/field.hpp"
#include "dipole/io.hpp"
#include "dipole/rkf45.hpp"
#include "dipole/sampler.hpp"
#include "dipole/sim.hpp"

using namespace dipole;
namespace fs = std::filesystem;

namespace {

int g_failed = 0;

void verdict(int k, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", k,
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failed;
}

std::string num(double v, int prec = 4) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

template <typename Fn>
void criterion(int k, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    verdict(k, false, std::string("exception: ") + e.what());
  }
}

void note(const std::string& msg) { std::cerr << "  ... " << msg << "\n"; }

EnsembleStats preset_ensemble(const std::string& name, double cutoff = 0.0) {
  SimConfig cfg = preset_or_throw(name).config;
  cfg.cutoff = cutoff;
  return fractal_dimension_of_run(cfg);
}

std::string band(const EnsembleStats& st, double lo, double hi) {
  std::ostringstream os;
  os << "mean dimension " << num(st.mean) << " (sigma "
     << (st.sigma ? num(*st.sigma) : std::string("n/a")) << ", used "
     << st.used << "/" << st.trials.size() << ") vs [" << num(lo) << ", "
     << num(hi) << "]";
  return os.str();
}

double decay_error(double dt, bool fifth) {
  auto f = [](Vec x, double) { return Vec{-x.x, -x.y, -x.z}; };
  Vec x{1, 0, 0};
  double t = 0;
  const int n = int(std::lround(1.0 / dt));
  for (int i = 0; i < n; ++i) {
    const StepPair p = rkf_step(f, x, t, dt);
    x = fifth ? p.fifth : p.fourth;
    t += dt;
  }
  return std::abs(x.x - std::exp(-1.0));
}

double oracle_dimension(const std::vector<Vec>& pts, int dim) {
  const int d = default_depth(dim);
  const auto counts = box_count(pts, 1.0, d, dim);
  return regress_dimension(box_scales(1.0, d), counts, pts.size()).dimension;
}

}  // namespace

int main() {
  std::optional<EnsembleStats> cond2_2d, cond2_3d;

  criterion(1, [&] {
    note("150-trial ensemble, 3D dense periodic box");
    const EnsembleStats st = preset_ensemble("fig3-cond1-3d");
    verdict(1, st.mean >= 2.5 && st.mean <= 2.9,
            "3D dense periodic box: " + band(st, 2.5, 2.9));
  });

  criterion(2, [&] {
    note("150-trial ensemble, 2D dense periodic box");
    const EnsembleStats st = preset_ensemble("fig3-cond1-2d");
    verdict(2, st.mean >= 1.75 && st.mean <= 2.0,
            "2D dense periodic box: " + band(st, 1.75, 2.0));
  });

  criterion(3, [&] {
    note("150-trial ensembles, sparse reset box, both dimensions");
    const EnsembleStats s2 = preset_ensemble("fig3-cond2-2d");
    const EnsembleStats s3 = preset_ensemble("fig3-cond2-3d");
    cond2_2d = s2;
    cond2_3d = s3;
    const bool ok2 = s2.mean >= 1.35 && s2.mean <= 1.65;
    const bool ok3 = s3.mean >= 1.45 && s3.mean <= 2.0;
    verdict(3, ok2 && ok3,
            "sparse reset box: 2D " + band(s2, 1.35, 1.65) + "; 3D " +
                band(s3, 1.45, 2.0));
  });

  criterion(4, [&] {
    note("survival decay, both dimensions");
    const SurvivalCurve s3 =
        survival_experiment(preset_or_throw("fig6-survival-3d").config);
    const SurvivalCurve s2 =
        survival_experiment(preset_or_throw("fig6-survival-2d").config);
    verdict(4, s3.r2 > 0.9 && s2.r2 > 0.9,
            "log-linear survival fit: 3D R2 " + num(s3.r2) + " (rate " +
                num(s3.lambda) + "), 2D R2 " + num(s2.r2) + " (rate " +
                num(s2.lambda) + "), need R2 > 0.9");
  });

  criterion(5, [&] {
    const double r4a = decay_error(0.1, false) / decay_error(0.05, false);
    const double r4b = decay_error(0.05, false) / decay_error(0.025, false);
    const double r5a = decay_error(0.1, true) / decay_error(0.05, true);
    const double r5b = decay_error(0.05, true) / decay_error(0.025, true);
    auto in = [](double r, double target, double fac) {
      return r >= target / fac && r <= target * fac;
    };
    verdict(5,
            in(r4a, 16, 1.5) && in(r4b, 16, 1.5) && in(r5a, 32, 2.0) &&
                in(r5b, 32, 2.0),
            "order-4 error ratios " + num(r4a) + ", " + num(r4b) +
                " (target 16 within 1.5x); order-5 " + num(r5a) + ", " +
                num(r5b) + " (target 32 within 2x)");
  });

  criterion(6, [&] {
    std::vector<Vec> line;
    for (int i = 0; i < 10000; ++i) {
      const double t = -1.0 + 2.0 * i / 9999.0;
      line.push_back({t, 0.31 * t, 0});
    }
    const double dl = oracle_dimension(line, 2);

    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec> cloud;
    cloud.reserve(1000000);
    for (int i = 0; i < 1000000; ++i) cloud.push_back({u(rng), u(rng), 0});
    const double dc = oracle_dimension(cloud, 2);

    const Vec verts[3] = {{-1, -1, 0}, {1, -1, 0}, {0, 1, 0}};
    std::mt19937_64 g(21);
    Vec p{0.1, 0.1, 0};
    std::vector<Vec> gasket;
    gasket.reserve(1000000);
    for (int i = 0; i < 1000100; ++i) {
      p = 0.5 * (p + verts[g() % 3]);
      if (i >= 100) gasket.push_back(p);
    }
    const double dg = oracle_dimension(gasket, 2);
    const double target = std::log(3.0) / std::log(2.0);

    verdict(6,
            std::abs(dl - 1.0) <= 0.05 && std::abs(dc - 2.0) <= 0.1 &&
                std::abs(dg - target) <= 0.05,
            "box-count oracles: line " + num(dl) + " (1 +- 0.05), plane " +
                num(dc) + " (2 +- 0.1), gasket " + num(dg) + " (" +
                num(target) + " +- 0.05)");
  });

  criterion(7, [&] {
    bool ok = true;
    std::string detail = "1e6 draws:";
    for (int dim : {2, 3}) {
      DirectionSampler smp(dim, 99);
      const int n = 1000000;
      double mean[3] = {0, 0, 0}, cov[3][3] = {{0}};
      for (int i = 0; i < n; ++i) {
        const Vec v = smp.next_direction();
        const double c[3] = {v.x, v.y, v.z};
        for (int a = 0; a < 3; ++a) {
          mean[a] += c[a];
          for (int b = 0; b < 3; ++b) cov[a][b] += c[a] * c[b];
        }
      }
      double worst_mean = 0, worst_cov = 0;
      for (int a = 0; a < dim; ++a) {
        mean[a] /= n;
        worst_mean = std::max(worst_mean, std::abs(mean[a]));
      }
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          const double c = cov[a][b] / n - mean[a] * mean[b];
          const double want = a == b ? 1.0 / dim : 0.0;
          worst_cov = std::max(worst_cov, std::abs(c - want));
        }
      ok = ok && worst_mean < 0.005 && worst_cov < 0.005;
      detail += " " + std::to_string(dim) + "D max|mean| " + num(worst_mean) +
                ", max|cov - I/D| " + num(worst_cov) + ";";
    }
    verdict(7, ok, detail + " limits 0.005");
  });

  criterion(8, [&] {
    double worst = 0;
    for (int dim : {2, 3})
      for (double r : {0.1, 1.0, 10.0}) {
        const double c = dissipation_closed_form(dim, 1, 1, 1, r);
        const double q = dissipation_numeric(dim, 1, 1, 1, r);
        worst = std::max(worst, std::abs(q - c) / c);
      }
    verdict(8, worst < 1e-4,
            "dissipation quadrature vs closed form, worst relative gap " +
                num(worst, 3) + " (limit 1e-4)");
  });

  criterion(9, [&] {
    note("150-trial ensembles, sparse reset box with the cutoff active");
    if (!cond2_2d || !cond2_3d) {
      cond2_2d = preset_ensemble("fig3-cond2-2d");
      cond2_3d = preset_ensemble("fig3-cond2-3d");
    }
    const EnsembleStats c2 = preset_ensemble("fig3-cond2-2d", 0.001);
    const EnsembleStats c3 = preset_ensemble("fig3-cond2-3d", 0.001);
    auto gap = [](const EnsembleStats& a, const EnsembleStats& b, double& d,
                  double& s) {
      d = std::abs(a.mean - b.mean);
      s = (a.sigma && b.sigma)
              ? std::sqrt(*a.sigma * *a.sigma + *b.sigma * *b.sigma)
              : 0.0;
      return s > 0.0 && d <= s;
    };
    double d2, s2, d3, s3;
    const bool ok2 = gap(*cond2_2d, c2, d2, s2);
    const bool ok3 = gap(*cond2_3d, c3, d3, s3);
    verdict(9, ok2 && ok3,
            "cutoff 0 vs 0.001, same seeds: 2D gap " + num(d2) +
                " vs combined sigma " + num(s2) + "; 3D gap " + num(d3) +
                " vs " + num(s3));
  });

  criterion(10, [&] {
    double worst = 0;
    for (int dim : {2, 3}) {
      DirectionSampler smp(dim, 7);
      std::mt19937_64 rng(17);
      std::uniform_real_distribution<double> u(-2.0, 2.0);
      for (int i = 0; i < 100; ++i) {
        Vec x{0, 0, 0};
        do {
          x = {u(rng), u(rng), dim == 3 ? u(rng) : 0.0};
        } while (norm(x) < 0.1);
        const Vec dir = smp.next_direction();
        const DipoleField f{dim, 60.0, 0.0};
        const double div = divergence_check(f, x, dir, 1e-6 * norm(x));
        const double scale = norm(dipole_velocity(f, x, dir)) / norm(x);
        worst = std::max(worst, std::abs(div) / scale);
      }
    }
    verdict(10, worst < 1e-6,
            "divergence at 100 random points per dimension, worst relative " +
                num(worst, 3) + " (limit 1e-6)");
  });

  criterion(11, [&] {
    note("same-seed reproducibility on the dense 3D preset");
    const SimConfig cfg = preset_or_throw("fig3-cond1-3d").config;
    const fs::path dir = fs::temp_directory_path();
    const std::string p1 = (dir / "acc_det_a.csv").string();
    const std::string p2 = (dir / "acc_det_b.csv").string();
    write_trajectory_csv(p1, simulate_trajectory(cfg), cfg.dim);
    write_trajectory_csv(p2, simulate_trajectory(cfg), cfg.dim);
    const bool same = read_text_file(p1) == read_text_file(p2);
    fs::remove(p1);
    fs::remove(p2);
    verdict(11, same, std::string("two same-seed runs produce ") +
                          (same ? "byte-identical" : "differing") +
                          " trajectory files");
  });

  criterion(12, [&] {
    note("pooled step lengths, 10 trials of the 3D dense periodic box");
    SimConfig cfg = preset_or_throw("fig9-levy-3d").config;
    cfg.trials = 10;
    std::vector<double> lens;
    for (int i = 0; i < cfg.trials; ++i) {
      SimConfig c = cfg;
      c.seed = cfg.seed ^ static_cast<std::uint64_t>(i);
      const Trajectory tr = simulate_trajectory(c);
      const auto l = step_lengths(tr, c);
      lens.insert(lens.end(), l.begin(), l.end());
    }
    const Histogram h = histogram_lengths(lens, 64);

    double m = 0, s = 0;
    for (double v : lens) m += v;
    m /= double(lens.size());
    for (double v : lens) s += (v - m) * (v - m);
    s = std::sqrt(s / double(lens.size() - 1));
    std::vector<double> sorted = lens;
    std::sort(sorted.begin(), sorted.end());
    const double p99 = sorted[std::size_t(0.99 * double(sorted.size() - 1))];
    std::size_t bin = h.density.size() - 1;
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i)
      if (p99 >= h.edges[i] && p99 < h.edges[i + 1]) {
        bin = i;
        break;
      }
    const double center = 0.5 * (h.edges[bin] + h.edges[bin + 1]);
    const double z = (center - m) / s;
    const double log_gauss =
        -0.5 * z * z - std::log(s * std::sqrt(2.0 * std::numbers::pi));
    const double log_ratio =
        (h.density[bin] > 0 ? std::log(h.density[bin]) : -1e300) - log_gauss;
    const bool tail_ok = log_ratio >= std::log(10.0);

    const LevyFit fit = fit_levy(h);
    const bool a_ok = fit.alpha >= 1.0 && fit.alpha <= 3.0;
    const bool m_ok = fit.mu >= 0.07 && fit.mu <= 0.21;
    const bool s_ok = fit.sigma >= 0.45 && fit.sigma <= 1.35;
    verdict(12, tail_ok && a_ok && m_ok && s_ok,
            "heavy tail: log10(tail density / bulk-Gaussian prediction) " +
                num(log_ratio / std::log(10.0), 3) +
                " (need >= 1); fit alpha " + num(fit.alpha, 3) +
                " (target 2.0 +- 50%), mu " + num(fit.mu, 3) +
                " (0.14 +- 50%), sigma " + num(fit.sigma, 3) + " (0.9 +- 50%)");
  });

  std::printf("acceptance: %d/12 criteria passed\n", 12 - g_failed);
  return g_failed;
}
