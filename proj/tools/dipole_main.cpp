#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dipole/analysis.hpp"
#include "dipole/errors.hpp"
#include "dipole/experiments.hpp"
#include "dipole/io.hpp"
#include "dipole/sim.hpp"
#include "dipole/version.hpp"

namespace {

using namespace dipole;

// Flag carriers; only flags the user actually passed are applied, so the
// precedence is defaults < preset < config file < flags.
struct CommonOpts {
  std::string preset, config;
  int dim = 0;
  double dh = 0, lf = 0, dr = 0, eps = 0, dt0 = 0, dtmin = 0, dtmax = 0;
  std::size_t steps = 0;
  std::string boundary, x0;
  std::uint64_t seed = 0;
  int trials = 0;
  int workers = -1;
  bool serial = false;

  CLI::Option* o_dim = nullptr;
  CLI::Option* o_dh = nullptr;
  CLI::Option* o_lf = nullptr;
  CLI::Option* o_dr = nullptr;
  CLI::Option* o_eps = nullptr;
  CLI::Option* o_dt0 = nullptr;
  CLI::Option* o_dtmin = nullptr;
  CLI::Option* o_dtmax = nullptr;
  CLI::Option* o_steps = nullptr;
  CLI::Option* o_boundary = nullptr;
  CLI::Option* o_x0 = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_trials = nullptr;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--preset", o.preset, "named base configuration");
  cmd->add_option("--config", o.config, "JSON config file (flags override)");
  o.o_dim = cmd->add_option("--dim", o.dim, "spatial dimension (2 or 3)");
  o.o_dh = cmd->add_option("--dh", o.dh, "dipole moment strength");
  o.o_lf = cmd->add_option("--lf", o.lf, "box half-width");
  o.o_steps = cmd->add_option("--steps", o.steps, "number of steps");
  o.o_boundary = cmd->add_option("--boundary", o.boundary,
                                 "periodic, reset or absorbing");
  o.o_x0 = cmd->add_option("--x0", o.x0, "start position, comma separated");
  o.o_dr = cmd->add_option("--dr", o.dr, "singularity cutoff radius");
  o.o_eps = cmd->add_option("--eps", o.eps, "step error tolerance");
  o.o_dt0 = cmd->add_option("--dt0", o.dt0, "initial step size");
  o.o_dtmin = cmd->add_option("--dtmin", o.dtmin, "smallest allowed step");
  o.o_dtmax = cmd->add_option("--dtmax", o.dtmax, "largest allowed step");
  o.o_seed = cmd->add_option("--seed", o.seed, "random seed");
  o.o_trials = cmd->add_option("--trials", o.trials, "ensemble size");
  cmd->add_option("--workers", o.workers,
                  "worker threads (default: DIPOLE_WORKERS or hardware)");
  cmd->add_flag("--serial", o.serial, "use the serial reference path");
}

SimConfig resolve_config(const CommonOpts& o) {
  SimConfig cfg;
  bool dh_given = !o.preset.empty() || bool(*o.o_dh);
  if (!o.preset.empty()) cfg = preset_or_throw(o.preset).config;
  if (!o.config.empty()) {
    const std::string text = read_text_file(o.config);
    apply_config_json(cfg, text);
    dh_given = dh_given || config_has_key(text, "dh");
  }
  if (!dh_given)
    throw InputError("missing --dh (pass a flag, preset or config value)");
  if (*o.o_dim) cfg.dim = o.dim;
  if (*o.o_dh) cfg.moment = o.dh;
  if (*o.o_lf) cfg.half_width = o.lf;
  if (*o.o_steps) cfg.steps = o.steps;
  if (*o.o_boundary) cfg.boundary = boundary_from_name(o.boundary);
  if (*o.o_x0) {
    const auto v = parse_grid(o.x0);
    if (v.size() < 2 || v.size() > 3)
      throw InputError("--x0 expects 2 or 3 comma-separated numbers");
    cfg.start = Vec{};
    for (std::size_t c = 0; c < v.size(); ++c)
      set_component(cfg.start, int(c), v[c]);
  }
  if (*o.o_dr) cfg.cutoff = o.dr;
  if (*o.o_eps) cfg.control.error_tol = o.eps;
  if (*o.o_dt0) cfg.control.dt_init = o.dt0;
  if (*o.o_dtmin) cfg.control.dt_min = o.dtmin;
  if (*o.o_dtmax) cfg.control.dt_max = o.dtmax;
  if (*o.o_seed) cfg.seed = o.seed;
  if (*o.o_trials) cfg.trials = o.trials;
  validate(cfg);
  return cfg;
}

std::string manifest_path(const std::string& out) {
  return out + ".manifest.json";
}

int cmd_simulate(const CommonOpts& o, const std::string& out,
                 const std::string& cmdline) {
  const SimConfig cfg = resolve_config(o);
  const Trajectory tr = simulate_trajectory(cfg);
  write_trajectory_csv(out, tr, cfg.dim);
  write_text_file(manifest_path(out),
                  run_manifest_json(cmdline, cfg, {out}));
  const char* status = tr.status == TrajStatus::Completed ? "completed"
                       : tr.status == TrajStatus::Absorbed ? "absorbed"
                                                           : "truncated";
  std::cout << "trajectory: " << tr.steps_taken << " steps, " << status
            << ", wrote " << out << "\n";
  return 0;
}

int cmd_fracdim(const CommonOpts& o, int depth, const std::string& out,
                const std::string& summary, const std::string& boxcount_csv,
                const std::string& cmdline) {
  const SimConfig cfg = resolve_config(o);
  const EnsembleStats st =
      fractal_dimension_of_run(cfg, depth, o.workers, !o.serial);
  std::vector<std::string> outs = {out, summary};
  write_trials_csv(out, st);
  write_text_file(summary, ensemble_summary_json(st));
  if (!boxcount_csv.empty()) {
    SimConfig c0 = cfg;
    c0.seed = cfg.seed ^ 0ULL;
    Trajectory tr = simulate_trajectory(c0);
    if (tr.status == TrajStatus::Absorbed && !tr.positions.empty())
      tr.positions.pop_back();
    const int d = depth < 0 ? default_depth(cfg.dim) : depth;
    BoxCountResult r;
    r.scales = box_scales(cfg.half_width, d);
    r.counts = box_count(tr.positions, cfg.half_width, d, cfg.dim);
    try {
      r = regress_dimension(r.scales, r.counts, tr.positions.size());
    } catch (const NoEstimate&) {
    }
    write_boxcount_csv(boxcount_csv, r);
    outs.push_back(boxcount_csv);
  }
  write_text_file(manifest_path(out), run_manifest_json(cmdline, cfg, outs));
  std::cout << "mean_df " << fmt17(st.mean) << " sigma "
            << (st.sigma ? fmt17(*st.sigma) : "null") << " used " << st.used
            << "/" << cfg.trials << "\n";
  return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& param,
              const std::string& grid, const std::string& compare_dr,
              int depth, const std::string& out, const std::string& cmdline) {
  SimConfig base = resolve_config(o);
  const SweepParam p = sweep_param_from_name(param);
  const std::vector<double> values = parse_grid(grid);
  if (!compare_dr.empty()) {
    if (p != SweepParam::HalfWidth)
      throw InputError("--compare-dr requires --param lf");
    const auto drs = parse_grid(compare_dr);
    if (drs.size() != 2)
      throw InputError("--compare-dr expects exactly two cutoffs");
    const CutoffTable t = run_cutoff_comparison(base, values, drs[0], drs[1],
                                                depth, o.workers, !o.serial);
    write_cutoff_csv(out, t);
    write_text_file(manifest_path(out), run_manifest_json(cmdline, base, {out}));
    int agree = 0;
    for (const auto& r : t.rows) agree += r.within_one_sigma ? 1 : 0;
    std::cout << "cutoff comparison: " << agree << "/" << t.rows.size()
              << " rows within one sigma, wrote " << out << "\n";
    return 0;
  }
  SweepSpec spec;
  spec.base = base;
  spec.param = p;
  spec.values = values;
  spec.depth = depth;
  const SweepTable t = run_sweep(spec, o.workers, !o.serial);
  write_sweep_csv(out, t);
  write_text_file(manifest_path(out), run_manifest_json(cmdline, base, {out}));
  for (const auto& r : t.rows) {
    std::cout << sweep_param_name(p) << "=" << fmt17(r.value) << " ";
    if (r.ok)
      std::cout << "mean_df " << fmt17(r.mean) << " sigma "
                << (r.sigma ? fmt17(*r.sigma) : "null") << "\n";
    else
      std::cout << "failed: " << r.error << "\n";
  }
  return 0;
}

int cmd_survival(const CommonOpts& o, const std::string& out,
                 const std::string& summary, const std::string& cmdline) {
  const SimConfig cfg = resolve_config(o);
  const SurvivalCurve sc = survival_experiment(cfg, o.workers, !o.serial);
  write_survival_csv(out, sc);
  write_text_file(summary, survival_summary_json(sc));
  write_text_file(manifest_path(out),
                  run_manifest_json(cmdline, cfg, {out, summary}));
  std::cout << "lambda " << fmt17(sc.lambda) << " r2 " << fmt17(sc.r2)
            << ", wrote " << out << "\n";
  return 0;
}

int cmd_levy(const CommonOpts& o, int bins, const std::string& out,
             const std::string& summary, const std::string& cmdline) {
  const SimConfig cfg = resolve_config(o);
  std::vector<double> lens;
  for (int i = 0; i < cfg.trials; ++i) {
    SimConfig c = cfg;
    c.seed = cfg.seed ^ static_cast<std::uint64_t>(i);
    const Trajectory tr = simulate_trajectory(c);
    const auto l = step_lengths(tr, c);
    lens.insert(lens.end(), l.begin(), l.end());
  }
  const Histogram h = histogram_lengths(lens, bins);
  const LevyFit fit = fit_levy(h);
  write_histogram_csv(out, h);
  write_text_file(summary, levy_summary_json(fit));
  write_text_file(manifest_path(out),
                  run_manifest_json(cmdline, cfg, {out, summary}));
  std::cout << "alpha " << fmt17(fit.alpha) << " mu " << fmt17(fit.mu)
            << " sigma " << fmt17(fit.sigma) << " df(1/alpha) "
            << fmt17(df_from_alpha(fit.alpha)) << " r2 " << fmt17(fit.r2)
            << (fit.levy_like ? "" : " (outside the heavy-tail band)") << "\n";
  return 0;
}

int cmd_dissipation(int dim, double nu, double dh, double lf, double r,
                    const std::string& out) {
  const double closed = dissipation_closed_form(dim, nu, dh, lf, r);
  const double numeric = dissipation_numeric(dim, nu, dh, lf, r);
  const double gap = std::abs(numeric - closed) / closed;
  if (!out.empty()) {
    std::string text = "r,closed,numeric,rel_gap\n" + fmt17(r) + "," +
                       fmt17(closed) + "," + fmt17(numeric) + "," + fmt17(gap) +
                       "\n";
    write_text_file(out, text);
  }
  std::cout << "closed " << fmt17(closed) << " numeric " << fmt17(numeric)
            << " rel_gap " << fmt17(gap) << "\n";
  return 0;
}

std::string joined_cmdline(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random dipole flight simulator and analysis toolkit"};
  app.set_version_flag("--version", std::string("dipole ") + kVersion);
  app.require_subcommand(1);
  const std::string cmdline = joined_cmdline(argc, argv);

  CommonOpts so;
  std::string s_out = "traj.csv";
  auto* sim = app.add_subcommand("simulate", "run one trajectory");
  add_common(sim, so);
  sim->add_option("-o,--out", s_out, "trajectory CSV path");

  CommonOpts fo;
  std::string f_out = "fracdim.csv", f_summary = "fracdim.json", f_boxcsv;
  int f_depth = -1;
  auto* fra = app.add_subcommand("fracdim", "ensemble fractal dimension");
  add_common(fra, fo);
  fra->add_option("-o,--out", f_out, "per-trial CSV path");
  fra->add_option("--summary", f_summary, "summary JSON path");
  fra->add_option("--depth", f_depth, "box-count depth (default per dim)");
  fra->add_option("--boxcount-csv", f_boxcsv,
                  "also write trial 0's per-scale counts");

  CommonOpts wo;
  std::string w_param = "dh", w_grid, w_out = "sweep.csv", w_compare;
  int w_depth = -1;
  auto* swp = app.add_subcommand("sweep", "parameter sweep of the dimension");
  add_common(swp, wo);
  swp->add_option("--param", w_param, "dh, steps, lf or x0");
  swp->add_option("--grid", w_grid, "lo:hi:linN, lo:hi:logN or v1,v2,...")
      ->required();
  swp->add_option("--compare-dr", w_compare,
                  "two cutoffs: run the lf sweep per cutoff and pair rows");
  swp->add_option("--depth", w_depth, "box-count depth (default per dim)");
  swp->add_option("-o,--out", w_out, "table CSV path");

  CommonOpts vo;
  std::string v_out = "survival.csv", v_summary = "survival.json";
  auto* sur = app.add_subcommand("survival", "absorbing-boundary decay");
  add_common(sur, vo);
  sur->add_option("-o,--out", v_out, "step,count CSV path");
  sur->add_option("--summary", v_summary, "summary JSON path");

  CommonOpts lo;
  std::string l_out = "levy.csv", l_summary = "levy.json";
  int l_bins = 64;
  auto* lev = app.add_subcommand("levy", "step-length tail fit");
  add_common(lev, lo);
  lev->add_option("-o,--out", l_out, "histogram CSV path");
  lev->add_option("--summary", l_summary, "summary JSON path");
  lev->add_option("--bins", l_bins, "histogram bin count");

  int d_dim = 3;
  double d_nu = 1.0, d_dh = 1.0, d_lf = 1.0, d_r = 1.0;
  std::string d_out;
  auto* dis = app.add_subcommand("dissipation",
                                 "energy dissipation outside radius r");
  dis->add_option("--dim", d_dim, "spatial dimension (2 or 3)");
  dis->add_option("--nu", d_nu, "viscosity");
  dis->add_option("--dh", d_dh, "dipole moment strength");
  dis->add_option("--lf", d_lf, "box half-width");
  dis->add_option("--r", d_r, "inner radius");
  dis->add_option("-o,--out", d_out, "optional CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(so, s_out, cmdline);
    if (fra->parsed())
      return cmd_fracdim(fo, f_depth, f_out, f_summary, f_boxcsv, cmdline);
    if (swp->parsed())
      return cmd_sweep(wo, w_param, w_grid, w_compare, w_depth, w_out, cmdline);
    if (sur->parsed()) return cmd_survival(vo, v_out, v_summary, cmdline);
    if (lev->parsed()) return cmd_levy(lo, l_bins, l_out, l_summary, cmdline);
    if (dis->parsed()) return cmd_dissipation(d_dim, d_nu, d_dh, d_lf, d_r, d_out);
    std::cerr << "no subcommand given\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
