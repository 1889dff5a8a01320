#include "dipole/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "dipole/errors.hpp"
#include "dipole/version.hpp"
#include "json.hpp"

namespace dipole {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string boundary_name(BoundaryMode m) {
  switch (m) {
    case BoundaryMode::Periodic: return "periodic";
    case BoundaryMode::Reset: return "reset";
    case BoundaryMode::Absorbing: return "absorbing";
  }
  throw InputError("unknown boundary mode");
}

BoundaryMode boundary_from_name(const std::string& s) {
  if (s == "periodic") return BoundaryMode::Periodic;
  if (s == "reset") return BoundaryMode::Reset;
  if (s == "absorbing") return BoundaryMode::Absorbing;
  throw InputError("unknown boundary '" + s +
                   "' (expected periodic, reset or absorbing)");
}

namespace {

const char* event_name(EventKind k) {
  switch (k) {
    case EventKind::Wrap: return "wrap";
    case EventKind::Reset: return "reset";
    case EventKind::Absorbed: return "absorbed";
  }
  return "";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  return os;
}

void finish(std::ofstream& os, const std::string& path) {
  os.flush();
  if (!os) throw Error("write to '" + path + "' failed");
}

std::string opt_field(const std::optional<double>& v) {
  return v ? fmt17(*v) : std::string();
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& tr,
                          int dim) {
  auto os = open_out(path);
  os << "step,t";
  for (int c = 0; c < dim; ++c) os << ",x" << c + 1;
  os << ",event\n";
  std::vector<std::string> ev(tr.positions.size());
  for (const TrajEvent& e : tr.events)
    if (e.step < ev.size()) ev[e.step] = event_name(e.kind);
  for (std::size_t i = 0; i < tr.positions.size(); ++i) {
    os << i << ',' << fmt17(tr.times[i]);
    for (int c = 0; c < dim; ++c)
      os << ',' << fmt17(component(tr.positions[i], c));
    os << ',' << ev[i] << '\n';
  }
  finish(os, path);
}

void write_trials_csv(const std::string& path, const EnsembleStats& st) {
  auto os = open_out(path);
  os << "trial,df,r2,gate\n";
  for (const TrialEstimate& e : st.trials)
    os << e.trial << ',' << fmt17(e.dimension) << ',' << fmt17(e.r2) << ','
       << (e.gate_passed ? 1 : 0) << '\n';
  finish(os, path);
}

void write_sweep_csv(const std::string& path, const SweepTable& t) {
  auto os = open_out(path);
  os << "param,value,mean_df,sigma,ngate_fail,ntrials\n";
  for (const SweepRow& r : t.rows) {
    os << sweep_param_name(t.param) << ',' << fmt17(r.value) << ',';
    if (r.ok) os << fmt17(r.mean);
    os << ',' << (r.ok ? opt_field(r.sigma) : std::string()) << ','
       << r.gate_failures << ',' << r.trials << '\n';
  }
  finish(os, path);
}

void write_cutoff_csv(const std::string& path, const CutoffTable& t) {
  auto os = open_out(path);
  os << "value,mean_a,sigma_a,mean_b,sigma_b,delta,combined_sigma,"
        "within_1sigma\n";
  for (const CutoffRow& r : t.rows) {
    os << fmt17(r.value) << ',';
    os << (r.a.ok ? fmt17(r.a.mean) : std::string()) << ','
       << (r.a.ok ? opt_field(r.a.sigma) : std::string()) << ','
       << (r.b.ok ? fmt17(r.b.mean) : std::string()) << ','
       << (r.b.ok ? opt_field(r.b.sigma) : std::string()) << ',';
    if (r.a.ok && r.b.ok) os << fmt17(r.delta);
    os << ',' << opt_field(r.combined_sigma) << ','
       << (r.within_one_sigma ? 1 : 0) << '\n';
  }
  finish(os, path);
}

void write_survival_csv(const std::string& path, const SurvivalCurve& sc) {
  auto os = open_out(path);
  os << "step,count\n";
  for (std::size_t i = 0; i < sc.checkpoints.size(); ++i)
    os << sc.checkpoints[i] << ',' << sc.counts[i] << '\n';
  finish(os, path);
}

void write_histogram_csv(const std::string& path, const Histogram& h) {
  auto os = open_out(path);
  os << "bin_lo,bin_hi,density\n";
  for (std::size_t i = 0; i < h.density.size(); ++i)
    os << fmt17(h.edges[i]) << ',' << fmt17(h.edges[i + 1]) << ','
       << fmt17(h.density[i]) << '\n';
  finish(os, path);
}

void write_boxcount_csv(const std::string& path, const BoxCountResult& r) {
  auto os = open_out(path);
  os << "scale,count,retained\n";
  for (std::size_t i = 0; i < r.scales.size(); ++i) {
    const bool kept =
        std::find(r.retained.begin(), r.retained.end(), int(i)) !=
        r.retained.end();
    os << fmt17(r.scales[i]) << ',' << r.counts[i] << ',' << (kept ? 1 : 0)
       << '\n';
  }
  finish(os, path);
}

namespace {

// Re-parsing the %.17g text keeps the JSON number byte-identical to the CSV
// rendering; non-finite values fall back to null.
json raw17(double v) {
  if (!std::isfinite(v)) return json(nullptr);
  return json::parse(fmt17(v));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string ensemble_summary_json(const EnsembleStats& st) {
  json j;
  j["mean_df"] = raw17(st.mean);
  j["sigma"] = st.sigma ? raw17(*st.sigma) : json(nullptr);
  j["trials"] = st.trials.size();
  j["used"] = st.used;
  j["gate_failures"] = st.gate_failures;
  return dump(j);
}

std::string survival_summary_json(const SurvivalCurve& sc) {
  json j;
  j["lambda"] = raw17(sc.lambda);
  j["r2"] = raw17(sc.r2);
  j["checkpoints"] = sc.checkpoints;
  j["counts"] = sc.counts;
  return dump(j);
}

std::string levy_summary_json(const LevyFit& fit) {
  json j;
  j["alpha"] = raw17(fit.alpha);
  j["mu"] = raw17(fit.mu);
  j["sigma"] = raw17(fit.sigma);
  j["r2"] = raw17(fit.r2);
  j["fit_from"] = raw17(fit.fit_from);
  j["fit_to"] = raw17(fit.fit_to);
  j["levy_like"] = fit.levy_like;
  j["df_from_alpha"] = raw17(df_from_alpha(fit.alpha));
  return dump(j);
}

namespace {

json config_json(const SimConfig& cfg) {
  json j;
  j["dim"] = cfg.dim;
  j["dh"] = raw17(cfg.moment);
  j["lf"] = raw17(cfg.half_width);
  j["steps"] = cfg.steps;
  j["boundary"] = boundary_name(cfg.boundary);
  j["x0"] = json::array();
  for (int c = 0; c < cfg.dim; ++c) j["x0"].push_back(raw17(component(cfg.start, c)));
  j["dr"] = raw17(cfg.cutoff);
  j["eps"] = raw17(cfg.control.error_tol);
  j["dt0"] = raw17(cfg.control.dt_init);
  j["dtmin"] = raw17(cfg.control.dt_min);
  j["dtmax"] = raw17(cfg.control.dt_max);
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  return j;
}

}  // namespace

std::string config_to_json(const SimConfig& cfg) {
  return dump(config_json(cfg));
}

SimConfig config_from_json_text(const std::string& text) {
  SimConfig cfg;
  apply_config_json(cfg, text);
  return cfg;
}

void apply_config_json(SimConfig& cfg, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  try {
    for (const auto& [key, val] : j.items()) {
      if (key == "dim") cfg.dim = val.get<int>();
      else if (key == "dh") cfg.moment = val.get<double>();
      else if (key == "lf") cfg.half_width = val.get<double>();
      else if (key == "steps") cfg.steps = val.get<std::size_t>();
      else if (key == "boundary") cfg.boundary = boundary_from_name(val.get<std::string>());
      else if (key == "x0") {
        if (!val.is_array() || val.size() < 2 || val.size() > 3)
          throw InputError("x0 must be an array of 2 or 3 numbers");
        cfg.start = Vec{};
        for (std::size_t c = 0; c < val.size(); ++c)
          set_component(cfg.start, int(c), val[c].get<double>());
      } else if (key == "dr") cfg.cutoff = val.get<double>();
      else if (key == "eps") cfg.control.error_tol = val.get<double>();
      else if (key == "dt0") cfg.control.dt_init = val.get<double>();
      else if (key == "dtmin") cfg.control.dt_min = val.get<double>();
      else if (key == "dtmax") cfg.control.dt_max = val.get<double>();
      else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
      else if (key == "trials") cfg.trials = val.get<int>();
      else throw InputError("unknown config key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad config value: ") + e.what());
  }
}

bool config_has_key(const std::string& text, const std::string& key) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception&) {
    return false;
  }
  return j.is_object() && j.contains(key);
}

std::string run_manifest_json(const std::string& command, const SimConfig& cfg,
                              const std::vector<std::string>& outputs) {
  json j;
  j["tool"] = "dipole";
  j["version"] = kVersion;
  j["command"] = command;
  j["config"] = config_json(cfg);
  j["seed"] = cfg.seed;
  j["outputs"] = outputs;
  char ts[32] = {0};
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(ts, sizeof(ts), "%Y-%m-%dT%H:%M:%SZ", &tm);
  j["timestamp"] = ts;
  return dump(j);
}

void write_text_file(const std::string& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  finish(os, path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace dipole
