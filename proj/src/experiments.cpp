#include "dipole/experiments.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "dipole/errors.hpp"

namespace dipole {

const char* sweep_param_name(SweepParam p) {
  switch (p) {
    case SweepParam::Moment: return "dh";
    case SweepParam::Steps: return "steps";
    case SweepParam::HalfWidth: return "lf";
    case SweepParam::Start: return "x0";
  }
  throw InputError("unknown sweep parameter");
}

SweepParam sweep_param_from_name(const std::string& s) {
  if (s == "dh") return SweepParam::Moment;
  if (s == "steps") return SweepParam::Steps;
  if (s == "lf") return SweepParam::HalfWidth;
  if (s == "x0") return SweepParam::Start;
  throw InputError("unknown sweep parameter '" + s +
                   "' (expected dh, steps, lf or x0)");
}

void check_sweep_value(SweepParam p, double value, const SimConfig& base) {
  auto fail = [&](const char* range) {
    std::ostringstream os;
    os << "sweep value " << value << " for " << sweep_param_name(p)
       << " outside " << range;
    throw InputError(os.str());
  };
  switch (p) {
    case SweepParam::Moment:
      if (!(value >= 5.0 && value <= 100.0)) fail("[5, 100]");
      break;
    case SweepParam::Steps:
      if (!(value >= 2.5e4 && value <= 5.0e5)) fail("[2.5e4, 5e5]");
      if (value != std::floor(value)) fail("integers in [2.5e4, 5e5]");
      break;
    case SweepParam::HalfWidth:
      if (!(value >= 0.025 && value <= 0.5)) fail("[0.025, 0.5]");
      break;
    case SweepParam::Start:
      if (!(std::abs(value) < base.half_width)) fail("the open box interior");
      break;
  }
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SimConfig apply_value(const SimConfig& base, SweepParam p, double v) {
  SimConfig c = base;
  switch (p) {
    case SweepParam::Moment: c.moment = v; break;
    case SweepParam::Steps: c.steps = static_cast<std::size_t>(v); break;
    case SweepParam::HalfWidth: c.half_width = v; break;
    case SweepParam::Start: c.start = Vec{v, 0.0, 0.0}; break;
  }
  return c;
}

}  // namespace

std::uint64_t sweep_value_seed(std::uint64_t base_seed, SweepParam p,
                               double value) {
  std::uint64_t bits = 0;
  static_assert(sizeof(bits) == sizeof(value));
  std::memcpy(&bits, &value, sizeof(bits));
  std::uint64_t h = splitmix(base_seed);
  for (const char* s = sweep_param_name(p); *s; ++s)
    h = splitmix(h ^ static_cast<std::uint64_t>(*s));
  return splitmix(h ^ bits);
}

SweepTable run_sweep(const SweepSpec& spec, int workers, bool parallel) {
  if (spec.values.empty()) throw InputError("empty sweep grid");
  validate(spec.base);
  for (double v : spec.values) check_sweep_value(spec.param, v, spec.base);

  SweepTable table;
  table.param = spec.param;
  for (double v : spec.values) {
    SweepRow row;
    row.value = v;
    row.seed = sweep_value_seed(spec.base.seed, spec.param, v);
    row.trials = spec.base.trials;
    SimConfig c = apply_value(spec.base, spec.param, v);
    c.seed = row.seed;
    try {
      const EnsembleStats st =
          fractal_dimension_of_run(c, spec.depth, workers, parallel);
      row.ok = true;
      row.mean = st.mean;
      row.sigma = st.sigma;
      row.used = st.used;
      row.gate_failures = st.gate_failures;
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.gate_failures = spec.base.trials;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

CutoffTable run_cutoff_comparison(const SimConfig& base,
                                  const std::vector<double>& half_widths,
                                  double cutoff_a, double cutoff_b, int depth,
                                  int workers, bool parallel) {
  SweepSpec spec;
  spec.base = base;
  spec.param = SweepParam::HalfWidth;
  spec.values = half_widths;
  spec.depth = depth;

  spec.base.cutoff = cutoff_a;
  const SweepTable ta = run_sweep(spec, workers, parallel);
  spec.base.cutoff = cutoff_b;
  const SweepTable tb = run_sweep(spec, workers, parallel);

  CutoffTable out;
  out.cutoff_a = cutoff_a;
  out.cutoff_b = cutoff_b;
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    CutoffRow r;
    r.value = ta.rows[i].value;
    r.a = ta.rows[i];
    r.b = tb.rows[i];
    if (r.a.ok && r.b.ok) {
      r.delta = r.a.mean - r.b.mean;
      if (r.a.sigma && r.b.sigma) {
        r.combined_sigma = std::sqrt(*r.a.sigma * *r.a.sigma +
                                     *r.b.sigma * *r.b.sigma);
        r.within_one_sigma = std::abs(r.delta) <= *r.combined_sigma;
      }
    }
    out.rows.push_back(std::move(r));
  }
  return out;
}

namespace {

SimConfig cond1(int dim) {
  SimConfig c;
  c.dim = dim;
  c.moment = 60.0;
  c.half_width = 0.1;
  c.start = Vec{-0.02, 0.0, 0.0};
  c.steps = 100000;
  c.boundary = BoundaryMode::Periodic;
  return c;
}

SimConfig cond2(int dim) {
  SimConfig c = cond1(dim);
  c.half_width = 1.0;
  c.boundary = BoundaryMode::Reset;
  return c;
}

SimConfig survival(int dim) {
  SimConfig c;
  c.dim = dim;
  c.moment = 1.0;
  c.half_width = 3.0;
  c.start = Vec{1.0, 0.0, 0.0};
  c.steps = 1u << 17;
  c.boundary = BoundaryMode::Absorbing;
  return c;
}

std::map<std::string, Preset> make_presets() {
  std::map<std::string, Preset> m;
  m["fig3-cond1-2d"] = {cond1(2), "2D periodic box, dh=60, lf=0.1"};
  m["fig3-cond1-3d"] = {cond1(3), "3D periodic box, dh=60, lf=0.1"};
  m["fig3-cond2-2d"] = {cond2(2), "2D reset box, dh=60, lf=1.0"};
  m["fig3-cond2-3d"] = {cond2(3), "3D reset box, dh=60, lf=1.0"};
  m["fig4-steps-3d"] = {cond1(3), "base for the step-count sweep"};
  m["fig5-cond1-2d"] = {cond1(2), "base for the 2D periodic box-size sweep"};
  m["fig5-cond1-3d"] = {cond1(3), "base for the 3D periodic box-size sweep"};
  m["fig5-cond2-2d"] = {cond2(2), "base for the 2D reset box-size sweep"};
  m["fig5-cond2-3d"] = {cond2(3), "base for the 3D reset box-size sweep"};
  m["fig6-survival-2d"] = {survival(2), "2D absorbing box, dh=1, lf=3"};
  m["fig6-survival-3d"] = {survival(3), "3D absorbing box, dh=1, lf=3"};
  m["fig6-2d"] = m["fig6-survival-2d"];
  m["fig6-3d"] = m["fig6-survival-3d"];
  m["fig7-start-3d"] = {cond1(3), "base for the start-position sweep"};
  m["fig8-cutoff-2d"] = {cond2(2), "base for the 2D cutoff comparison"};
  m["fig8-cutoff-3d"] = {cond2(3), "base for the 3D cutoff comparison"};
  m["fig9-levy-3d"] = {cond1(3), "3D periodic box for step-length statistics"};
  return m;
}

}  // namespace

const std::map<std::string, Preset>& presets() {
  static const std::map<std::string, Preset> m = make_presets();
  return m;
}

const Preset& preset_or_throw(const std::string& name) {
  const auto& m = presets();
  const auto it = m.find(name);
  if (it != m.end()) return it->second;
  std::ostringstream os;
  os << "unknown preset '" << name << "'; known presets:";
  for (const auto& [k, v] : m) os << ' ' << k;
  throw InputError(os.str());
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw InputError("empty grid");
  const auto bad = [&] {
    throw InputError("bad grid '" + text +
                     "' (expected lo:hi:linN, lo:hi:logN or v1,v2,...)");
  };
  if (text.find(':') != std::string::npos) {
    double lo = 0, hi = 0;
    int n = 0;
    char kind[4] = {0};
    std::istringstream is(text);
    char c1 = 0, c2 = 0;
    if (!(is >> lo >> c1 >> hi >> c2) || c1 != ':' || c2 != ':') bad();
    is.read(kind, 3);
    if (!(is >> n) || n < 1) bad();
    std::string rest;
    if (is >> rest) bad();
    std::vector<double> out;
    if (std::strncmp(kind, "lin", 3) == 0) {
      for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1));
    } else if (std::strncmp(kind, "log", 3) == 0) {
      if (!(lo > 0.0) || !(hi > 0.0)) bad();
      const double llo = std::log(lo), lhi = std::log(hi);
      for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? lo
                             : std::exp(llo + (lhi - llo) * double(i) /
                                                  double(n - 1)));
    } else {
      bad();
    }
    return out;
  }
  std::vector<double> out;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) bad();
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      bad();
    }
    if (used != tok.size()) bad();
    out.push_back(v);
  }
  if (out.empty()) bad();
  return out;
}

}  // namespace dipole
