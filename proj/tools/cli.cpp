#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zeromode/dirac.hpp"
#include "zeromode/errors.hpp"
#include "zeromode/output.hpp"
#include "zeromode/potential_json.hpp"
#include "zeromode/potentials.hpp"
#include "zeromode/verify.hpp"

namespace zeromode::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
struct Flag {
  T value{};
  CLI::Option* opt = nullptr;

  bool given() const { return opt != nullptr && opt->count() > 0; }
};

template <class T>
CLI::Option* add(CLI::App* app, const std::string& name, Flag<T>& flag, const std::string& help) {
  flag.opt = app->add_option(name, flag.value, help);
  return flag.opt;
}

// ---------------------------------------------------------------------------
// Configuration file

json load_config(const Flag<std::string>& path, std::string_view command) {
  if (!path.given()) return json::object();
  std::ifstream f(path.value);
  if (!f) throw UsageError("cannot read config file '" + path.value + "'");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path.value + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  if (doc.contains("command") && doc["command"] != command) {
    throw UsageError("config file is for command '" + doc["command"].dump() + "', not '" + std::string(command) + "'");
  }
  return doc;
}

const json& section(const json& config, const char* key) {
  static const json empty = json::object();
  const auto it = config.find(key);
  if (it == config.end()) return empty;
  if (!it->is_object()) throw UsageError(std::string("config '") + key + "' must be an object");
  return *it;
}

template <class T>
T pick(const Flag<T>& flag, const json& sec, const char* key, T fallback) {
  if (flag.given()) return flag.value;
  const auto it = sec.find(key);
  if (it == sec.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("config key '") + key + "' has the wrong type");
  }
}

std::pair<double, double> pick_range(const Flag<double>& lo, const Flag<double>& hi, const json& sec, const char* key,
                                     std::pair<double, double> fallback) {
  std::pair<double, double> r = fallback;
  if (const auto it = sec.find(key); it != sec.end()) {
    if (!it->is_array() || it->size() != 2) throw UsageError(std::string("config '") + key + "' must be [lo, hi]");
    r = {(*it)[0].get<double>(), (*it)[1].get<double>()};
  }
  if (lo.given()) r.first = lo.value;
  if (hi.given()) r.second = hi.value;
  return r;
}

// ---------------------------------------------------------------------------
// Potential specification from flags and config

struct SpecFlags {
  Flag<std::string> family;
  std::map<std::string, Flag<double>> scalars;
  std::map<std::string, Flag<std::vector<double>>> lists;
  Flag<double> t;
  Flag<double> shift;
  bool negate = false;
};

const std::map<std::string, std::vector<std::string>>& family_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"one-soliton", {"eta"}},
      {"two-soliton", {"eta1", "eta2", "eps1", "eps2"}},
      {"n-soliton", {"etas", "d0s"}},
      {"periodic-one-gap", {"a", "b", "c"}},
      {"periodic-cn", {"m", "a"}},
      {"combined", {"alpha", "beta", "eta"}},
      {"constant", {"value", "period"}},
  };
  return keys;
}

json default_params(const std::string& family) {
  if (family == "one-soliton") return {{"eta", 0.5}};
  if (family == "two-soliton") return {{"eta1", 0.5}, {"eta2", 1.5}, {"eps1", 1.0}, {"eps2", 1.0}};
  if (family == "n-soliton") return {{"etas", json::array({0.5})}};
  if (family == "periodic-one-gap") return {{"a", 3.0}, {"b", 2.0}, {"c", 1.0}};
  if (family == "periodic-cn") return {{"m", 0.8}, {"a", 1.0}};
  if (family == "combined") return {{"alpha", 1.0}, {"beta", 1.0}, {"eta", 2.0}};
  return {{"value", 0.0}};
}

void add_spec_flags(CLI::App* app, SpecFlags& f) {
  std::vector<std::string> names;
  for (const auto& [name, keys] : family_keys()) names.push_back(name);
  add(app, "--family", f.family, "Potential family")->check(CLI::IsMember(names));
  const std::pair<const char*, const char*> scalars[] = {
      {"eta", "Soliton eta (one-soliton, combined)"},
      {"eta1", "First eigenvalue (two-soliton)"},
      {"eta2", "Second eigenvalue (two-soliton)"},
      {"eps1", "First constant (two-soliton)"},
      {"eps2", "Second constant (two-soliton)"},
      {"a", "Parameter a (periodic families)"},
      {"b", "Parameter b (one-gap)"},
      {"c", "Parameter c (one-gap)"},
      {"m", "Elliptic modulus (periodic-cn)"},
      {"alpha", "KdV coefficient (combined)"},
      {"beta", "mKdV coefficient (combined)"},
      {"value", "Constant value"},
      {"period", "Period of the constant potential"},
  };
  for (const auto& [key, help] : scalars) add(app, std::string("--") + key, f.scalars[key], help);
  add(app, "--etas", f.lists["etas"], "Eigenvalues (n-soliton)")->delimiter(',');
  add(app, "--d0s", f.lists["d0s"], "Norming constants d_n(0) (n-soliton)")->delimiter(',');
  add(app, "--t", f.t, "Time (n-soliton)");
  add(app, "--shift", f.shift, "Translate the potential by this amount");
  app->add_flag("--negate", f.negate, "Use -V instead of V");
}

PotentialSpec resolve_spec(const SpecFlags& f, const json& config, const std::string& default_family) {
  const json& doc = section(config, "spec");
  const std::string config_family = doc.value("family", std::string());
  const std::string family = f.family.given() ? f.family.value : !config_family.empty() ? config_family : default_family;
  if (!family_keys().contains(family)) throw UsageError("unknown family '" + family + "'");

  json params = default_params(family);
  if (config_family == family) {
    const json& cp = section(doc, "params");
    for (const auto& [k, v] : cp.items()) params[k] = v;
  }
  const auto& allowed = family_keys().at(family);
  const auto check = [&](const std::string& key) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UsageError("--" + key + " does not apply to family " + family);
    }
  };
  for (const auto& [key, flag] : f.scalars) {
    if (!flag.given()) continue;
    check(key);
    params[key] = flag.value;
  }
  for (const auto& [key, flag] : f.lists) {
    if (!flag.given()) continue;
    check(key);
    params[key] = flag.value;
  }
  // New eigenvalues invalidate configured norming constants.
  if (f.lists.at("etas").given() && !f.lists.at("d0s").given()) params.erase("d0s");

  json out = {{"family", family}, {"params", params}};
  out["t"] = pick(f.t, config_family == family ? doc : json::object(), "t", 0.0);
  double sign = config_family == family ? doc.value("sign", 1.0) : 1.0;
  if (f.negate) sign = -sign;
  if (sign != 1.0) out["sign"] = sign;
  const double shift = pick(f.shift, config_family == family ? doc : json::object(), "shift", 0.0);
  if (shift != 0.0) out["shift"] = shift;
  return spec_from_json(out);
}

// ---------------------------------------------------------------------------
// Grid and outputs

struct GridFlags {
  Flag<double> x_lo;
  Flag<double> x_hi;
  Flag<std::size_t> n;
};

void add_grid_flags(CLI::App* app, GridFlags& g) {
  add(app, "--x-lo", g.x_lo, "Grid start");
  add(app, "--x-hi", g.x_hi, "Grid end");
  add(app, "--n", g.n, "Number of grid points");
}

verify::SpatialGrid resolve_grid(const GridFlags& g, const json& config, verify::SpatialGrid fallback) {
  const json& sec = section(config, "grid");
  verify::SpatialGrid out{pick(g.x_lo, sec, "x_lo", fallback.x_lo), pick(g.x_hi, sec, "x_hi", fallback.x_hi),
                          pick(g.n, sec, "n", fallback.n)};
  if (!std::isfinite(out.x_lo) || !std::isfinite(out.x_hi) || !(out.x_lo < out.x_hi)) {
    throw UsageError("grid needs finite x_lo < x_hi");
  }
  if (out.n < 2) throw UsageError("grid needs n >= 2");
  return out;
}

std::vector<double> grid_points(const verify::SpatialGrid& g) {
  std::vector<double> xs(g.n);
  for (std::size_t i = 0; i < g.n; ++i) xs[i] = g.x_lo + (g.x_hi - g.x_lo) * static_cast<double>(i) / static_cast<double>(g.n - 1);
  return xs;
}

struct OutputFlags {
  Flag<std::string> csv;
  Flag<std::string> svg;
  Flag<std::string> json_path;
};

void add_json_flag(CLI::App* app, OutputFlags& o) { add(app, "--json", o.json_path, "Write the JSON report here"); }

std::string output_path(const Flag<std::string>& flag, const json& config, const char* key) {
  return pick(flag, section(config, "output"), key, std::string());
}

void emit_json(const json& report, const std::string& path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    output::write_file(path, text);
  }
}

std::vector<double> period_markers(const PotentialSpec& spec, double lo, double hi) {
  std::vector<double> marks;
  if (!spec.periodic()) return marks;
  const double period = *spec.period();
  for (double k = std::ceil(lo / period); k * period <= hi; k += 1.0) marks.push_back(k * period);
  return marks;
}

std::string period_label(const PotentialSpec& spec) {
  std::ostringstream s;
  s << "period " << *spec.period();
  return s.str();
}

// ---------------------------------------------------------------------------
// potential

struct PotentialCommand {
  Flag<std::string> config;
  SpecFlags spec;
  GridFlags grid;
  OutputFlags outputs;
};

int run_potential(const PotentialCommand& c, std::ostream& out) {
  const json config = load_config(c.config, "potential");
  const PotentialSpec spec = resolve_spec(c.spec, config, "one-soliton");
  const verify::SpatialGrid grid = resolve_grid(c.grid, config, {-10.0, 10.0, 2001});
  const std::vector<double> xs = grid_points(grid);
  const std::vector<double> vs = evaluate(spec, xs);

  std::ostringstream csv;
  const std::string header[] = {"x", "V"};
  const std::vector<double> cols[] = {xs, vs};
  output::write_csv(csv, header, cols);
  const std::string csv_path = output_path(c.outputs.csv, config, "csv");
  if (csv_path.empty()) {
    out << csv.str();
  } else {
    output::write_file(csv_path, csv.str());
  }
  const std::string svg_path = output_path(c.outputs.svg, config, "svg");
  if (!svg_path.empty()) {
    output::PlotOptions opts;
    opts.title = std::string(family_name(spec.family()));
    opts.markers = period_markers(spec, grid.x_lo, grid.x_hi);
    if (spec.periodic()) opts.marker_label = period_label(spec);
    const output::Series series[] = {{"V(x)", xs, vs}};
    output::write_file(svg_path, output::render_svg(series, opts));
  }
  return kSuccess;
}

// ---------------------------------------------------------------------------
// verify-mkdv

struct VerifyCommand {
  Flag<std::string> config;
  SpecFlags spec;
  GridFlags grid;
  OutputFlags outputs;
  Flag<std::vector<double>> times;
  Flag<double> threshold;
  bool freeze_t = false;
  bool zero = false;
};

NSolitonParams as_n_soliton(const PotentialSpec& spec) {
  if (const auto* p = std::get_if<NSolitonParams>(&spec.params())) return *p;
  if (const auto* p = std::get_if<OneSolitonParams>(&spec.params())) return NSolitonParams::centered({p->eta});
  if (const auto* p = std::get_if<TwoSolitonParams>(&spec.params())) {
    if (auto q = two_soliton_as_n_soliton(*p)) return *q;
    throw UsageError("two-soliton with eps1, eps2 other than +1/-1 has no determinant form to evolve in time");
  }
  throw UsageError("no time-dependent form for family " + std::string(family_name(spec.family())));
}

int run_verify(const VerifyCommand& c, std::ostream& out) {
  const json config = load_config(c.config, "verify-mkdv");
  const json& vsec = section(config, "verify");
  const std::vector<double> times = pick(c.times, vsec, "times", std::vector<double>{-1.0, 0.0, 1.0});
  const double threshold = pick(c.threshold, vsec, "threshold", 1e-4);
  const verify::SpatialGrid grid = resolve_grid(c.grid, config, {-15.0, 15.0, 6001});

  json report;
  verify::ResidualReport r;
  if (c.zero) {
    r = verify::mkdv_residual([](double, double) { return 0.0; }, 0.0, grid, times);
    report["field"] = "zero";
  } else {
    const PotentialSpec spec = resolve_spec(c.spec, config, "n-soliton");
    report["spec"] = to_json(spec);
    switch (spec.family()) {
      case Family::PeriodicOneGap:
      case Family::PeriodicCn:
      case Family::Constant:
        if (c.freeze_t) throw UsageError("--freeze-t applies to soliton families only");
        r = verify::stationary_elliptic_residual(spec, grid);
        report["equation"] = "mkdv-travelling-wave";
        break;
      case Family::CombinedOneSoliton:
        if (c.freeze_t) throw UsageError("--freeze-t applies to soliton families only");
        if (spec.sign() != 1.0 || spec.shift() != 0.0) throw UsageError("combined residual takes the untransformed profile");
        r = verify::combined_residual(std::get<CombinedParams>(spec.params()), grid, times);
        report["equation"] = "combined-kdv-mkdv";
        break;
      default: {
        const NSolitonParams p = as_n_soliton(spec);
        const double s = spec.sign();
        const double shift = spec.shift();
        const bool frozen = c.freeze_t;
        const verify::Field field = [p, s, shift, frozen](double x, double t) {
          return s * n_soliton_field(p, x - shift, frozen ? p.t : t);
        };
        r = verify::mkdv_residual(field, p.etas.back(), grid, times);
        report["equation"] = "mkdv";
        if (frozen) report["frozen_time"] = p.t;
      }
    }
  }
  report.update(output::to_json(r));
  report["threshold"] = threshold;
  const bool passed = r.residual_norm < threshold;
  report["passed"] = passed;
  emit_json(report, output_path(c.outputs.json_path, config, "json"), out);
  return passed ? kSuccess : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// zero-mode

struct SolverFlags {
  Flag<double> domain_lo;
  Flag<double> domain_hi;
  Flag<std::size_t> steps;
  Flag<double> x_match;
  Flag<double> ky_lo;
  Flag<double> ky_hi;
  Flag<std::size_t> scan_points;
};

struct ZeroModeCommand {
  Flag<std::string> config;
  SpecFlags spec;
  SolverFlags solver;
  OutputFlags outputs;
  Flag<double> tol;
  Flag<std::string> wavefunction;
};

int run_zero_mode(const ZeroModeCommand& c, std::ostream& out) {
  const json config = load_config(c.config, "zero-mode");
  const PotentialSpec spec = resolve_spec(c.spec, config, "one-soliton");
  const json& sec = section(config, "solver");

  dirac::SolverOptions opts = dirac::default_options(spec);
  const auto domain = pick_range(c.solver.domain_lo, c.solver.domain_hi, sec, "domain", {opts.domain.lo, opts.domain.hi});
  opts.domain = {domain.first, domain.second};
  opts.steps = pick(c.solver.steps, sec, "steps", opts.steps);
  opts.x_match = pick(c.solver.x_match, sec, "x_match", opts.x_match);

  dirac::ScanOptions scan;
  double top = 2.0;
  for (const double k : spec.predicted_ky()) top = std::max(top, 1.5 * k);
  const auto range = pick_range(c.solver.ky_lo, c.solver.ky_hi, sec, "ky_range", {scan.ky_lo, top});
  scan.ky_lo = range.first;
  scan.ky_hi = range.second;
  scan.scan_points = pick(c.solver.scan_points, sec, "scan_points", scan.scan_points);
  const double tol = pick(c.tol, config, "tol", 1e-3);

  const dirac::ZeroModeReport report = dirac::find_zero_modes(spec, scan, opts);
  json doc = output::to_json(report);
  doc["tol"] = tol;
  doc["solver"] = {{"domain", {opts.domain.lo, opts.domain.hi}}, {"steps", opts.steps}, {"x_match", opts.x_match}};
  const bool matched = report.matched(tol);
  doc["matched"] = matched;

  const std::string prefix = output_path(c.wavefunction, config, "wavefunction");
  if (!prefix.empty() && !report.periodic) {
    json files = json::array();
    for (std::size_t i = 0; i < report.found.size(); ++i) {
      const dirac::SpinorState state = dirac::bound_state(spec, report.found[i].ky, opts);
      std::ostringstream csv;
      output::write_spinor_csv(csv, state);
      const std::string path = prefix + "_" + std::to_string(i + 1) + ".csv";
      output::write_file(path, csv.str());
      files.push_back(path);
    }
    doc["wavefunctions"] = files;
  }
  emit_json(doc, output_path(c.outputs.json_path, config, "json"), out);
  return matched ? kSuccess : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// monodromy

struct MonodromyCommand {
  Flag<std::string> config;
  SpecFlags spec;
  OutputFlags outputs;
  Flag<std::vector<double>> ky;
  Flag<std::size_t> steps;
};

int run_monodromy(const MonodromyCommand& c, std::ostream& out) {
  const json config = load_config(c.config, "monodromy");
  const PotentialSpec spec = resolve_spec(c.spec, config, "periodic-one-gap");
  if (!spec.periodic()) {
    throw UsageError("monodromy needs a periodic family, not " + std::string(family_name(spec.family())));
  }
  const json& sec = section(config, "solver");
  const std::size_t steps = pick(c.steps, sec, "steps", std::size_t{20000});

  std::vector<double> kys = pick(c.ky, config, "ky", std::vector<double>{});
  if (kys.empty()) {
    // Informational scan around the predicted momenta.
    for (const double k : spec.predicted_ky()) {
      for (const double f : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 10.0}) kys.push_back(f * k);
    }
  }
  std::sort(kys.begin(), kys.end());
  kys.erase(std::unique(kys.begin(), kys.end()), kys.end());

  json results = json::array();
  for (const double k : kys) results.push_back(output::to_json(dirac::monodromy_trace(spec, k, steps)));
  json predicted = json::array();
  bool allowed = true;
  for (const double k : spec.predicted_ky()) {
    const dirac::MonodromyResult r = dirac::monodromy_trace(spec, k, steps);
    allowed = allowed && r.allowed;
    predicted.push_back(output::to_json(r));
  }
  const json doc = {{"spec", to_json(spec)},     {"period", *spec.period()}, {"steps", steps},
                    {"results", results},        {"predicted", predicted},   {"predicted_allowed", allowed}};
  emit_json(doc, output_path(c.outputs.json_path, config, "json"), out);
  return allowed ? kSuccess : kVerificationFailed;
}

// ---------------------------------------------------------------------------
// figures

struct Curve {
  std::string label;
  PotentialSpec spec;
};

struct Figure {
  std::string id;
  std::string title;
  verify::SpatialGrid grid;
  std::vector<Curve> curves;
};

std::string label_of(const char* fmt, std::initializer_list<double> values) {
  std::string out;
  const std::vector<double> v(values);
  std::size_t i = 0;
  for (const char* p = fmt; *p; ++p) {
    if (*p == '%' && i < v.size()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", v[i++]);
      out += buf;
    } else {
      out += *p;
    }
  }
  return out;
}

std::vector<Figure> figure_presets() {
  std::vector<Figure> figs;
  {
    Figure f{"fig1", "Two-soliton potentials", {-8.0, 8.0, 1601}, {}};
    for (const auto& p : {TwoSolitonParams{0.5, 1.5, 1.0, 1.0}, TwoSolitonParams{1.0, 2.0, 0.5, 0.6},
                          TwoSolitonParams{0.5, 0.8, 1.5, 2.6}}) {
      f.curves.push_back({label_of("eta=(%, %), eps=(%, %)", {p.eta1, p.eta2, p.eps1, p.eps2}), two_soliton(p)});
    }
    figs.push_back(std::move(f));
  }
  {
    Figure f{"fig2", "One-gap periodic potentials", {-6.0, 6.0, 1201}, {}};
    for (const auto& [a, b, c] : {std::tuple{3.0, 2.0, 1.0}, std::tuple{3.5, 2.2, 1.4}}) {
      f.curves.push_back({label_of("a=%, b=%, c=%", {a, b, c}), periodic_one_gap(PeriodicOneGapParams::make(a, b, c))});
    }
    figs.push_back(std::move(f));
  }
  {
    Figure f{"fig3", "cn periodic potentials", {-10.0, 10.0, 2001}, {}};
    for (const auto& [m, a] : {std::pair{0.8, 1.0}, std::pair{0.9, 2.0}}) {
      f.curves.push_back({label_of("m=%, a=%", {m, a}), periodic_cn(elliptic::EllipticModulus(m), a)});
    }
    figs.push_back(std::move(f));
  }
  {
    Figure f{"fig4", "Combined KdV-mKdV one-solitons", {-4.0, 4.0, 801}, {}};
    for (const auto& p : {CombinedParams{1.0, 1.0, 2.0}, CombinedParams{1.0, 2.0, 1.0}, CombinedParams{2.0, 1.0, 2.0}}) {
      f.curves.push_back({label_of("alpha=%, beta=%, eta=%", {p.alpha, p.beta, p.eta}), combined_one_soliton(p)});
    }
    figs.push_back(std::move(f));
  }
  return figs;
}

struct FiguresCommand {
  Flag<std::string> figure;
  Flag<std::string> out_dir;
};

int run_figures(const FiguresCommand& c, std::ostream& out) {
  const std::string which = c.figure.given() ? c.figure.value : "all";
  const fs::path dir = c.out_dir.given() ? fs::path(c.out_dir.value) : fs::path(".");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());

  json written = json::array();
  for (const Figure& fig : figure_presets()) {
    if (which != "all" && which != fig.id) continue;
    const std::vector<double> xs = grid_points(fig.grid);
    std::vector<std::string> header = {"x"};
    std::vector<std::vector<double>> cols = {xs};
    std::vector<output::Series> series;
    output::PlotOptions opts;
    opts.title = fig.title;
    for (std::size_t k = 0; k < fig.curves.size(); ++k) {
      header.push_back("V" + std::to_string(k + 1));
      cols.push_back(evaluate(fig.curves[k].spec, xs));
      series.push_back({fig.curves[k].label, xs, cols.back()});
      // Mark the period of the last periodic curve.
      if (fig.curves[k].spec.periodic()) {
        opts.markers = period_markers(fig.curves[k].spec, fig.grid.x_lo, fig.grid.x_hi);
        opts.marker_label = "period of " + fig.curves[k].label;
      }
    }
    std::ostringstream csv;
    output::write_csv(csv, header, cols);
    const fs::path csv_path = dir / (fig.id + ".csv");
    const fs::path svg_path = dir / (fig.id + ".svg");
    output::write_file(csv_path, csv.str());
    output::write_file(svg_path, output::render_svg(series, opts));
    written.push_back({{"figure", fig.id}, {"csv", csv_path.string()}, {"svg", svg_path.string()}});
  }
  out << written.dump(2) << "\n";
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-energy Dirac states of soliton potentials", "zeromode"};
  app.require_subcommand(1);

  PotentialCommand potential;
  CLI::App* pot = app.add_subcommand("potential", "Evaluate a potential on a grid (CSV, optional SVG)");
  add(pot, "--config", potential.config, "JSON config file");
  add_spec_flags(pot, potential.spec);
  add_grid_flags(pot, potential.grid);
  add(pot, "--csv", potential.outputs.csv, "CSV output path (default: stdout)");
  add(pot, "--svg", potential.outputs.svg, "SVG output path");

  VerifyCommand verify_cmd;
  CLI::App* ver = app.add_subcommand("verify-mkdv", "Finite-difference residual of the evolution equation");
  add(ver, "--config", verify_cmd.config, "JSON config file");
  add_spec_flags(ver, verify_cmd.spec);
  add_grid_flags(ver, verify_cmd.grid);
  add_json_flag(ver, verify_cmd.outputs);
  add(ver, "--times", verify_cmd.times, "Time samples")->delimiter(',');
  add(ver, "--threshold", verify_cmd.threshold, "Pass threshold for the residual (default 1e-4)");
  ver->add_flag("--freeze-t", verify_cmd.freeze_t, "Hold d_n at their t values (negative control)");
  ver->add_flag("--zero", verify_cmd.zero, "Check the trivial field u = 0");

  ZeroModeCommand zero;
  CLI::App* zm = app.add_subcommand("zero-mode", "Locate zero-energy bound momenta");
  add(zm, "--config", zero.config, "JSON config file");
  add_spec_flags(zm, zero.spec);
  add_json_flag(zm, zero.outputs);
  add(zm, "--domain-lo", zero.solver.domain_lo, "Integration domain start");
  add(zm, "--domain-hi", zero.solver.domain_hi, "Integration domain end");
  add(zm, "--steps", zero.solver.steps, "RK4 steps across the domain");
  add(zm, "--x-match", zero.solver.x_match, "Matching point");
  add(zm, "--ky-lo", zero.solver.ky_lo, "Scan start");
  add(zm, "--ky-hi", zero.solver.ky_hi, "Scan end");
  add(zm, "--scan-points", zero.solver.scan_points, "Scan points");
  add(zm, "--tol", zero.tol, "Match tolerance for predicted momenta (default 1e-3)");
  add(zm, "--wavefunction", zero.wavefunction, "Write bound states to PREFIX_<i>.csv");

  MonodromyCommand mono;
  CLI::App* mo = app.add_subcommand("monodromy", "One-period transfer-matrix trace");
  add(mo, "--config", mono.config, "JSON config file");
  add_spec_flags(mo, mono.spec);
  add_json_flag(mo, mono.outputs);
  add(mo, "--ky", mono.ky, "Momenta to evaluate (default: scan around predictions)")->delimiter(',');
  add(mo, "--steps", mono.steps, "RK4 steps per period");

  FiguresCommand figs;
  CLI::App* fg = app.add_subcommand("figures", "Write the figure presets as CSV and SVG");
  add(fg, "--figure", figs.figure, "fig1, fig2, fig3, fig4 or all")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "fig4", "all"}));
  add(fg, "--out-dir", figs.out_dir, "Output directory");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (pot->parsed()) return run_potential(potential, out);
    if (ver->parsed()) return run_verify(verify_cmd, out);
    if (zm->parsed()) return run_zero_mode(zero, out);
    if (mo->parsed()) return run_monodromy(mono, out);
    if (fg->parsed()) return run_figures(figs, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParameterError& e) {
    err << "error: invalid parameters: " << e.what() << "\n";
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: invalid parameters: " << e.what() << "\n";
    return kUsageError;
  } catch (const EvaluationError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IntegrationError& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace zeromode::cli
