#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "pdo/errors.hpp"
#include "pdo/gallery.hpp"
#include "pdo/profiles.hpp"
#include "report_json.hpp"

namespace pdo::cli {

namespace {

struct Options {
  // Shared.
  std::optional<int> grid;
  int dim = 1;
  std::optional<double> box;
  std::vector<int> levels;
  std::string out;
  int workers = 0;
  std::uint64_t seed = 1;
  bool strict = false;

  // Symbols: the gallery name, optionally followed by ":key=value,...".
  std::string symbol = "bessel";
  std::string right;
  GalleryParams params;
  std::string diag;

  // verify
  int alpha_cap = 3, beta_cap = 3, max_annulus = 7, points_per_annulus = 16, refinements = 2;

  // smooth
  double gamma = 0.5;
  std::optional<double> eps_tilde;
  int j_max = -1;
  std::string cutoff = "exp_bump";
  int extra_derivs = 1;

  // oscint
  std::string amplitude = "gaussian";
  std::string chi = "gaussian";
  std::optional<double> osc_box;
  std::optional<int> resolution;
  std::vector<double> epsilons;
  std::string regularizer;
  bool invariance = false;

  // compose
  int k = 1;
  bool direct_only = false;

  // apply
  std::string input = "gauss";
  double apply_s = 0.0;

  // parametrix, fredholm
  std::optional<double> R;
  std::string psi = "quintic";
  double s = 0.1;
  std::optional<double> theta;
  double threshold = 1e-6;
  double band = 0.5;
};

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw ParameterError("symbol parameter '" + key + "' expects a number, got '" + value + "'");
}

std::vector<double> parse_diag(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text, '/')) out.push_back(parse_double("diag", item));
  return out;
}

// "name:key=value,key=value" on top of base parameters.
Symbol resolve_symbol(const std::string& text, GalleryParams params) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  if (colon != std::string::npos)
    for (const auto& kv : split_list(text.substr(colon + 1), ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ParameterError("symbol parameter '" + kv + "' is not key=value");
      const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
      if (key == "m") params.m = parse_double(key, value);
      else if (key == "tau") params.tau = parse_double(key, value);
      else if (key == "c") params.c = parse_double(key, value);
      else if (key == "holder_int") params.holder_int = static_cast<int>(parse_double(key, value));
      else if (key == "g") params.g = value;
      else if (key == "v") params.v = value;
      else if (key == "diag") params.diag = parse_diag(value);
      else if (key == "window") params.window = parse_double(key, value);
      else if (key == "terms") params.terms = static_cast<int>(parse_double(key, value));
      else throw LookupError("unknown symbol parameter '" + key + "'");
    }
  return gallery(name, params);
}

Grid make_grid(const Options& o, int default_points, double default_half_length) {
  return Grid(o.dim, o.box.value_or(default_half_length), o.grid.value_or(default_points));
}

std::vector<std::string> hypothesis_only(const std::vector<std::string>& messages) {
  std::vector<std::string> out;
  for (const auto& m : messages)
    if (m.rfind("hypothesis", 0) == 0) out.push_back(m);
  return out;
}

// Output of one command: the report plus plot-ready CSV companions.
struct Outcome {
  json report;
  std::vector<std::string> warnings;
  std::map<std::string, std::string> csv;  // file name -> contents
};

std::string csv_decay(const SeminormReport& r, int dim) {
  std::ostringstream o;
  o.precision(17);
  o << "kind,alpha,beta,xi,sup\n";
  auto index = [dim](const MultiIndex& a) {
    std::string s;
    for (int i = 0; i < dim; ++i) s += (i ? " " : "") + std::to_string(a[i]);
    return s;
  };
  for (const auto& c : r.constants)
    for (const auto& [xi, sup] : c.fit.annulus_sup) o << "constant," << index(c.alpha) << "," << index(c.beta) << "," << xi << "," << sup << "\n";
  for (const auto& h : r.holder)
    for (const auto& [xi, sup] : h.fit.annulus_sup) o << "holder," << index(h.alpha) << ",," << xi << "," << sup << "\n";
  return o.str();
}

SamplingPlan verify_plan(const Options& o) {
  SamplingPlan plan;
  plan.grid = make_grid(o, o.dim == 1 ? 512 : 64, 2.0);
  plan.alpha_cap = o.alpha_cap;
  plan.beta_cap = o.beta_cap;
  plan.max_annulus = o.max_annulus;
  plan.points_per_annulus = o.points_per_annulus;
  plan.refinements = o.refinements;
  return plan;
}

Outcome cmd_verify(const Options& o) {
  const Symbol a = resolve_symbol(o.symbol, o.params);
  const SeminormReport r = verify_symbol_class(a, verify_plan(o));
  Outcome out;
  out.report = to_json(r, o.dim);
  if (!r.pass)
    out.warnings.push_back("hypothesis symbol class: measured seminorms do not support the claimed class of " + a.name());
  out.csv["decay.csv"] = csv_decay(r, o.dim);
  return out;
}

Outcome cmd_smooth(const Options& o) {
  const Symbol a = resolve_symbol(o.symbol, o.params);
  const SmoothingConfig cfg = SmoothingConfig::make(make_grid(o, o.dim == 1 ? 2048 : 64, 2.0), o.gamma,
                                                    parse_bump_profile(o.cutoff), o.j_max, o.eps_tilde.value_or(0.0));
  const SmoothingSplit sp = split(a, cfg);
  const SeminormReport sharp = verify_sharp(sp, o.extra_derivs);
  const SeminormReport flat = verify_flat(sp);
  const auto [lo, hi] = fitted_annuli(cfg);
  Outcome out;
  out.report = {{"symbol", a.name()},
                {"gamma", o.gamma},
                {"eps_tilde", sp.eps_tilde},
                {"j_max", cfg.partition.j_max()},
                {"fitted_annuli", {lo, hi}},
                {"split_residual", split_residual(sp)},
                {"sharp", to_json(sharp, o.dim)},
                {"flat", to_json(flat, o.dim)},
                {"pass", sharp.pass && flat.pass}};
  out.csv["sharp_decay.csv"] = csv_decay(sharp, o.dim);
  out.csv["flat_decay.csv"] = csv_decay(flat, o.dim);
  return out;
}

Regularizer parse_regularizer(const std::string& text, int dim) {
  const auto parts = split_list(text, ':');
  if (parts.size() < 2 || (parts[0] != "A" && parts[0] != "B"))
    throw ParameterError("regularizer '" + text + "' is not A:l[:l'] or B:l[:delta]");
  const int l = static_cast<int>(parse_double("l", parts[1]));
  if (parts[0] == "A") return Regularizer::a_type(l, parts.size() > 2 ? static_cast<int>(parse_double("l'", parts[2])) : 0);
  const Point ref = dim == 1 ? Point(0.0) : Point(0.0, 0.0);
  return Regularizer::b_type(l, parts.size() > 2 ? parse_double("delta", parts[2]) : 0.0, ref);
}

OscIntConfig osc_config(const Options& o) {
  OscIntConfig c;
  c.chi = parse_chi(o.chi);
  if (o.osc_box) c.box = *o.osc_box;
  if (o.resolution) c.resolution = *o.resolution;
  if (!o.epsilons.empty()) c.epsilon_schedule = o.epsilons;
  c.validate(o.dim);
  return c;
}

Outcome cmd_oscint(const Options& o) {
  const Amplitude a = amplitude_gallery(o.amplitude, o.dim);
  const OscIntConfig cfg = osc_config(o);
  std::optional<Regularizer> reg;
  if (!o.regularizer.empty()) reg = parse_regularizer(o.regularizer, o.dim);
  const OscIntResult r = osc_integral(a, cfg, reg);
  Outcome out;
  out.report = to_json(r);
  out.report["amplitude"] = a.name;
  out.report["regularizer"] = reg ? json(reg->label()) : json(nullptr);
  if (o.invariance) {
    const int l = o.dim + 1;
    const InvarianceReport inv =
        invariance_check(a, cfg, {Regularizer::a_type(l), Regularizer::b_type(l)}, {ChiProfile::bump});
    json entries = json::array();
    for (const auto& e : inv.entries) entries.push_back({{"label", e.label}, {"value", to_json(e.value)}, {"divergent", e.divergent}});
    out.report["invariance"] = {{"entries", entries}, {"spread", inv.spread}, {"tolerance", inv.tolerance}, {"pass", inv.pass}};
  }
  std::ostringstream csv;
  csv.precision(17);
  csv << "epsilon,re,im\n";
  for (std::size_t i = 0; i < r.diagnostics.values.size(); ++i)
    csv << r.diagnostics.epsilons[i] << "," << r.diagnostics.values[i].real() << "," << r.diagnostics.values[i].imag() << "\n";
  out.csv["schedule.csv"] = csv.str();
  return out;
}

Outcome cmd_compose(const Options& o) {
  if (o.right.empty()) throw ParameterError("compose needs --right");
  const Symbol a1 = resolve_symbol(o.symbol, o.params);
  GalleryParams base;
  base.dim = o.dim;
  const Symbol a2 = resolve_symbol(o.right, base);
  CompositionOptions opts;
  opts.plan = left_symbol_plan(o.dim, o.box.value_or(1.0));
  if (o.grid) opts.plan.grid = make_grid(o, 16, 1.0);
  if (o.resolution) opts.left.osc.resolution = *o.resolution;
  opts.quadrature_remainder = !o.direct_only;
  const CompositionResult r = sharp_expansion(a1, a2, o.k, opts);
  Outcome out;
  out.report = to_json(r);
  out.report["left"] = a1.name();
  out.report["right"] = a2.name();
  std::ostringstream csv;
  csv.precision(17);
  csv << "fit,xi,sup\n";
  for (const auto& [xi, sup] : r.fit.annulus_sup) csv << "remainder," << xi << "," << sup << "\n";
  for (const auto& [xi, sup] : r.direct_fit.annulus_sup) csv << "direct," << xi << "," << sup << "\n";
  out.csv["remainder.csv"] = csv.str();
  return out;
}

GridFunction input_function(const Options& o, const Grid& g, int components) {
  GridFunction u(g, components);
  if (o.input == "random") {
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> nd;
    for (auto& v : u.values()) v = Complex(nd(rng), nd(rng));
    return u;
  }
  std::function<Complex(const Point&)> f;
  if (o.input == "gauss") f = [](const Point& x) { return Complex(std::exp(-0.5 * x.norm_sq())); };
  else if (o.input == "sin_windowed") f = [](const Point& x) { return Complex(std::sin(x[0]) * window(x, kDefaultWindow)); };
  else throw LookupError("unknown input '" + o.input + "' (known: gauss, sin_windowed, random)");
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int c = 0; c < components; ++c) u.at(i, c) = f(g.point(i));
  return u;
}

Outcome cmd_apply(const Options& o) {
  const Symbol a = resolve_symbol(o.symbol, o.params);
  const Grid g = make_grid(o, o.dim == 1 ? 512 : 64, 1.0);
  const DiscretizedOperator op = quantize(a, g);
  const GridFunction u = input_function(o, g, op.components);
  const GridFunction v = apply(op, u);
  Outcome out;
  const double norm = operator_norm(sobolev_conjugate(op, o.apply_s));
  out.report = {{"symbol", a.name()},  {"points", g.points()}, {"half_length", g.half_length()},
                {"input", o.input},    {"input_l2", l2_norm(u)},        {"output_l2", l2_norm(v)},
                {"s", o.apply_s},      {"conjugated_norm", norm}};
  std::ostringstream csv;
  csv.precision(17);
  csv << (o.dim == 1 ? "x" : "x1,x2") << ",component,u_re,u_im,v_re,v_im\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int c = 0; c < op.components; ++c) {
      const Point x = g.point(i);
      csv << x[0] << (o.dim == 2 ? "," + std::to_string(x[1]) : "") << "," << c << "," << u.at(i, c).real() << ","
          << u.at(i, c).imag() << "," << v.at(i, c).real() << "," << v.at(i, c).imag() << "\n";
    }
  out.csv["apply.csv"] = csv.str();
  const BoundednessReport b = boundedness_probe(a, o.apply_s, {g.points()}, g.half_length());
  out.warnings = b.warnings;
  return out;
}

EllipticityPlan ellipticity_plan(const Options& o) {
  EllipticityPlan plan;
  plan.x_grid = make_grid(o, o.dim == 1 ? 64 : 16, 2.0);
  return plan;
}

Outcome cmd_parametrix(const Options& o) {
  const Symbol a = resolve_symbol(o.symbol, o.params);
  const EllipticityReport e = ellipticity_check(a, ellipticity_plan(o));
  const double R = o.R.value_or(std::max(e.R, 1.0));
  const Symbol at = xi_weight(-a.spec().order, a);
  const Symbol b = build_parametrix(at, ParametrixConfig{R, parse_psi_profile(o.psi)});
  // a~ b - psi I on the ellipticity lattice, and the size of b.
  const Grid& g = ellipticity_plan(o).x_grid;
  const int N = a.matrix_dim();
  double residual = 0.0, b_max = 0.0;
  std::ostringstream csv;
  csv.precision(17);
  csv << "x_norm,xi_norm,b_norm\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    for (int j = 0; j <= 8; ++j)
      for (const Point& xi : annulus_samples(o.dim, j, 4)) {
        const Point x = g.point(i);
        const SymbolValue bv = b.eval(x, xi);
        const double p = psi((x.norm_sq() + xi.norm_sq()) / (R * R), 0, parse_psi_profile(o.psi));
        residual = std::max(residual, max_abs(at.eval(x, xi) * bv - p * SymbolValue::Identity(N, N)));
        const double bn = max_abs(bv);
        b_max = std::max(b_max, bn);
        csv << x.norm() << "," << xi.norm() << "," << bn << "\n";
      }
  Outcome out;
  out.report = {{"symbol", a.name()},
                {"ellipticity", to_json(e)},
                {"R", R},
                {"psi_profile", o.psi},
                {"parametrix", b.name()},
                {"parametrix_spec", to_json(b.spec())},
                {"identity_residual", residual},
                {"b_max", b_max}};
  out.warnings = e.warnings;
  out.csv["parametrix.csv"] = csv.str();
  std::ostringstream prof;
  prof.precision(17);
  prof << "radius,min_normalized_det\n";
  for (const auto& [r, v] : e.det_min_profile) prof << r << "," << v << "\n";
  out.csv["det_profile.csv"] = prof.str();
  return out;
}

Outcome cmd_fredholm(const Options& o) {
  const Symbol a = resolve_symbol(o.symbol, o.params);
  FredholmExperimentConfig cfg;
  cfg.s = o.s;
  cfg.theta = o.theta;
  cfg.eps_tilde = o.eps_tilde;
  if (!o.levels.empty()) cfg.levels = o.levels;
  cfg.svd_threshold = o.threshold;
  cfg.half_length = o.box.value_or(1.0);
  cfg.band_fraction = o.band;
  cfg.R = o.R;
  cfg.psi_profile = parse_psi_profile(o.psi);
  cfg.ellipticity = ellipticity_plan(o);
  const FredholmReport r = fredholm_experiment(a, cfg);
  Outcome out;
  out.report = to_json(r);
  out.warnings = r.warnings;
  std::ostringstream csv;
  csv.precision(17);
  csv << "series,points,k,sigma\n";
  auto rows = [&csv](const std::string& series, int points, const std::vector<double>& sigma) {
    for (std::size_t k = 0; k < sigma.size(); ++k) csv << series << "," << points << "," << k + 1 << "," << sigma[k] << "\n";
  };
  for (const auto& l : r.kernel_levels) rows("operator", l.points, l.singular_values);
  for (const auto& l : r.residual_right.levels) rows("residual_right", l.points, l.singular_values);
  for (const auto& l : r.residual_left.levels) rows("residual_left", l.points, l.singular_values);
  out.csv["singular_values.csv"] = csv.str();
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << contents;
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

json gallery_json() {
  json out = json::array();
  for (const auto& e : gallery_catalog())
    out.push_back({{"name", e.name}, {"description", e.description}, {"oracle_only", e.oracle_only}});
  return out;
}

void add_symbol_options(CLI::App& app, Options& o) {
  app.add_option("--symbol", o.symbol, "Gallery symbol, optionally name:key=value,...");
  app.add_option("--m", o.params.m, "Order m");
  app.add_option("--tau", o.params.tau, "Holder fraction tau");
  app.add_option("--c", o.params.c, "Amplitude of the rough part");
  app.add_option("--holder-int,--holder_int", o.params.holder_int, "Integer x-regularity of the rough part");
  app.add_option("--g", o.params.g, "Multiplier profile (xi, ixi, gauss, bessel, one)");
  app.add_option("--v", o.params.v, "Multiplication profile (gauss, sin_windowed, weierstrass_windowed, const)");
  app.add_option("--diag", o.diag, "Orders of a diagonal Bessel system, slash separated");
  app.add_option("--window", o.params.window, "Window radius");
  app.add_option("--terms", o.params.terms, "Weierstrass terms");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Numerical experiments for pseudodifferential operators with rough symbols", "pdo"};
  // Config keys use the option names with underscores; [command] tables hold command options.
  app.set_config("--config", "", "TOML config file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--grid", o.grid, "Points per axis");
  app.add_option("--dim", o.dim, "Space dimension")->check(CLI::IsMember({1, 2}));
  app.add_option("--box", o.box, "Half length L; the periodic box is [-pi L, pi L)^n");
  app.add_option("--levels", o.levels, "Refinement levels, comma separated")->delimiter(',');
  app.add_option("--out", o.out, "Directory for the JSON report and CSV companions");
  app.add_option("--workers", o.workers, "Worker threads, 0 = hardware concurrency")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "Seed for random probes");
  app.add_flag("--strict", o.strict, "Exit with status 4 when a hypothesis is violated");
  add_symbol_options(app, o);

  auto* verify = app.add_subcommand("verify", "Estimate the seminorms of a symbol class");
  verify->add_option("--alpha-cap,--alpha_cap", o.alpha_cap);
  verify->add_option("--beta-cap,--beta_cap", o.beta_cap);
  verify->add_option("--max-annulus,--max_annulus", o.max_annulus);
  verify->add_option("--points-per-annulus,--points_per_annulus", o.points_per_annulus);
  verify->add_option("--refinements", o.refinements);

  auto* smooth = app.add_subcommand("smooth", "Split a symbol into a# + a_flat and check both");
  smooth->add_option("--gamma", o.gamma);
  smooth->add_option("--eps-tilde,--eps_tilde", o.eps_tilde);
  smooth->add_option("--j-max,--j_max", o.j_max);
  smooth->add_option("--cutoff", o.cutoff, "exp_bump or poly_bump");
  smooth->add_option("--extra-derivs,--extra_derivs", o.extra_derivs);

  auto* oscint = app.add_subcommand("oscint", "Evaluate an oscillatory integral");
  oscint->add_option("--amplitude", o.amplitude);
  oscint->add_option("--chi", o.chi, "gaussian or bump");
  oscint->add_option("--osc-box,--osc_box", o.osc_box, "Quadrature half-width per variable");
  oscint->add_option("--resolution", o.resolution, "Points per axis");
  oscint->add_option("--epsilons", o.epsilons, "Decreasing epsilon schedule")->delimiter(',');
  oscint->add_option("--regularizer", o.regularizer, "A:l[:l'] or B:l[:delta]");
  oscint->add_flag("--invariance", o.invariance, "Also compare cutoff and regularizer swaps");

  auto* compose = app.add_subcommand("compose", "Left symbol of op(a1) op(a2) and the expansion remainder");
  compose->add_option("--right", o.right, "Right factor, name:key=value,...")->required();
  compose->add_option("--k", o.k, "Expansion order")->check(CLI::NonNegativeNumber);
  compose->add_option("--resolution", o.resolution, "Oscillatory quadrature points per axis");
  compose->add_flag("--direct-only,--direct_only", o.direct_only, "Skip the theta-quadrature remainder");

  auto* apply_cmd = app.add_subcommand("apply", "Apply op(a) to a grid function");
  apply_cmd->add_option("--input", o.input, "gauss, sin_windowed or random");
  apply_cmd->add_option("--s", o.apply_s, "Sobolev index for the conjugated norm");

  auto* parametrix = app.add_subcommand("parametrix", "Ellipticity check and parametrix of a~ = a <xi>^{-m}");
  parametrix->add_option("--R", o.R, "Parametrix radius");
  parametrix->add_option("--psi", o.psi, "quintic or smooth");

  auto* fredholm = app.add_subcommand("fredholm", "Fredholm experiment");
  fredholm->add_option("--s", o.s, "Sobolev index");
  fredholm->add_option("--theta", o.theta);
  fredholm->add_option("--eps-tilde,--eps_tilde", o.eps_tilde);
  fredholm->add_option("--threshold", o.threshold, "Relative singular value threshold");
  fredholm->add_option("--band", o.band, "Residual band as a fraction of the Nyquist frequency");
  fredholm->add_option("--R", o.R, "Parametrix radius");
  fredholm->add_option("--psi", o.psi, "quintic or smooth");

  bool gallery_json_mode = false;
  auto* gallery_cmd = app.add_subcommand("gallery", "List the symbol gallery");
  gallery_cmd->add_flag("--json", gallery_json_mode, "Machine-readable listing");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg_out, msg_err;
    const int code = app.exit(e, msg_out, msg_err);
    out << msg_out.str();
    err << msg_err.str();
    return code == 0 ? kOk : kConfigError;
  }

  try {
    set_worker_count(o.workers);
    o.params.dim = o.dim;
    if (!o.diag.empty()) o.params.diag = parse_diag(o.diag);

    if (gallery_cmd->parsed()) {
      if (gallery_json_mode) {
        out << gallery_json().dump(2) << "\n";
      } else {
        for (const auto& e : gallery_catalog())
          out << e.name << (e.oracle_only ? " [oracle]" : "") << "  " << e.description << "\n";
      }
      return kOk;
    }

    std::string command;
    Outcome outcome;
    if (verify->parsed()) command = "verify", outcome = cmd_verify(o);
    else if (smooth->parsed()) command = "smooth", outcome = cmd_smooth(o);
    else if (oscint->parsed()) command = "oscint", outcome = cmd_oscint(o);
    else if (compose->parsed()) command = "compose", outcome = cmd_compose(o);
    else if (apply_cmd->parsed()) command = "apply", outcome = cmd_apply(o);
    else if (parametrix->parsed()) command = "parametrix", outcome = cmd_parametrix(o);
    else command = "fredholm", outcome = cmd_fredholm(o);

    const std::vector<std::string> warnings = hypothesis_only(outcome.warnings);
    json doc = {{"command", command}, {"arguments", args}, {"report", outcome.report}, {"warnings", warnings}};
    const std::string text = doc.dump(2) + "\n";
    out << text;
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    if (!o.out.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(o.out, ec);
      if (ec) throw IoError("cannot create '" + o.out + "': " + ec.message());
      write_file(std::filesystem::path(o.out) / (command + ".json"), text);
      for (const auto& [name, contents] : outcome.csv) write_file(std::filesystem::path(o.out) / name, contents);
    }
    return o.strict && !warnings.empty() ? kHypothesisViolation : kOk;
  } catch (const InversionError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const ConditioningError& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  } catch (const Error& e) {
    // Lookup, parameter, shape, capability and I/O errors all trace back to the configuration.
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace pdo::cli
