#include "pdo/gallery.hpp"

#include <cmath>

#include "pdo/errors.hpp"
#include "pdo/profiles.hpp"
#include "pdo/taylor.hpp"

namespace pdo {

namespace {

using XFn = std::function<Complex(const Point& x, const MultiIndex& beta)>;
using XiFn = std::function<Complex(const Point& xi, const MultiIndex& alpha)>;

struct Term {
  XFn f;
  XiFn g;
};

constexpr DerivativeSupport kAllExact{kUnbounded, kUnbounded, kUnbounded, kUnbounded};

SymbolClassSpec smooth_spec(double order, SymbolVariant variant) {
  SymbolClassSpec s;
  s.order = order;
  s.holder_int = 3;
  s.holder_frac = 0.5;
  s.variant = variant;
  return s;
}

// Scalar symbol sum_t f_t(x) g_t(xi).
Symbol separable(const std::string& name, int dim, const SymbolClassSpec& spec, std::vector<Term> terms,
                 DerivativeSupport support, std::optional<LimitEval> limit, bool x_independent) {
  auto eval = [terms](const Point& x, const Point& xi, const MultiIndex& al, const MultiIndex& be) -> SymbolValue {
    Complex s(0.0, 0.0);
    for (const auto& t : terms) {
      Complex f = t.f(x, be);
      if (f == Complex(0.0, 0.0)) continue;
      s += f * t.g(xi, al);
    }
    return scalar_value(s);
  };
  return Symbol(name, dim, spec, eval, support, std::move(limit), x_independent);
}

Complex one_x(const Point&, const MultiIndex& be) { return be.is_zero() ? 1.0 : 0.0; }
Complex one_xi(const Point&, const MultiIndex& al) { return al.is_zero() ? 1.0 : 0.0; }

XiFn bracket_fn(double m) {
  return [m](const Point& xi, const MultiIndex& al) -> Complex {
    if (al.is_zero()) return std::pow(bracket(xi), m);
    return bracket_power_series(xi, m, al.order()).derivative(al);
  };
}

// Linear coordinate z_1 (times a constant), as a function of either variable.
Complex first_coordinate(const Point& z, const MultiIndex& d) {
  if (d.is_zero()) return z[0];
  if (d[0] == 1 && d[1] == 0) return 1.0;
  return 0.0;
}

// e^{-k |z|^2}.
Complex gaussian_fn(const Point& z, const MultiIndex& d, double k) {
  if (d.is_zero()) return std::exp(-k * z.norm_sq());
  const int K = d.order();
  Series u(K, 0.0);
  for (int i = 0; i < z.dim; ++i) {
    Series v = Series::variable(K, i, z[i]);
    u += v * v;
  }
  u *= -k;
  return exp(u).derivative(d);
}

// d^beta (w(x) h(x)) by Leibniz, w the separable window.
Complex windowed(const Point& x, const MultiIndex& be, double r, const XFn& h) {
  Complex s(0.0, 0.0);
  for (int b0 = 0; b0 <= be[0]; ++b0)
    for (int b1 = 0; b1 <= be[1]; ++b1) {
      const MultiIndex bw(b0, b1), bh(be[0] - b0, be[1] - b1);
      const double wd = bw.is_zero() ? window(x, r) : window_derivative(x, r, bw);
      if (wd == 0.0) continue;
      s += binomial(be[0], b0) * binomial(be[1], b1) * wd * h(x, bh);
    }
  return s;
}

Complex sin_first(const Point& x, const MultiIndex& be) {
  if (be[1] != 0) return 0.0;
  return cos_derivatives(x[0] - 0.5 * kPi, be[0])[static_cast<std::size_t>(be[0])];
}

LimitEval limit_from(const XiFn& g, Complex factor) {
  return [g, factor](const Point& xi, const MultiIndex& al) -> SymbolValue { return scalar_value(factor * g(xi, al)); };
}

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw ParameterError("gallery symbols exist for dimension 1 or 2");
}

}  // namespace

double normalized_weierstrass(const Point& x, double tau, int holder_int, int terms, const MultiIndex& beta) {
  const double s = holder_int + tau;
  const double mass = weierstrass_mass(s, terms);
  if (x.dim == 1) return weierstrass(x[0], s, terms, beta[0]) / mass;
  double v = 0.0;
  if (beta[1] == 0) v += 0.5 * weierstrass(x[0], s, terms, beta[0]);
  if (beta[0] == 0) v += 0.5 * weierstrass(x[1], s, terms, beta[1]);
  return v / mass;
}

Symbol bessel(double m, int dim) {
  check_dim(dim);
  XiFn g = bracket_fn(m);
  return separable("bessel", dim, smooth_spec(m, SymbolVariant::plain), {Term{one_x, g}}, kAllExact, limit_from(g, 1.0),
                   true);
}

Symbol rough_elliptic(double m, double tau, double c, int holder_int, int dim, double r, int terms) {
  check_dim(dim);
  if (!(tau > 0.0 && tau < 1.0)) throw ParameterError("rough_elliptic: tau must lie in (0,1)");
  if (holder_int < 0) throw ParameterError("rough_elliptic: holder_int must be nonnegative");
  XFn rough = [tau, holder_int, terms](const Point& x, const MultiIndex& be) -> Complex {
    return normalized_weierstrass(x, tau, holder_int, terms, be);
  };
  XFn f = [c, r, rough](const Point& x, const MultiIndex& be) -> Complex {
    return (be.is_zero() ? 2.0 : 0.0) + c * windowed(x, be, r, rough);
  };
  XiFn g = bracket_fn(m);
  SymbolClassSpec spec;
  spec.order = m;
  spec.holder_int = holder_int;
  spec.holder_frac = tau;
  spec.variant = SymbolVariant::tilde;
  return separable("rough_elliptic", dim, spec, {Term{f, g}}, DerivativeSupport{kUnbounded, holder_int, kUnbounded, holder_int},
                   limit_from(g, 2.0), false);
}

Symbol multiplier(const std::string& name, int dim, double m) {
  check_dim(dim);
  XiFn g;
  double order = 0.0;
  if (name == "xi") {
    g = first_coordinate;
    order = 1.0;
  } else if (name == "ixi") {
    g = [](const Point& xi, const MultiIndex& al) { return Complex(0.0, 1.0) * first_coordinate(xi, al); };
    order = 1.0;
  } else if (name == "gauss") {
    g = [](const Point& xi, const MultiIndex& al) { return gaussian_fn(xi, al, 1.0); };
  } else if (name == "bessel") {
    g = bracket_fn(m);
    order = m;
  } else if (name == "one") {
    g = one_xi;
  } else {
    throw LookupError("unknown multiplier '" + name + "' (known: xi, ixi, gauss, bessel, one)");
  }
  return separable("multiplier:" + name, dim, smooth_spec(order, SymbolVariant::plain), {Term{one_x, g}}, kAllExact,
                   limit_from(g, 1.0), true);
}

Symbol multiplication(const std::string& name, int dim, double tau, int holder_int, double c, double r, int terms) {
  check_dim(dim);
  XFn f;
  SymbolClassSpec spec = smooth_spec(0.0, SymbolVariant::dot);
  DerivativeSupport support = kAllExact;
  std::optional<LimitEval> limit = limit_from(one_xi, 0.0);
  if (name == "gauss") {
    f = [](const Point& x, const MultiIndex& be) { return gaussian_fn(x, be, 0.5); };
  } else if (name == "sin_windowed") {
    f = [r](const Point& x, const MultiIndex& be) { return windowed(x, be, r, sin_first); };
  } else if (name == "weierstrass_windowed") {
    XFn rough = [tau, holder_int, terms](const Point& x, const MultiIndex& be) -> Complex {
      return normalized_weierstrass(x, tau, holder_int, terms, be);
    };
    f = [c, r, rough](const Point& x, const MultiIndex& be) { return c * windowed(x, be, r, rough); };
    spec.holder_int = holder_int;
    spec.holder_frac = tau;
    support = DerivativeSupport{kUnbounded, holder_int, kUnbounded, holder_int};
  } else if (name == "const") {
    f = [c](const Point&, const MultiIndex& be) -> Complex { return be.is_zero() ? c : 0.0; };
    spec.variant = SymbolVariant::plain;
    limit = limit_from(one_xi, c);
  } else {
    throw LookupError("unknown multiplication profile '" + name +
                      "' (known: gauss, sin_windowed, weierstrass_windowed, const)");
  }
  return separable("multiplication:" + name, dim, spec, {Term{f, one_xi}}, support, limit, name == "const");
}

Symbol matrix_diag(const std::vector<Symbol>& entries) {
  if (entries.empty() || entries.size() > 4) throw ParameterError("matrix_diag takes 1 to 4 entries");
  const int dim = entries.front().dim();
  SymbolClassSpec spec = entries.front().spec();
  DerivativeSupport support = entries.front().support();
  bool has_limit = true, x_indep = true;
  for (const auto& e : entries) {
    if (e.matrix_dim() != 1) throw ShapeError("matrix_diag entries must be scalar symbols");
    if (e.dim() != dim) throw ShapeError("matrix_diag entries must share the dimension");
    const auto& s = e.spec();
    spec.order = std::max(spec.order, s.order);
    spec.rho = std::min(spec.rho, s.rho);
    spec.delta = std::max(spec.delta, s.delta);
    if (s.holder_total() < spec.holder_total()) {
      spec.holder_int = s.holder_int;
      spec.holder_frac = s.holder_frac;
    }
    spec.xi_regularity = std::min(spec.xi_regularity, s.xi_regularity);
    if (s.variant != spec.variant) spec.variant = SymbolVariant::plain;
    support.exact_xi = std::min(support.exact_xi, e.support().exact_xi);
    support.exact_x = std::min(support.exact_x, e.support().exact_x);
    support.max_xi = std::min(support.max_xi, e.support().max_xi);
    support.max_x = std::min(support.max_x, e.support().max_x);
    has_limit = has_limit && e.has_limit();
    x_indep = x_indep && e.x_independent();
  }
  const int N = static_cast<int>(entries.size());
  spec.matrix_dim = N;
  auto eval = [entries, N](const Point& x, const Point& xi, const MultiIndex& al, const MultiIndex& be) -> SymbolValue {
    SymbolValue v = SymbolValue::Zero(N, N);
    for (int i = 0; i < N; ++i) v(i, i) = entries[static_cast<std::size_t>(i)].eval(x, xi, al, be)(0, 0);
    return v;
  };
  std::optional<LimitEval> limit;
  if (has_limit)
    limit = [entries, N](const Point& xi, const MultiIndex& al) -> SymbolValue {
      SymbolValue v = SymbolValue::Zero(N, N);
      for (int i = 0; i < N; ++i) v(i, i) = entries[static_cast<std::size_t>(i)].limit(xi, al)(0, 0);
      return v;
    };
  std::string name = "diag(";
  for (std::size_t i = 0; i < entries.size(); ++i) name += (i ? "," : "") + entries[i].name();
  name += ")";
  return Symbol(name, dim, spec, eval, support, limit, x_indep);
}

Symbol transport(int dim, double r) {
  check_dim(dim);
  XFn f = [r](const Point& x, const MultiIndex& be) { return windowed(x, be, r, sin_first); };
  XiFn g = [](const Point& xi, const MultiIndex& al) { return Complex(0.0, 1.0) * first_coordinate(xi, al); };
  return separable("transport", dim, smooth_spec(1.0, SymbolVariant::dot), {Term{f, g}}, kAllExact,
                   limit_from(one_xi, 0.0), false);
}

Symbol annihilation(int dim, double r) {
  check_dim(dim);
  XFn f = [r](const Point& x, const MultiIndex& be) { return windowed(x, be, r, first_coordinate); };
  XiFn g = [](const Point& xi, const MultiIndex& al) { return Complex(0.0, 1.0) * first_coordinate(xi, al); };
  return separable("annihilation", dim, smooth_spec(1.0, SymbolVariant::plain), {Term{f, one_xi}, Term{one_x, g}},
                   kAllExact, std::nullopt, false);
}

Symbol vanishing_bump(int dim) {
  check_dim(dim);
  XFn f = [](const Point& x, const MultiIndex& be) { return -gaussian_fn(x, be, 1.0); };
  XiFn g = [](const Point& xi, const MultiIndex& al) { return gaussian_fn(xi, al, 1.0); };
  return separable("vanishing_bump", dim, smooth_spec(0.0, SymbolVariant::tilde), {Term{one_x, one_xi}, Term{f, g}},
                   kAllExact, limit_from(one_xi, 1.0), false);
}

const std::vector<GalleryEntry>& gallery_catalog() {
  static const std::vector<GalleryEntry> entries = {
      {"annihilation", "x w(x) + i xi with a wide plateau window; one-dimensional kernel (calibration only)", true},
      {"bessel", "<xi>^m", false},
      {"matrix_diag", "diag(<xi>^{m_1}, ..., <xi>^{m_N}) from --diag", false},
      {"multiplication", "v(x) for v in gauss, sin_windowed, weierstrass_windowed, const", false},
      {"multiplier", "g(xi) for g in xi, ixi, gauss, bessel, one", false},
      {"rough_elliptic", "(2 + c w(x) W(x)) <xi>^m, W a normalized C^{k,tau} Weierstrass sum", false},
      {"transport", "sin(x) w(x) i xi", false},
      {"vanishing_bump", "1 - exp(-(|x|^2 + |xi|^2))", false},
  };
  return entries;
}

Symbol gallery(const std::string& name, const GalleryParams& p) {
  const double r = p.window.value_or(kDefaultWindow);
  if (name == "bessel") return bessel(p.m, p.dim);
  if (name == "rough_elliptic") return rough_elliptic(p.m, p.tau, p.c, p.holder_int, p.dim, r, p.terms);
  if (name == "multiplier") return multiplier(p.g, p.dim, p.m);
  if (name == "multiplication") return multiplication(p.v, p.dim, p.tau, p.holder_int, p.c, r, p.terms);
  if (name == "matrix_diag") {
    std::vector<Symbol> entries;
    const std::vector<double> orders = p.diag.empty() ? std::vector<double>{1.0, 1.0} : p.diag;
    for (double m : orders) entries.push_back(bessel(m, p.dim));
    return matrix_diag(entries);
  }
  if (name == "transport") return transport(p.dim, r);
  if (name == "annihilation") return annihilation(p.dim, p.window.value_or(1.4));
  if (name == "vanishing_bump") return vanishing_bump(p.dim);
  throw LookupError("unknown gallery symbol '" + name + "'");
}

}  // namespace pdo
