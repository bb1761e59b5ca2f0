#include "pdo/symbol.hpp"

#include <algorithm>
#include <cmath>

#include "pdo/errors.hpp"
#include "pdo/taylor.hpp"

namespace pdo {

const char* to_string(SymbolVariant v) {
  switch (v) {
    case SymbolVariant::plain: return "plain";
    case SymbolVariant::dot: return "dot";
    case SymbolVariant::tilde: return "tilde";
  }
  return "plain";
}

SymbolVariant parse_variant(const std::string& name) {
  if (name == "plain") return SymbolVariant::plain;
  if (name == "dot") return SymbolVariant::dot;
  if (name == "tilde") return SymbolVariant::tilde;
  throw LookupError("unknown symbol variant '" + name + "'");
}

const char* to_string(DerivativeMode m) { return m == DerivativeMode::exact ? "exact" : "finite_difference"; }

void SymbolClassSpec::validate() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0,1]");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ParameterError("delta must lie in [0,1]");
  if (holder_int < 0) throw ParameterError("holder_int must be nonnegative");
  if (!(holder_frac > 0.0 && holder_frac < 1.0)) throw ParameterError("holder_frac must lie in (0,1)");
  if (xi_regularity < 0) throw ParameterError("xi_regularity must be nonnegative");
  if (matrix_dim < 1 || matrix_dim > 4) throw ParameterError("matrix_dim must lie in 1..4");
  if (!std::isfinite(order)) throw ParameterError("order must be finite");
}

Symbol::Symbol(std::string name, int dim, SymbolClassSpec spec, SymbolEval eval, DerivativeSupport support,
               std::optional<LimitEval> limit, bool x_independent)
    : name_(std::move(name)),
      dim_(dim),
      spec_(spec),
      eval_(std::make_shared<const SymbolEval>(std::move(eval))),
      support_(support),
      limit_(std::move(limit)),
      x_independent_(x_independent) {
  if (dim != 1 && dim != 2) throw ParameterError("symbol dimension must be 1 or 2");
  spec_.validate();
}

DerivativeMode Symbol::derivative_mode() const {
  const int want_xi = std::min(support_.max_xi, std::min(spec_.xi_regularity, 3));
  const int want_x = std::min(support_.max_x, std::min(spec_.holder_int, 3));
  return support_.exact_xi >= want_xi && support_.exact_x >= want_x ? DerivativeMode::exact
                                                                     : DerivativeMode::finite_difference;
}

SymbolValue Symbol::eval(const Point& x, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) const {
  if (alpha.order() > support_.max_xi || alpha.order() > spec_.xi_regularity)
    throw CapabilityError(name_ + ": xi-derivative of order " + std::to_string(alpha.order()) +
                          " exceeds the available regularity");
  if (beta.order() > support_.max_x)
    throw CapabilityError(name_ + ": x-derivative of order " + std::to_string(beta.order()) +
                          " exceeds the available regularity");
  if (x_independent_ && !beta.is_zero()) {
    const int N = spec_.matrix_dim;
    return SymbolValue::Zero(N, N);
  }
  if (alpha.order() <= support_.exact_xi && beta.order() <= support_.exact_x) return (*eval_)(x, xi, alpha, beta);
  return finite_difference(x, xi, alpha, beta);
}

double xi_difference_step(const Point& xi) { return std::min(0.5, 0.01 * bracket(xi)); }

namespace {

// Sixth-order central stencil for a first derivative.
constexpr double kStencil[3] = {45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};

}  // namespace

SymbolValue Symbol::finite_difference(const Point& x, const Point& xi, const MultiIndex& alpha,
                                      const MultiIndex& beta) const {
  if (alpha.order() > support_.exact_xi) {
    const int axis = alpha[0] > 0 ? 0 : 1;
    const double h = xi_difference_step(xi);
    const MultiIndex lower = alpha.minus_axis(axis);
    SymbolValue acc = SymbolValue::Zero(spec_.matrix_dim, spec_.matrix_dim);
    for (int k = 1; k <= 3; ++k)
      acc += kStencil[k - 1] * (eval(x, xi.shifted(axis, k * h), lower, beta) - eval(x, xi.shifted(axis, -k * h), lower, beta));
    return acc / h;
  }
  const int axis = beta[0] > 0 ? 0 : 1;
  const double h = kXDifferenceStep;
  const MultiIndex lower = beta.minus_axis(axis);
  SymbolValue acc = SymbolValue::Zero(spec_.matrix_dim, spec_.matrix_dim);
  for (int k = 1; k <= 3; ++k)
    acc += kStencil[k - 1] * (eval(x.shifted(axis, k * h), xi, alpha, lower) - eval(x.shifted(axis, -k * h), xi, alpha, lower));
  return acc / h;
}

SymbolValue Symbol::limit(const Point& xi, const MultiIndex& alpha) const {
  if (!limit_) throw CapabilityError(name_ + ": no limit at spatial infinity");
  return (*limit_)(xi, alpha);
}

Symbol Symbol::with_spec(const SymbolClassSpec& spec) const {
  Symbol s = *this;
  spec.validate();
  if (spec.matrix_dim != spec_.matrix_dim) throw ShapeError("with_spec cannot change the matrix dimension");
  s.spec_ = spec;
  return s;
}

Symbol Symbol::renamed(const std::string& name) const {
  Symbol s = *this;
  s.name_ = name;
  return s;
}

Symbol Symbol::with_finite_differences() const {
  Symbol s = *this;
  s.support_.exact_xi = 0;
  s.support_.exact_x = 0;
  return s;
}

Symbol symbol_from_values(const std::string& name, int dim, const SymbolClassSpec& spec,
                          std::function<SymbolValue(const Point&, const Point&)> values,
                          std::optional<LimitEval> limit) {
  auto f = std::move(values);
  return Symbol(
      name, dim, spec, [f](const Point& x, const Point& xi, const MultiIndex&, const MultiIndex&) { return f(x, xi); },
      DerivativeSupport{0, 0, kUnbounded, kUnbounded}, std::move(limit));
}

namespace {

SymbolClassSpec merge_specs(const SymbolClassSpec& a, const SymbolClassSpec& b, double order) {
  SymbolClassSpec s;
  s.order = order;
  s.rho = std::min(a.rho, b.rho);
  s.delta = std::max(a.delta, b.delta);
  if (a.holder_int != b.holder_int) {
    s.holder_int = std::min(a.holder_int, b.holder_int);
    s.holder_frac = a.holder_int < b.holder_int ? a.holder_frac : b.holder_frac;
  } else {
    s.holder_int = a.holder_int;
    s.holder_frac = std::min(a.holder_frac, b.holder_frac);
  }
  s.xi_regularity = std::min(a.xi_regularity, b.xi_regularity);
  s.matrix_dim = a.matrix_dim;
  s.variant = a.variant == b.variant ? a.variant : SymbolVariant::plain;
  return s;
}

DerivativeSupport merge_support(const DerivativeSupport& a, const DerivativeSupport& b) {
  return {std::min(a.exact_xi, b.exact_xi), std::min(a.exact_x, b.exact_x), std::min(a.max_xi, b.max_xi),
          std::min(a.max_x, b.max_x)};
}

void check_compatible(const Symbol& a, const Symbol& b) {
  if (a.dim() != b.dim()) throw ShapeError("symbols live in different dimensions");
  if (a.matrix_dim() != b.matrix_dim()) throw ShapeError("symbols have different matrix dimensions");
}

}  // namespace

Symbol sum(const Symbol& a, const Symbol& b) {
  check_compatible(a, b);
  std::optional<LimitEval> lim;
  if (a.has_limit() && b.has_limit())
    lim = [a, b](const Point& xi, const MultiIndex& al) -> SymbolValue { return a.limit(xi, al) + b.limit(xi, al); };
  return Symbol(
      a.name() + "+" + b.name(), a.dim(), merge_specs(a.spec(), b.spec(), std::max(a.spec().order, b.spec().order)),
      [a, b](const Point& x, const Point& xi, const MultiIndex& al, const MultiIndex& be) -> SymbolValue {
        return a.eval(x, xi, al, be) + b.eval(x, xi, al, be);
      },
      merge_support(a.support(), b.support()), lim, a.x_independent() && b.x_independent());
}

Symbol product(const Symbol& a, const Symbol& b) {
  check_compatible(a, b);
  auto leibniz = [a, b](const Point& x, const Point& xi, const MultiIndex& al, const MultiIndex& be) -> SymbolValue {
    const int N = a.matrix_dim();
    SymbolValue acc = SymbolValue::Zero(N, N);
    for (int a0 = 0; a0 <= al[0]; ++a0)
      for (int a1 = 0; a1 <= al[1]; ++a1)
        for (int b0 = 0; b0 <= be[0]; ++b0)
          for (int b1 = 0; b1 <= be[1]; ++b1) {
            const double c = binomial(al[0], a0) * binomial(al[1], a1) * binomial(be[0], b0) * binomial(be[1], b1);
            const MultiIndex ai(a0, a1), bi(b0, b1);
            const MultiIndex ar(al[0] - a0, al[1] - a1), br(be[0] - b0, be[1] - b1);
            if (a.x_independent() && !bi.is_zero()) continue;
            if (b.x_independent() && !br.is_zero()) continue;
            acc += c * (a.eval(x, xi, ai, bi) * b.eval(x, xi, ar, br));
          }
    return acc;
  };
  std::optional<LimitEval> lim;
  if (a.has_limit() && b.has_limit())
    lim = [a, b](const Point& xi, const MultiIndex& al) -> SymbolValue {
      const int N = a.matrix_dim();
      SymbolValue acc = SymbolValue::Zero(N, N);
      for (int a0 = 0; a0 <= al[0]; ++a0)
        for (int a1 = 0; a1 <= al[1]; ++a1)
          acc += binomial(al[0], a0) * binomial(al[1], a1) *
                 (a.limit(xi, MultiIndex(a0, a1)) * b.limit(xi, MultiIndex(al[0] - a0, al[1] - a1)));
      return acc;
    };
  return Symbol(a.name() + "*" + b.name(), a.dim(), merge_specs(a.spec(), b.spec(), a.spec().order + b.spec().order),
                leibniz, merge_support(a.support(), b.support()), lim, a.x_independent() && b.x_independent());
}

Symbol scale(Complex c, const Symbol& a) {
  std::optional<LimitEval> lim;
  if (a.has_limit()) lim = [a, c](const Point& xi, const MultiIndex& al) -> SymbolValue { return c * a.limit(xi, al); };
  return Symbol(
      a.name(), a.dim(), a.spec(),
      [a, c](const Point& x, const Point& xi, const MultiIndex& al, const MultiIndex& be) -> SymbolValue {
        return c * a.eval(x, xi, al, be);
      },
      a.support(), lim, a.x_independent());
}

Symbol xi_weight(double s, const Symbol& a) {
  const int N = a.matrix_dim();
  SymbolClassSpec ws;
  ws.order = s;
  ws.holder_int = a.spec().holder_int;
  ws.holder_frac = a.spec().holder_frac;
  ws.matrix_dim = N;
  ws.variant = a.spec().variant;
  auto weight_eval = [s, N](const Point& xi, const MultiIndex& al) -> SymbolValue {
    double v = al.is_zero() ? std::pow(bracket(xi), s) : bracket_power_series(xi, s, al.order()).derivative(al);
    return SymbolValue::Identity(N, N) * Complex(v, 0.0);
  };
  Symbol w("bracket^" + std::to_string(s), a.dim(), ws,
           [weight_eval](const Point&, const Point& xi, const MultiIndex& al, const MultiIndex&) { return weight_eval(xi, al); },
           DerivativeSupport{kUnbounded, kUnbounded, kUnbounded, kUnbounded}, LimitEval(weight_eval), true);
  Symbol p = product(w, a);
  SymbolClassSpec spec = a.spec();
  spec.order += s;
  return p.with_spec(spec).renamed(a.name());
}

Symbol differentiate(const Symbol& a, const MultiIndex& alpha, const MultiIndex& beta) {
  if (alpha.is_zero() && beta.is_zero()) return a;
  const auto& sup = a.support();
  const int ka = alpha.order(), kb = beta.order();
  if (ka > sup.max_xi || ka > a.spec().xi_regularity || kb > sup.max_x)
    throw CapabilityError(a.name() + ": cannot form the requested derivative symbol");
  auto less = [](int v, int k) { return v == kUnbounded ? kUnbounded : std::max(v - k, 0); };
  SymbolClassSpec spec = a.spec();
  spec.order += -spec.rho * ka + spec.delta * kb;
  spec.xi_regularity = less(spec.xi_regularity, ka);
  spec.holder_int = std::max(spec.holder_int - kb, 0);
  DerivativeSupport support{less(sup.exact_xi, ka), less(sup.exact_x, kb), less(sup.max_xi, ka), less(sup.max_x, kb)};
  std::optional<LimitEval> lim;
  if (a.has_limit()) {
    if (kb == 0)
      lim = [a, alpha](const Point& xi, const MultiIndex& al) -> SymbolValue {
        return a.limit(xi, MultiIndex(al[0] + alpha[0], al[1] + alpha[1]));
      };
    else
      lim = [N = a.matrix_dim()](const Point&, const MultiIndex&) -> SymbolValue { return SymbolValue::Zero(N, N); };
  }
  std::string name = a.name() + "_d(" + std::to_string(alpha[0]) + "," + std::to_string(alpha[1]) + ";" +
                     std::to_string(beta[0]) + "," + std::to_string(beta[1]) + ")";
  return Symbol(
      name, a.dim(), spec,
      [a, alpha, beta](const Point& x, const Point& xi, const MultiIndex& al, const MultiIndex& be) -> SymbolValue {
        return a.eval(x, xi, MultiIndex(al[0] + alpha[0], al[1] + alpha[1]), MultiIndex(be[0] + beta[0], be[1] + beta[1]));
      },
      support, lim, a.x_independent());
}

}  // namespace pdo
