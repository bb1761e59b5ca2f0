#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "pdo/core.hpp"

namespace pdo {

enum class SymbolVariant { plain, dot, tilde };
enum class DerivativeMode { exact, finite_difference };

const char* to_string(SymbolVariant v);
SymbolVariant parse_variant(const std::string& name);
const char* to_string(DerivativeMode m);

// Class parameters a symbol claims: order m, type (rho, delta), x-regularity
// C^{holder_int, holder_frac}, xi-regularity M and matrix size N.
struct SymbolClassSpec {
  double order = 0.0;
  double rho = 1.0;
  double delta = 0.0;
  int holder_int = 0;
  double holder_frac = 0.5;
  int xi_regularity = kUnbounded;
  int matrix_dim = 1;
  SymbolVariant variant = SymbolVariant::plain;

  void validate() const;
  double holder_total() const { return holder_int + holder_frac; }
};

// Derivative oracle: returns d_xi^alpha d_x^beta a(x, xi).
using SymbolEval =
    std::function<SymbolValue(const Point& x, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta)>;
// d_xi^alpha a(infinity, xi).
using LimitEval = std::function<SymbolValue(const Point& xi, const MultiIndex& alpha)>;

// What the oracle can deliver: orders served in closed form, and hard caps
// beyond which derivatives do not exist (rough x-dependence, finite M).
struct DerivativeSupport {
  int exact_xi = 0;
  int exact_x = 0;
  int max_xi = kUnbounded;
  int max_x = kUnbounded;
};

class Symbol {
 public:
  Symbol(std::string name, int dim, SymbolClassSpec spec, SymbolEval eval, DerivativeSupport support,
         std::optional<LimitEval> limit = std::nullopt, bool x_independent = false);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const SymbolClassSpec& spec() const { return spec_; }
  int matrix_dim() const { return spec_.matrix_dim; }
  const DerivativeSupport& support() const { return support_; }
  DerivativeMode derivative_mode() const;
  bool x_independent() const { return x_independent_; }

  // d_xi^alpha d_x^beta a(x, xi); finite differences beyond the exact orders.
  SymbolValue eval(const Point& x, const Point& xi, const MultiIndex& alpha = {}, const MultiIndex& beta = {}) const;
  SymbolValue operator()(const Point& x, const Point& xi) const { return eval(x, xi); }
  Complex scalar(const Point& x, const Point& xi) const { return eval(x, xi)(0, 0); }

  bool has_limit() const { return limit_.has_value(); }
  SymbolValue limit(const Point& xi, const MultiIndex& alpha = {}) const;

  Symbol with_spec(const SymbolClassSpec& spec) const;
  Symbol renamed(const std::string& name) const;
  // Same values, every derivative taken by finite differences.
  Symbol with_finite_differences() const;

 private:
  SymbolValue finite_difference(const Point& x, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) const;

  std::string name_;
  int dim_;
  SymbolClassSpec spec_;
  std::shared_ptr<const SymbolEval> eval_;
  DerivativeSupport support_;
  std::optional<LimitEval> limit_;
  bool x_independent_;
};

// Step sizes used by the finite-difference fallback.
double xi_difference_step(const Point& xi);
inline constexpr double kXDifferenceStep = 1e-2;

// Symbol defined by values only; all derivatives by finite differences.
Symbol symbol_from_values(const std::string& name, int dim, const SymbolClassSpec& spec,
                          std::function<SymbolValue(const Point&, const Point&)> values,
                          std::optional<LimitEval> limit = std::nullopt);

// Combinators. Specs merge conservatively (weakest regularity, largest order).
Symbol sum(const Symbol& a, const Symbol& b);
Symbol product(const Symbol& a, const Symbol& b);
Symbol scale(Complex c, const Symbol& a);
// <xi>^s a(x, xi).
Symbol xi_weight(double s, const Symbol& a);
// d_xi^alpha d_x^beta a, with the class parameters the derivative inherits.
Symbol differentiate(const Symbol& a, const MultiIndex& alpha, const MultiIndex& beta = {});

}  // namespace pdo
