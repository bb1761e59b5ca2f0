#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pdo/grid.hpp"
#include "pdo/oscint.hpp"
#include "pdo/symbol.hpp"
#include "pdo/verify.hpp"

namespace pdo {

// ---- Dense operators ---------------------------------------------------------------

// Dense realization of op(a) in the lattice basis; row and column index k * N + c.
// Maps H^{s + source_order} to H^{s + target_order}.
struct DiscretizedOperator {
  Eigen::MatrixXcd matrix;
  Grid grid = Grid::line(8);
  int components = 1;
  double source_order = 0.0;
  double target_order = 0.0;
  std::string symbol_ref;

  Eigen::Index size() const { return matrix.rows(); }
  double order() const { return source_order - target_order; }
};

// op(a)u(x_k) = sum_m e^{i x_k xi_m} a(x_k, xi_m) u^(xi_m) dxi. components = 0 takes N from the symbol.
DiscretizedOperator quantize(const Symbol& a, const Grid& grid, int components = 0);
DiscretizedOperator identity_operator(const Grid& grid, int components = 1);
// A B, orders composed.
DiscretizedOperator compose(const DiscretizedOperator& a, const DiscretizedOperator& b);
DiscretizedOperator subtract(const DiscretizedOperator& a, const DiscretizedOperator& b);
GridFunction apply(const DiscretizedOperator& op, const GridFunction& u);

// The lattice symbol a(x_k, xi_q) that quantize maps to this matrix (scalar operators);
// rows are x points, columns FFT-ordered frequencies.
Eigen::MatrixXcd discrete_symbol(const DiscretizedOperator& op);

// g(D) applied from the left (each column) or the right (each row); g must be even.
Eigen::MatrixXcd multiplier_left(const Eigen::MatrixXcd& m, const Grid& grid, int components,
                                 const std::function<double(const Point&)>& g);
Eigen::MatrixXcd multiplier_right(const Eigen::MatrixXcd& m, const Grid& grid, int components,
                                  const std::function<double(const Point&)>& g);
// <D>^{s + target_order} K <D>^{-(s + source_order)}: the L^2 matrix of K between its Sobolev spaces.
Eigen::MatrixXcd sobolev_conjugate(const DiscretizedOperator& op, double s);
// Orthogonal projector onto lattice modes with |xi_i| <= cutoff on every axis.
Eigen::MatrixXcd band_projector(const Grid& grid, int components, double cutoff);

// Binary row-major complex128 matrix plus a JSON header file next to it.
void export_operator(const DiscretizedOperator& op, const std::string& path_stem);

// ---- Double symbols ------------------------------------------------------------------

enum class DoubleVariant { plain, dot, hat };
const char* to_string(DoubleVariant v);

// Orders m1 (in xi), m2 (in xi'), type (rho, delta), x-regularity C^{holder_int, tau},
// xi-regularity M1 and xi'-regularity M2.
struct DoubleSymbolSpec {
  double m1 = 0.0;
  double m2 = 0.0;
  double rho = 1.0;
  double delta = 0.0;
  int holder_int = 0;
  double tau = 0.5;
  int M1 = kUnbounded;
  int M2 = kUnbounded;
  int matrix_dim = 1;
  DoubleVariant variant = DoubleVariant::plain;
};

// d_xi^alpha d_x^beta d_x'^beta' d_xi'^alpha' a(x, xi, x', xi').
using DoubleSymbolEval =
    std::function<SymbolValue(const Point& x, const Point& xi, const Point& xp, const Point& xip, const MultiIndex& alpha,
                              const MultiIndex& beta, const MultiIndex& beta_p, const MultiIndex& alpha_p)>;

// Derivative caps per slot: xi, x, x', xi'.
struct DoubleSupport {
  int xi = kUnbounded;
  int x = kUnbounded;
  int xp = kUnbounded;
  int xip = kUnbounded;
};

class DoubleSymbol {
 public:
  DoubleSymbol(std::string name, int dim, DoubleSymbolSpec spec, DoubleSymbolEval eval, DoubleSupport support = {});

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  const DoubleSymbolSpec& spec() const { return spec_; }
  int matrix_dim() const { return spec_.matrix_dim; }
  const DoubleSupport& support() const { return support_; }

  SymbolValue eval(const Point& x, const Point& xi, const Point& xp, const Point& xip, const MultiIndex& alpha = {},
                   const MultiIndex& beta = {}, const MultiIndex& beta_p = {}, const MultiIndex& alpha_p = {}) const;

 private:
  std::string name_;
  int dim_;
  DoubleSymbolSpec spec_;
  std::shared_ptr<const DoubleSymbolEval> eval_;
  DoubleSupport support_;
};

// a1(x, xi) a2(x', xi'); its operator is op(a1) op(a2).
DoubleSymbol product_double(const Symbol& a1, const Symbol& a2);
// a(x, xi'); its operator is op(a).
DoubleSymbol as_double_symbol(const Symbol& a);

// <xi; xi'> = (1 + |xi|^2 + |xi'|^2)^{1/2}.
double joint_bracket(const Point& xi, const Point& xip);

// Largest |d^{alpha,beta,beta',alpha'} a| / (<xi>^{m1 - rho|alpha| + delta|beta|} <xi'>^{m2 - rho|alpha'|}
// <xi;xi'>^{delta|beta'|}) over the plan's x points (x' = x + offsets) and annulus frequencies, all orders <= k.
double double_growth_constant(const DoubleSymbol& a, const SamplingPlan& plan, int k);

// Discrete P u = sum e^{i(x - x')xi} a(x, xi, x', xi') e^{i(x' - x'')xi'} u(x''); O(P^{3n}) evaluations.
DiscretizedOperator quantize_double(const DoubleSymbol& a, const Grid& grid);

// ---- Left symbols ---------------------------------------------------------------------

struct LeftSymbolOptions {
  OscIntConfig osc = left_symbol_oscint();
  int regularizer_order = 0;  // B^l order; 0 selects n + 1
  std::string name;

  static OscIntConfig left_symbol_oscint();
};

// Coarse plan for oscillatory-integral backed symbols: 16 x-points per axis, 2 frequencies per annulus.
SamplingPlan left_symbol_plan(int dim, double half_length = 1.0);

// min{M1 - (n + 1), M2}: the xi-regularity the reduced symbol keeps (reported, not certified).
int reduced_xi_regularity(const DoubleSymbol& a);

// a_L^theta(x, xi) = osint e^{-i y.eta} a(x, theta eta + xi, x + y, xi) dy dbar-eta, each value one
// B-regularized oscillatory integral, cached. Derivatives are taken under the integral.
Symbol left_symbol_theta(const DoubleSymbol& a, double theta, const LeftSymbolOptions& options = {});

// ---- Composition ------------------------------------------------------------------------

// a1 #_k a2 = sum_{|gamma| < k} (1 / gamma!) d_xi^gamma a1 D_x^gamma a2.
Symbol sharp_symbol(const Symbol& a1, const Symbol& a2, int k);
std::vector<Symbol> sharp_terms(const Symbol& a1, const Symbol& a2, int k);

struct CompositionOptions {
  LeftSymbolOptions left;
  SamplingPlan plan = left_symbol_plan(1);
  bool quadrature_remainder = true;  // second remainder evaluation through the theta integral
};

struct CompositionResult {
  int k = 0;
  std::optional<Symbol> a_left;
  std::vector<Symbol> expansion_terms;
  std::optional<Symbol> sharp;
  std::optional<Symbol> remainder;             // a_L minus the expansion
  std::optional<Symbol> remainder_quadrature;  // N sum int (1 - theta)^{N-1} / gamma! r_{gamma,theta}
  std::vector<std::pair<double, double>> theta_quadrature;  // (node, weight) on [0,1]
  double claimed_remainder_order = 0.0;
  double fitted_remainder_order = 0.0;  // fit of the quadrature remainder when present, else the direct one
  DecayFit fit;
  DecayFit direct_fit;
  double remainder_sup = 0.0;
  double remainder_gap = 0.0;  // max |direct - quadrature| over the plan
  double left_scale = 0.0;     // max |a_L| over the plan
  bool order_ok = false;
  std::vector<std::string> notes;
};

CompositionResult sharp_expansion(const Symbol& a1, const Symbol& a2, int k, const CompositionOptions& options = {});

// 8-node Gauss-Legendre rule on [0,1].
std::vector<std::pair<double, double>> gauss_legendre_unit();

// ---- Boundedness --------------------------------------------------------------------------

struct SobolevWindow {
  double lo = 0.0, hi = 0.0;
  double k_p = 0.0;
  bool contains(double s) const { return s > lo && s < hi; }
};

// (1 - rho) n / 2 - (1 - delta)(m~ + tau) < s < m~ + tau for p = 2.
SobolevWindow boundedness_window(const SymbolClassSpec& spec, int dim, double p = 2.0);

struct BoundednessLevel {
  int points = 0;
  double norm = 0.0;
  int iterations = 0;
};

struct BoundednessReport {
  std::string symbol;
  double s = 0.0;
  double order = 0.0;
  SobolevWindow window;
  bool in_window = false;
  std::vector<BoundednessLevel> levels;
  double ratio = 0.0;  // max / min norm
  bool pass = false;
  std::vector<std::string> warnings;
};

// Largest singular value, Lanczos on T^* T.
double operator_norm(const Eigen::MatrixXcd& t, int* iterations = nullptr, double tol = 1e-13, int max_iter = 300);

// ||<D>^s op(a) <D>^{-(s+m)}||_{L^2 -> L^2} per level on [-pi L, pi L)^n.
BoundednessReport boundedness_probe(const Symbol& a, double s, const std::vector<int>& levels, double half_length = 1.0);

}  // namespace pdo
