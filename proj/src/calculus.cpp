#include "pdo/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "pdo/errors.hpp"
#include "pdo/fft.hpp"

namespace pdo {

namespace {

// Dense matrices beyond this many rows are refused.
constexpr std::size_t kMaxDenseRows = 8192;

std::vector<Complex> unit_roots(int P, double sign) {
  std::vector<Complex> r(static_cast<std::size_t>(P));
  for (int t = 0; t < P; ++t) r[static_cast<std::size_t>(t)] = std::polar(1.0, sign * 2.0 * kPi * t / P);
  return r;
}

// Index of e^{2 pi i k.q / P} in the root table.
std::size_t phase_index(const Grid& g, std::size_t k, std::size_t q) {
  const auto kk = g.axis_indices(k);
  const auto qq = g.axis_indices(q);
  long t = 0;
  for (int ax = 0; ax < g.dim(); ++ax) t += static_cast<long>(kk[ax]) * qq[ax];
  return static_cast<std::size_t>(t % g.points());
}

void check_dense(const Grid& g, int N) {
  if (g.size() * static_cast<std::size_t>(N) > kMaxDenseRows)
    throw ParameterError("dense operator with " + std::to_string(g.size() * N) + " rows exceeds the limit of " +
                         std::to_string(kMaxDenseRows));
}

std::string point_text(const Point& p) {
  std::ostringstream s;
  s << "(" << p[0];
  if (p.dim == 2) s << ", " << p[1];
  s << ")";
  return s.str();
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) { return MultiIndex(a[0] + b[0], a[1] + b[1]); }
MultiIndex subtract_index(const MultiIndex& a, const MultiIndex& b) { return MultiIndex(a[0] - b[0], a[1] - b[1]); }

int capped(int cap, int used) { return cap == kUnbounded ? kUnbounded : cap - used; }

// In-place g(D) on the lattice vector v (one component, length P^n).
void multiplier_vector(std::vector<Complex>& v, const Grid& grid, const std::vector<double>& g) {
  fft::forward(v.data(), grid.dim(), grid.points());
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (std::size_t q = 0; q < v.size(); ++q) v[q] *= g[q] * inv;
  fft::backward(v.data(), grid.dim(), grid.points());
}

std::vector<double> multiplier_table(const Grid& grid, const std::function<double(const Point&)>& g) {
  std::vector<double> t(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) t[q] = g(grid.frequency_point(q));
  return t;
}

void check_square(const Eigen::MatrixXcd& m, const Grid& grid, int components) {
  const auto n = static_cast<Eigen::Index>(grid.size() * static_cast<std::size_t>(components));
  if (m.rows() != n || m.cols() != n) throw ShapeError("matrix does not match the lattice size");
}

}  // namespace

// ---- Dense operators ---------------------------------------------------------------

DiscretizedOperator quantize(const Symbol& a, const Grid& grid, int components) {
  if (a.dim() != grid.dim()) throw ShapeError("symbol dimension differs from the grid dimension");
  const int N = a.matrix_dim();
  if (components != 0 && components != N)
    throw ShapeError("symbol " + a.name() + " is " + std::to_string(N) + "x" + std::to_string(N) +
                     " but " + std::to_string(components) + " components were requested");
  check_dense(grid, N);
  const std::size_t S = grid.size();
  DiscretizedOperator op;
  op.grid = grid;
  op.components = N;
  op.source_order = a.spec().order;
  op.symbol_ref = a.name();
  op.matrix.resize(static_cast<Eigen::Index>(S * N), static_cast<Eigen::Index>(S * N));
  const auto roots = unit_roots(grid.points(), 1.0);
  const double inv = 1.0 / static_cast<double>(S);
  parallel_for(S, [&](std::size_t k) {
    const Point x = grid.point(k);
    std::vector<std::vector<Complex>> rows(static_cast<std::size_t>(N * N), std::vector<Complex>(S));
    for (std::size_t q = 0; q < S; ++q) {
      const SymbolValue v = a.eval(x, grid.frequency_point(q));
      const Complex ph = roots[phase_index(grid, k, q)];
      for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) rows[static_cast<std::size_t>(r * N + c)][q] = v(r, c) * ph;
    }
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) {
        auto& w = rows[static_cast<std::size_t>(r * N + c)];
        fft::forward(w.data(), grid.dim(), grid.points());
        for (std::size_t j = 0; j < S; ++j) op.matrix(static_cast<Eigen::Index>(k * N + r), static_cast<Eigen::Index>(j * N + c)) = w[j] * inv;
      }
  });
  for (Eigen::Index i = 0; i < op.matrix.size(); ++i)
    if (!std::isfinite(op.matrix.data()[i].real()) || !std::isfinite(op.matrix.data()[i].imag()))
      throw ParameterError("symbol " + a.name() + " produced non-finite lattice values");
  return op;
}

DiscretizedOperator identity_operator(const Grid& grid, int components) {
  check_dense(grid, components);
  DiscretizedOperator op;
  op.grid = grid;
  op.components = components;
  const auto n = static_cast<Eigen::Index>(grid.size() * components);
  op.matrix = Eigen::MatrixXcd::Identity(n, n);
  op.symbol_ref = "identity";
  return op;
}

DiscretizedOperator compose(const DiscretizedOperator& a, const DiscretizedOperator& b) {
  if (a.grid != b.grid || a.components != b.components) throw ShapeError("composed operators live on different lattices");
  DiscretizedOperator op;
  op.grid = a.grid;
  op.components = a.components;
  op.matrix = a.matrix * b.matrix;
  op.source_order = a.source_order + b.source_order - b.target_order;
  op.target_order = a.target_order;
  op.symbol_ref = a.symbol_ref + " o " + b.symbol_ref;
  return op;
}

DiscretizedOperator subtract(const DiscretizedOperator& a, const DiscretizedOperator& b) {
  if (a.grid != b.grid || a.components != b.components) throw ShapeError("subtracted operators live on different lattices");
  DiscretizedOperator op = a;
  op.matrix -= b.matrix;
  op.source_order = std::max(a.order(), b.order()) + a.target_order;
  op.symbol_ref = a.symbol_ref + " - " + b.symbol_ref;
  return op;
}

GridFunction apply(const DiscretizedOperator& op, const GridFunction& u) {
  if (u.grid() != op.grid || u.components() != op.components)
    throw ShapeError("grid function does not match the operator lattice");
  Eigen::Map<const Eigen::VectorXcd> v(u.values().data(), static_cast<Eigen::Index>(u.values().size()));
  Eigen::VectorXcd w = op.matrix * v;
  return GridFunction(op.grid, op.components, std::vector<Complex>(w.data(), w.data() + w.size()));
}

Eigen::MatrixXcd discrete_symbol(const DiscretizedOperator& op) {
  if (op.components != 1) throw ShapeError("discrete_symbol takes scalar operators");
  const Grid& g = op.grid;
  const std::size_t S = g.size();
  const auto roots = unit_roots(g.points(), -1.0);
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(S), static_cast<Eigen::Index>(S));
  parallel_for(S, [&](std::size_t k) {
    std::vector<Complex> w(S);
    for (std::size_t j = 0; j < S; ++j) w[j] = op.matrix(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
    fft::backward(w.data(), g.dim(), g.points());
    for (std::size_t q = 0; q < S; ++q)
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(q)) = w[q] * roots[phase_index(g, k, q)];
  });
  return out;
}

Eigen::MatrixXcd multiplier_left(const Eigen::MatrixXcd& m, const Grid& grid, int components,
                                 const std::function<double(const Point&)>& g) {
  check_square(m, grid, components);
  const auto table = multiplier_table(grid, g);
  const std::size_t S = grid.size();
  Eigen::MatrixXcd out(m.rows(), m.cols());
  parallel_for(static_cast<std::size_t>(m.cols()), [&](std::size_t col) {
    std::vector<Complex> v(S);
    for (int c = 0; c < components; ++c) {
      for (std::size_t k = 0; k < S; ++k) v[k] = m(static_cast<Eigen::Index>(k * components + c), static_cast<Eigen::Index>(col));
      multiplier_vector(v, grid, table);
      for (std::size_t k = 0; k < S; ++k) out(static_cast<Eigen::Index>(k * components + c), static_cast<Eigen::Index>(col)) = v[k];
    }
  });
  return out;
}

Eigen::MatrixXcd multiplier_right(const Eigen::MatrixXcd& m, const Grid& grid, int components,
                                  const std::function<double(const Point&)>& g) {
  // For even g the circulant g(D) is symmetric, so M g(D) acts on each row as g(D) on a vector.
  check_square(m, grid, components);
  const auto table = multiplier_table(grid, g);
  const std::size_t S = grid.size();
  Eigen::MatrixXcd out(m.rows(), m.cols());
  parallel_for(static_cast<std::size_t>(m.rows()), [&](std::size_t row) {
    std::vector<Complex> v(S);
    for (int c = 0; c < components; ++c) {
      for (std::size_t k = 0; k < S; ++k) v[k] = m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k * components + c));
      multiplier_vector(v, grid, table);
      for (std::size_t k = 0; k < S; ++k) out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k * components + c)) = v[k];
    }
  });
  return out;
}

Eigen::MatrixXcd sobolev_conjugate(const DiscretizedOperator& op, double s) {
  const double left = s + op.target_order;
  const double right = -(s + op.source_order);
  Eigen::MatrixXcd m = op.matrix;
  if (left != 0.0)
    m = multiplier_left(m, op.grid, op.components, [left](const Point& xi) { return std::pow(bracket(xi), left); });
  if (right != 0.0)
    m = multiplier_right(m, op.grid, op.components, [right](const Point& xi) { return std::pow(bracket(xi), right); });
  return m;
}

Eigen::MatrixXcd band_projector(const Grid& grid, int components, double cutoff) {
  const auto n = static_cast<Eigen::Index>(grid.size() * components);
  return multiplier_left(Eigen::MatrixXcd::Identity(n, n), grid, components, [cutoff](const Point& xi) {
    for (int i = 0; i < xi.dim; ++i)
      if (std::abs(xi[i]) > cutoff) return 0.0;
    return 1.0;
  });
}

void export_operator(const DiscretizedOperator& op, const std::string& path_stem) {
  std::ofstream bin(path_stem + ".bin", std::ios::binary);
  if (!bin) throw IoError("cannot write " + path_stem + ".bin");
  for (Eigen::Index r = 0; r < op.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < op.matrix.cols(); ++c) {
      const double v[2] = {op.matrix(r, c).real(), op.matrix(r, c).imag()};
      bin.write(reinterpret_cast<const char*>(v), sizeof v);
    }
  nlohmann::json h;
  h["shape"] = {op.matrix.rows(), op.matrix.cols()};
  h["dtype"] = "complex128";
  h["layout"] = "row-major";
  h["grid"] = {{"dim", op.grid.dim()}, {"points", op.grid.points()}, {"half_length", op.grid.half_length()}};
  h["components"] = op.components;
  h["source_order"] = op.source_order;
  h["target_order"] = op.target_order;
  h["symbol"] = op.symbol_ref;
  std::ofstream js(path_stem + ".json");
  if (!js) throw IoError("cannot write " + path_stem + ".json");
  js << h.dump(2) << "\n";
  if (!bin || !js) throw IoError("write failed for " + path_stem);
}

// ---- Double symbols ------------------------------------------------------------------

const char* to_string(DoubleVariant v) {
  switch (v) {
    case DoubleVariant::plain: return "plain";
    case DoubleVariant::dot: return "dot";
    case DoubleVariant::hat: return "hat";
  }
  return "plain";
}

DoubleSymbol::DoubleSymbol(std::string name, int dim, DoubleSymbolSpec spec, DoubleSymbolEval eval, DoubleSupport support)
    : name_(std::move(name)), dim_(dim), spec_(spec), eval_(std::make_shared<const DoubleSymbolEval>(std::move(eval))),
      support_(support) {
  if (dim != 1 && dim != 2) throw ParameterError("double symbols exist for dimension 1 or 2");
  if (spec.matrix_dim < 1 || spec.matrix_dim > 4) throw ParameterError("matrix_dim must lie in 1..4");
  if (!(spec.rho >= 0.0 && spec.rho <= 1.0) || !(spec.delta >= 0.0 && spec.delta <= 1.0))
    throw ParameterError("double symbol type (rho, delta) out of range");
}

SymbolValue DoubleSymbol::eval(const Point& x, const Point& xi, const Point& xp, const Point& xip, const MultiIndex& alpha,
                               const MultiIndex& beta, const MultiIndex& beta_p, const MultiIndex& alpha_p) const {
  if (alpha.order() > std::min(support_.xi, spec_.M1) || alpha_p.order() > std::min(support_.xip, spec_.M2))
    throw CapabilityError(name_ + ": frequency derivative exceeds the available regularity");
  if (beta.order() > support_.x || beta_p.order() > support_.xp)
    throw CapabilityError(name_ + ": space derivative exceeds the available regularity");
  return (*eval_)(x, xi, xp, xip, alpha, beta, beta_p, alpha_p);
}

DoubleSymbol product_double(const Symbol& a1, const Symbol& a2) {
  if (a1.dim() != a2.dim()) throw ShapeError("factors live in different dimensions");
  if (a1.matrix_dim() != a2.matrix_dim()) throw ShapeError("factors have different matrix dimensions");
  const auto& s1 = a1.spec();
  const auto& s2 = a2.spec();
  DoubleSymbolSpec spec;
  spec.m1 = s1.order;
  spec.m2 = s2.order;
  spec.rho = std::min(s1.rho, s2.rho);
  spec.delta = std::max(s1.delta, s2.delta);
  if (s1.holder_int != s2.holder_int) {
    spec.holder_int = std::min(s1.holder_int, s2.holder_int);
    spec.tau = s1.holder_int < s2.holder_int ? s1.holder_frac : s2.holder_frac;
  } else {
    spec.holder_int = s1.holder_int;
    spec.tau = std::min(s1.holder_frac, s2.holder_frac);
  }
  spec.M1 = s1.xi_regularity;
  spec.M2 = s2.xi_regularity;
  spec.matrix_dim = a1.matrix_dim();
  DoubleSupport sup{a1.support().max_xi, a1.support().max_x, a2.support().max_x, a2.support().max_xi};
  return DoubleSymbol(
      a1.name() + "(x,xi)*" + a2.name() + "(x',xi')", a1.dim(), spec,
      [a1, a2](const Point& x, const Point& xi, const Point& xp, const Point& xip, const MultiIndex& al,
               const MultiIndex& be, const MultiIndex& bp, const MultiIndex& ap) -> SymbolValue {
        const int N = a1.matrix_dim();
        if ((a1.x_independent() && !be.is_zero()) || (a2.x_independent() && !bp.is_zero()))
          return SymbolValue::Zero(N, N);
        return a1.eval(x, xi, al, be) * a2.eval(xp, xip, ap, bp);
      },
      sup);
}

DoubleSymbol as_double_symbol(const Symbol& a) {
  DoubleSymbolSpec spec;
  spec.m2 = a.spec().order;
  spec.rho = a.spec().rho;
  spec.delta = a.spec().delta;
  spec.holder_int = a.spec().holder_int;
  spec.tau = a.spec().holder_frac;
  spec.M2 = a.spec().xi_regularity;
  spec.matrix_dim = a.matrix_dim();
  DoubleSupport sup{kUnbounded, a.support().max_x, kUnbounded, a.support().max_xi};
  return DoubleSymbol(
      a.name() + "(x,xi')", a.dim(), spec,
      [a](const Point& x, const Point&, const Point&, const Point& xip, const MultiIndex& al, const MultiIndex& be,
          const MultiIndex& bp, const MultiIndex& ap) -> SymbolValue {
        if (!al.is_zero() || !bp.is_zero()) return SymbolValue::Zero(a.matrix_dim(), a.matrix_dim());
        return a.eval(x, xip, ap, be);
      },
      sup);
}

double joint_bracket(const Point& xi, const Point& xip) { return std::sqrt(1.0 + xi.norm_sq() + xip.norm_sq()); }

double double_growth_constant(const DoubleSymbol& a, const SamplingPlan& plan, int k) {
  if (plan.grid.dim() != a.dim()) throw ShapeError("sampling plan dimension differs from the double symbol");
  const int n = a.dim();
  std::vector<Point> xs;
  for (std::size_t i = 0; i < plan.grid.size(); i += static_cast<std::size_t>(plan.x_stride)) xs.push_back(plan.grid.point(i));
  std::vector<Point> freqs;
  for (int j = plan.min_annulus; j <= plan.max_annulus; ++j)
    for (const auto& p : annulus_samples(n, j, 2)) freqs.push_back(p);
  const double offsets[3] = {0.0, 0.5, -1.3};
  const auto& sp = a.spec();
  const auto& su = a.support();
  std::vector<std::array<MultiIndex, 4>> orders;
  for (int o0 = 0; o0 <= std::min({k, su.xi, sp.M1}); ++o0)
    for (int o1 = 0; o1 <= std::min(k, su.x); ++o1)
      for (int o2 = 0; o2 <= std::min(k, su.xp); ++o2)
        for (int o3 = 0; o3 <= std::min({k, su.xip, sp.M2}); ++o3)
          for (const auto& al : multi_indices_of_order(n, o0))
            for (const auto& be : multi_indices_of_order(n, o1))
              for (const auto& bp : multi_indices_of_order(n, o2))
                for (const auto& ap : multi_indices_of_order(n, o3)) orders.push_back({al, be, bp, ap});
  std::vector<double> best(orders.size(), 0.0);
  parallel_for(orders.size(), [&](std::size_t t) {
    const auto& [al, be, bp, ap] = orders[t];
    double m = 0.0;
    for (const Point& x : xs)
      for (double off : offsets) {
        Point xp = x;
        for (int i = 0; i < n; ++i) xp[i] += off;
        for (const Point& xi : freqs)
          for (const Point& xip : freqs) {
            const double w = std::pow(bracket(xi), sp.m1 - sp.rho * al.order() + sp.delta * be.order()) *
                             std::pow(bracket(xip), sp.m2 - sp.rho * ap.order()) *
                             std::pow(joint_bracket(xi, xip), sp.delta * bp.order());
            m = std::max(m, max_abs(a.eval(x, xi, xp, xip, al, be, bp, ap)) / w);
          }
      }
    best[t] = m;
  });
  double r = 0.0;
  for (double b : best) r = std::max(r, b);
  return r;
}

DiscretizedOperator quantize_double(const DoubleSymbol& a, const Grid& grid) {
  if (a.dim() != grid.dim()) throw ShapeError("double symbol dimension differs from the grid dimension");
  const std::size_t S = grid.size();
  if (S > 64) throw ParameterError("quantize_double is O(P^{3n}); lattices beyond 64 points are refused");
  const int N = a.matrix_dim();
  const auto roots = unit_roots(grid.points(), 1.0);
  const double inv = 1.0 / static_cast<double>(S);
  DiscretizedOperator op;
  op.grid = grid;
  op.components = N;
  op.source_order = a.spec().m1 + a.spec().m2;
  op.symbol_ref = a.name();
  op.matrix.resize(static_cast<Eigen::Index>(S * N), static_cast<Eigen::Index>(S * N));
  parallel_for(S, [&](std::size_t k) {
    const Point x = grid.point(k);
    // V[m'] = sum_j e^{2 pi i j m'/P} sum_m e^{2 pi i (k - j) m / P} a(x_k, xi_m, x_j, xi_m') / S.
    std::vector<std::vector<Complex>> V(static_cast<std::size_t>(N * N), std::vector<Complex>(S, Complex(0.0, 0.0)));
    for (std::size_t j = 0; j < S; ++j) {
      const Point xp = grid.point(j);
      for (std::size_t mp = 0; mp < S; ++mp) {
        const Point xip = grid.frequency_point(mp);
        SymbolValue t = SymbolValue::Zero(N, N);
        for (std::size_t m = 0; m < S; ++m) {
          const std::size_t e = (phase_index(grid, k, m) + grid.points() - phase_index(grid, j, m)) % grid.points();
          t += roots[e] * a.eval(x, grid.frequency_point(m), xp, xip);
        }
        const Complex ph = roots[phase_index(grid, j, mp)] * inv;
        for (int r = 0; r < N; ++r)
          for (int c = 0; c < N; ++c) V[static_cast<std::size_t>(r * N + c)][mp] += ph * t(r, c);
      }
    }
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) {
        auto& w = V[static_cast<std::size_t>(r * N + c)];
        fft::forward(w.data(), grid.dim(), grid.points());
        for (std::size_t i = 0; i < S; ++i)
          op.matrix(static_cast<Eigen::Index>(k * N + r), static_cast<Eigen::Index>(i * N + c)) = w[i] * inv;
      }
  });
  return op;
}

// ---- Left symbols ---------------------------------------------------------------------

OscIntConfig LeftSymbolOptions::left_symbol_oscint() {
  OscIntConfig c;
  c.box = 4.0 * kPi;
  c.resolution = 128;
  c.box_sensitivity = false;
  // With eps * box well below 1 the damped lattice sums are analytic in eps^2 and the
  // extrapolation sees a clean order 2; the coarser default schedule is preasymptotic here.
  c.epsilon_schedule = {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256, 1.0 / 512};
  return c;
}

SamplingPlan left_symbol_plan(int dim, double half_length) {
  SamplingPlan p;
  p.grid = Grid(dim, half_length, 16);
  p.points_per_annulus = 2;
  p.x_stride = 1;
  p.alpha_cap = 1;
  p.beta_cap = 1;
  p.refinements = 0;
  return p;
}

int reduced_xi_regularity(const DoubleSymbol& a) {
  const int M1 = std::min(a.spec().M1, a.support().xi);
  const int M2 = std::min(a.spec().M2, a.support().xip);
  const int first = capped(M1, a.dim() + 1);
  return std::min(first, M2);
}

namespace {

using LeftKey = std::tuple<double, double, double, double, int, int, int, int>;

struct LeftCache {
  std::mutex mutex;
  std::map<LeftKey, SymbolValue> values;
};

}  // namespace

Symbol left_symbol_theta(const DoubleSymbol& a, double theta, const LeftSymbolOptions& options) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ParameterError("theta must lie in [0,1]");
  const int n = a.dim();
  options.osc.validate(n);
  const int l = options.regularizer_order > 0 ? options.regularizer_order : n + 1;
  const int xi_cap = std::min(a.spec().M1, a.support().xi);
  if (theta > 0.0 && l > xi_cap)
    throw CapabilityError(a.name() + ": the B-regularizer of order " + std::to_string(l) + " needs that many xi-derivatives");
  const int nbar = reduced_xi_regularity(a);
  if (nbar < 0) throw CapabilityError(a.name() + ": reduced symbol keeps no xi-regularity");
  const auto& ds = a.spec();
  SymbolClassSpec spec;
  spec.order = ds.m1 + ds.m2;
  spec.rho = ds.rho;
  spec.delta = ds.delta;
  spec.holder_int = ds.holder_int;
  spec.holder_frac = ds.tau;
  spec.xi_regularity = nbar;
  spec.matrix_dim = ds.matrix_dim;
  const int x_cap = std::min(a.support().x, a.support().xp);
  DerivativeSupport support{kUnbounded, kUnbounded, nbar, x_cap};

  auto cache = std::make_shared<LeftCache>();
  const OscIntConfig osc = options.osc;
  const double delta = ds.delta;
  auto value = [a, theta, l, osc, delta, cache, xi_cap](const Point& x, const Point& xi, const MultiIndex& al,
                                                          const MultiIndex& be) -> SymbolValue {
    const LeftKey key{x[0], x.dim == 2 ? x[1] : 0.0, xi[0], xi.dim == 2 ? xi[1] : 0.0, al[0], al[1], be[0], be[1]};
    {
      std::lock_guard<std::mutex> lock(cache->mutex);
      auto it = cache->values.find(key);
      if (it != cache->values.end()) return it->second;
    }
    const int N = a.matrix_dim();
    const auto al_split = sub_indices(al);
    const auto be_split = sub_indices(be);
    SymbolValue out(N, N);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) {
        Amplitude amp;
        amp.name = a.name() + "|theta";
        amp.dim = a.dim();
        amp.m = theta > 0.0 ? std::max(a.spec().m1, 0.0) : 0.0;
        amp.tau = 0.0;
        amp.eta_degree = theta > 0.0 ? capped(xi_cap, al.order()) : kUnbounded;
        amp.y_degree = capped(a.support().xp, be.order());
        amp.eval = [a, x, xi, al, be, theta, r, c, al_split, be_split](const Point& y, const Point& eta,
                                                                       const MultiIndex& dal, const MultiIndex& dbe) {
          if (theta == 0.0 && !dal.is_zero()) return Complex(0.0, 0.0);
          const Point xi1 = xi + theta * eta;
          const Point xp = x + y;
          const double tf = std::pow(theta, dal.order());
          Complex acc(0.0, 0.0);
          for (const auto& [a2, w2] : al_split)
            for (const auto& [b1, w1] : be_split) {
              const SymbolValue v =
                  a.eval(x, xi1, xp, xi, add(a2, dal), b1, add(subtract_index(be, b1), dbe), subtract_index(al, a2));
              acc += w2 * w1 * v(r, c);
            }
          return tf * acc;
        };
        const OscIntResult res = osc_integral(amp, osc, Regularizer::b_type(l, delta, xi));
        if (res.diagnostics.divergent)
          throw ConditioningError("left symbol of " + a.name() + ": oscillatory integral diverges at x = " +
                                  point_text(x) + ", xi = " + point_text(xi));
        out(r, c) = res.value;
      }
    std::lock_guard<std::mutex> lock(cache->mutex);
    cache->values.emplace(key, out);
    return out;
  };
  std::ostringstream name;
  name << (options.name.empty() ? "left[" + a.name() + "]" : options.name) << "^theta=" << theta;
  return Symbol(name.str(), n, spec, value, support);
}

// ---- Composition ------------------------------------------------------------------------

std::vector<std::pair<double, double>> gauss_legendre_unit() {
  static const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
  static const double w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  std::vector<std::pair<double, double>> out;
  for (int i = 3; i >= 0; --i) out.emplace_back(0.5 * (1.0 - x[i]), 0.5 * w[i]);
  for (int i = 0; i < 4; ++i) out.emplace_back(0.5 * (1.0 + x[i]), 0.5 * w[i]);
  return out;
}

std::vector<Symbol> sharp_terms(const Symbol& a1, const Symbol& a2, int k) {
  if (k < 1) throw ParameterError("expansion length k must be >= 1");
  if (a1.dim() != a2.dim()) throw ShapeError("factors live in different dimensions");
  std::vector<Symbol> out;
  for (int o = 0; o < k; ++o)
    for (const auto& g : multi_indices_of_order(a1.dim(), o)) {
      const Complex c = ipow(Complex(0.0, -1.0), o) / g.factorial();
      Symbol t = product(differentiate(a1, g), differentiate(a2, {}, g));
      out.push_back(o == 0 ? t : scale(c, t));
    }
  return out;
}

Symbol sharp_symbol(const Symbol& a1, const Symbol& a2, int k) {
  const auto terms = sharp_terms(a1, a2, k);
  Symbol s = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) s = sum(s, terms[i]);
  SymbolClassSpec spec = s.spec();
  spec.order = a1.spec().order + a2.spec().order;
  return s.with_spec(spec).renamed(a1.name() + "#" + std::to_string(k) + a2.name());
}

namespace {

// Weighted sum of scalar-or-matrix symbols with a common spec.
Symbol weighted_sum(const std::string& name, const SymbolClassSpec& spec, std::vector<std::pair<Complex, Symbol>> parts) {
  DerivativeSupport support{kUnbounded, kUnbounded, kUnbounded, kUnbounded};
  for (const auto& [w, s] : parts) {
    support.max_xi = std::min(support.max_xi, s.support().max_xi);
    support.max_x = std::min(support.max_x, s.support().max_x);
  }
  return Symbol(
      name, parts.front().second.dim(), spec,
      [parts](const Point& x, const Point& xi, const MultiIndex& al, const MultiIndex& be) -> SymbolValue {
        const int N = parts.front().second.matrix_dim();
        SymbolValue acc = SymbolValue::Zero(N, N);
        for (const auto& [w, s] : parts) acc += w * s.eval(x, xi, al, be);
        return acc;
      },
      support);
}

}  // namespace

CompositionResult sharp_expansion(const Symbol& a1, const Symbol& a2, int k, const CompositionOptions& options) {
  if (a1.dim() != options.plan.grid.dim()) throw ShapeError("composition plan dimension differs from the symbols");
  const int n = a1.dim();
  const int l = options.left.regularizer_order > 0 ? options.left.regularizer_order : n + 1;
  if (a1.spec().xi_regularity != kUnbounded && k > a1.spec().xi_regularity - (n + 1))
    throw CapabilityError(a1.name() + ": expansion length exceeds M1 - (n + 1)");
  CompositionResult res;
  res.k = k;
  res.expansion_terms = sharp_terms(a1, a2, k);
  res.sharp = sharp_symbol(a1, a2, k);
  const auto& s1 = a1.spec();
  const auto& s2 = a2.spec();
  res.claimed_remainder_order = s1.order + s2.order - (std::min(s1.rho, s2.rho) - std::max(s1.delta, s2.delta)) * k;

  res.a_left = left_symbol_theta(product_double(a1, a2), 1.0, options.left);
  res.remainder = sum(*res.a_left, scale(-1.0, *res.sharp)).renamed("R_" + std::to_string(k));

  res.theta_quadrature = gauss_legendre_unit();
  const bool xi_ok = a1.support().max_xi >= k + l && a1.spec().xi_regularity >= k + l;
  const bool x_ok = a2.support().max_x >= k;
  if (options.quadrature_remainder && xi_ok && x_ok) {
    std::vector<std::pair<Complex, Symbol>> parts;
    for (const auto& g : multi_indices_of_order(n, k)) {
      const Symbol d1 = differentiate(a1, g);
      const Symbol d2 = scale(ipow(Complex(0.0, -1.0), k), differentiate(a2, {}, g));
      const DoubleSymbol dd = product_double(d1, d2);
      for (const auto& [t, w] : res.theta_quadrature) {
        const double c = k * w * std::pow(1.0 - t, k - 1) / g.factorial();
        parts.emplace_back(Complex(c, 0.0), left_symbol_theta(dd, t, options.left));
      }
    }
    SymbolClassSpec spec = res.remainder->spec();
    spec.order = res.claimed_remainder_order;
    res.remainder_quadrature = weighted_sum("R_" + std::to_string(k) + "^quad", spec, std::move(parts));
  } else if (options.quadrature_remainder) {
    res.notes.push_back("theta-quadrature remainder skipped: order-" + std::to_string(k) +
                        " derivatives (plus the regularizer's) are not available");
  }

  // Sample the plan.
  const SamplingPlan& plan = options.plan;
  std::vector<Point> xs;
  for (std::size_t i = 0; i < plan.grid.size(); ++i) {
    const auto kk = plan.grid.axis_indices(i);
    if (kk[0] % plan.x_stride == 0 && kk[1] % plan.x_stride == 0) xs.push_back(plan.grid.point(i));
  }
  std::vector<Point> xis;
  for (int j = plan.min_annulus; j <= plan.max_annulus; ++j)
    for (const auto& p : annulus_samples(n, j, plan.points_per_annulus)) xis.push_back(p);
  const std::size_t T = xs.size() * xis.size();
  std::vector<double> direct(T), quad(T, 0.0), gap(T, 0.0), left(T);
  parallel_for(T, [&](std::size_t t) {
    const Point& x = xs[t / xis.size()];
    const Point& xi = xis[t % xis.size()];
    const SymbolValue aL = res.a_left->eval(x, xi);
    const SymbolValue rd = aL - res.sharp->eval(x, xi);
    left[t] = max_abs(aL);
    direct[t] = max_abs(rd);
    if (res.remainder_quadrature) {
      const SymbolValue rq = res.remainder_quadrature->eval(x, xi);
      quad[t] = max_abs(rq);
      gap[t] = max_abs(rd - rq);
    }
  });
  const double lo = std::exp2(std::max(plan.min_annulus, std::min(plan.fit_from_annulus, plan.max_annulus - 3)));
  std::vector<std::pair<double, double>> pd, pq;
  for (std::size_t t = 0; t < T; ++t) {
    const double b = bracket(xis[t % xis.size()]);
    res.left_scale = std::max(res.left_scale, left[t]);
    res.remainder_gap = std::max(res.remainder_gap, gap[t]);
    if (b < lo) continue;
    pd.emplace_back(b, direct[t]);
    pq.emplace_back(b, quad[t]);
  }
  res.direct_fit = fit_decay_exponent(pd);
  res.fit = res.remainder_quadrature ? fit_decay_exponent(pq) : res.direct_fit;
  for (std::size_t t = 0; t < T; ++t) res.remainder_sup = std::max(res.remainder_sup, res.remainder_quadrature ? quad[t] : direct[t]);
  res.fitted_remainder_order = res.fit.exponent;
  res.order_ok = res.fit.exponent == -kInf || res.fit.exponent <= res.claimed_remainder_order + plan.order_tolerance;
  return res;
}

// ---- Boundedness --------------------------------------------------------------------------

SobolevWindow boundedness_window(const SymbolClassSpec& spec, int dim, double p) {
  if (!(p >= 1.0)) throw ParameterError("p must be >= 1");
  SobolevWindow w;
  const double reg = spec.holder_total();
  w.k_p = (1.0 - spec.rho) * dim * std::abs(0.5 - 1.0 / p);
  w.lo = (1.0 - spec.rho) * dim / p - (1.0 - spec.delta) * reg;
  w.hi = reg;
  return w;
}

double operator_norm(const Eigen::MatrixXcd& t, int* iterations, double tol, int max_iter) {
  const Eigen::Index n = t.cols();
  if (n == 0) return 0.0;
  // Lanczos on T^* T with full reorthogonalization; the top Ritz value converges even when
  // the leading singular values cluster, where plain power iteration stalls.
  const int steps = static_cast<int>(std::min<Eigen::Index>(n, max_iter));
  std::mt19937_64 rng(20240917);
  std::normal_distribution<double> nd;
  std::vector<Eigen::VectorXcd> basis;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(nd(rng), nd(rng));
  v.normalize();
  std::vector<double> alpha, beta;
  double lambda = 0.0;
  int it = 0;
  for (; it < steps; ++it) {
    basis.push_back(v);
    Eigen::VectorXcd w = t.adjoint() * (t * v);
    alpha.push_back(v.dot(w).real());
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q * q.dot(w);
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(it + 1, it + 1);
    for (int i = 0; i <= it; ++i) {
      tri(i, i) = alpha[i];
      if (i < it) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    const double top = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(tri, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
    const double b = w.norm();
    const bool settled = it > 0 && std::abs(top - lambda) <= tol * std::max(top, 1e-300);
    lambda = top;
    if (settled || b <= 1e-14 * std::max(top, 1e-300)) break;
    beta.push_back(b);
    v = w / b;
  }
  if (iterations) *iterations = std::min(it + 1, steps);
  return std::sqrt(std::max(lambda, 0.0));
}

BoundednessReport boundedness_probe(const Symbol& a, double s, const std::vector<int>& levels, double half_length) {
  if (levels.empty()) throw ParameterError("boundedness probe needs at least one level");
  BoundednessReport rep;
  rep.symbol = a.name();
  rep.s = s;
  rep.order = a.spec().order;
  rep.window = boundedness_window(a.spec(), a.dim());
  rep.in_window = rep.window.contains(s);
  if (!rep.in_window) {
    std::ostringstream w;
    w << "hypothesis s-window: s = " << s << " lies outside (" << rep.window.lo << ", " << rep.window.hi
      << "); probe result is out-of-theorem";
    rep.warnings.push_back(w.str());
  }
  double lo = kInf, hi = 0.0;
  for (int P : levels) {
    const Grid g(a.dim(), half_length, P);
    const DiscretizedOperator op = quantize(a, g);
    BoundednessLevel lv;
    lv.points = P;
    lv.norm = operator_norm(sobolev_conjugate(op, s), &lv.iterations);
    rep.levels.push_back(lv);
    lo = std::min(lo, lv.norm);
    hi = std::max(hi, lv.norm);
  }
  rep.ratio = lo > 0.0 ? hi / lo : kInf;
  rep.pass = std::isfinite(rep.ratio) && rep.ratio <= 1.5;
  return rep;
}

}  // namespace pdo
