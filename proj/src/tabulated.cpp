#include "pdo/tabulated.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "pdo/errors.hpp"
#include "pdo/fft.hpp"

namespace pdo {

Complex derivative_factor(const Grid& grid, std::size_t freq, const MultiIndex& beta) {
  if (beta.is_zero()) return Complex(1.0, 0.0);
  const auto q = grid.axis_indices(freq);
  Complex f(1.0, 0.0);
  for (int i = 0; i < grid.dim(); ++i) {
    if (beta[i] == 0) continue;
    if (beta[i] % 2 == 1 && q[static_cast<std::size_t>(i)] == grid.points() / 2) return Complex(0.0, 0.0);
    f *= ipow(Complex(0.0, grid.frequency(q[static_cast<std::size_t>(i)])), beta[i]);
  }
  return f;
}

ColumnCoefficients sample_coefficients(const Symbol& a, const Grid& grid, const Point& xi, const MultiIndex& alpha) {
  const int N = a.matrix_dim();
  const int N2 = N * N;
  const std::size_t n = grid.size();
  ColumnCoefficients out(n * static_cast<std::size_t>(N2));
  std::vector<Complex> comp(n);
  std::vector<SymbolValue> vals(n);
  for (std::size_t k = 0; k < n; ++k) vals[k] = a.eval(grid.point(k), xi, alpha);
  for (int c = 0; c < N2; ++c) {
    for (std::size_t k = 0; k < n; ++k) comp[k] = vals[k](c / N, c % N);
    fft::forward(comp.data(), grid.dim(), grid.points());
    for (std::size_t k = 0; k < n; ++k) out[k * static_cast<std::size_t>(N2) + static_cast<std::size_t>(c)] = comp[k];
  }
  return out;
}

std::vector<Complex> column_values(const Grid& grid, int components, const ColumnCoefficients& coeffs,
                                   const MultiIndex& beta) {
  const std::size_t n = grid.size();
  const auto C = static_cast<std::size_t>(components);
  if (coeffs.size() != n * C) throw ShapeError("column coefficients do not match the grid");
  std::vector<Complex> out(n * C);
  std::vector<Complex> comp(n);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t q = 0; q < n; ++q) comp[q] = coeffs[q * C + c] * derivative_factor(grid, q, beta) * inv;
    fft::backward(comp.data(), grid.dim(), grid.points());
    for (std::size_t k = 0; k < n; ++k) out[k * C + c] = comp[k];
  }
  return out;
}

namespace {

using Key = std::tuple<double, double, int, int, int, int>;

Key make_key(const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) {
  return {xi[0], xi.dim > 1 ? xi[1] : 0.0, alpha[0], alpha[1], beta[0], beta[1]};
}

struct TableState {
  TableState(Grid g, int n, ColumnProvider p, std::size_t limit)
      : grid(g), N(n), provider(std::move(p)), cache_limit(limit) {}

  Grid grid;
  int N;
  ColumnProvider provider;
  std::size_t cache_limit;
  std::mutex mutex;
  std::map<Key, std::shared_ptr<const ColumnCoefficients>> coeffs;
  std::map<Key, std::shared_ptr<const std::vector<Complex>>> values;

  std::shared_ptr<const ColumnCoefficients> coefficients(const Point& xi, const MultiIndex& alpha) {
    const Key key = make_key(xi, alpha, MultiIndex());
    {
      std::lock_guard<std::mutex> lock(mutex);
      auto it = coeffs.find(key);
      if (it != coeffs.end()) return it->second;
    }
    auto c = std::make_shared<const ColumnCoefficients>(provider(xi, alpha));
    if (c->size() != grid.size() * static_cast<std::size_t>(N * N)) throw ShapeError("column provider returned a wrong size");
    std::lock_guard<std::mutex> lock(mutex);
    if (coeffs.size() >= cache_limit) coeffs.clear();
    coeffs.emplace(key, c);
    return c;
  }

  std::shared_ptr<const std::vector<Complex>> lattice(const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) {
    const Key key = make_key(xi, alpha, beta);
    {
      std::lock_guard<std::mutex> lock(mutex);
      auto it = values.find(key);
      if (it != values.end()) return it->second;
    }
    auto c = coefficients(xi, alpha);
    auto v = std::make_shared<const std::vector<Complex>>(column_values(grid, N * N, *c, beta));
    std::lock_guard<std::mutex> lock(mutex);
    if (values.size() >= cache_limit) values.clear();
    values.emplace(key, v);
    return v;
  }

  // Lattice index of x if it is a node (periodically), else -1.
  long node_index(const Point& x) const {
    std::size_t idx = 0;
    for (int i = 0; i < grid.dim(); ++i) {
      const double t = (x[i] - grid.coordinate(0)) / grid.spacing();
      const double r = std::round(t);
      if (std::abs(t - r) > 1e-9) return -1;
      long k = static_cast<long>(r) % grid.points();
      if (k < 0) k += grid.points();
      idx = idx * static_cast<std::size_t>(grid.points()) + static_cast<std::size_t>(k);
    }
    return static_cast<long>(idx);
  }

  SymbolValue interpolate(const Point& x, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) {
    auto c = coefficients(xi, alpha);
    const std::size_t n = grid.size();
    const int P = grid.points();
    // per-axis basis values e^{i xi_q t} (cos at Nyquist), t = x - x_0
    std::vector<std::vector<Complex>> basis(static_cast<std::size_t>(grid.dim()), std::vector<Complex>(static_cast<std::size_t>(P)));
    for (int i = 0; i < grid.dim(); ++i) {
      const double t = x[i] - grid.coordinate(0);
      for (int q = 0; q < P; ++q) {
        const double w = grid.frequency(q);
        basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(q)] =
            q == P / 2 ? Complex(std::cos(w * t), 0.0) : std::exp(Complex(0.0, w * t));
      }
    }
    SymbolValue out = SymbolValue::Zero(N, N);
    const auto C = static_cast<std::size_t>(N * N);
    for (std::size_t q = 0; q < n; ++q) {
      const auto ax = grid.axis_indices(q);
      Complex b = derivative_factor(grid, q, beta);
      if (b == Complex(0.0, 0.0)) continue;
      for (int i = 0; i < grid.dim(); ++i) b *= basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(ax[static_cast<std::size_t>(i)])];
      for (std::size_t k = 0; k < C; ++k) out(static_cast<int>(k) / N, static_cast<int>(k) % N) += (*c)[q * C + k] * b;
    }
    return out / static_cast<double>(n);
  }
};

}  // namespace

Symbol tabulated_symbol(const std::string& name, const Grid& grid, const SymbolClassSpec& spec, ColumnProvider provider,
                        const TabulatedOptions& options) {
  if (grid.dim() != 1 && grid.dim() != 2) throw ParameterError("tabulated symbols need a 1D or 2D grid");
  auto state = std::make_shared<TableState>(grid, spec.matrix_dim, std::move(provider), options.cache_limit);
  SymbolEval eval = [state](const Point& x, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) {
    const long idx = state->node_index(x);
    if (idx < 0) return state->interpolate(x, xi, alpha, beta);
    auto v = state->lattice(xi, alpha, beta);
    const int N = state->N;
    SymbolValue out(N, N);
    const auto C = static_cast<std::size_t>(N * N);
    for (std::size_t k = 0; k < C; ++k) out(static_cast<int>(k) / N, static_cast<int>(k) % N) = (*v)[static_cast<std::size_t>(idx) * C + k];
    return out;
  };
  DerivativeSupport support{options.max_xi, options.max_x, options.max_xi, options.max_x};
  return Symbol(name, grid.dim(), spec, std::move(eval), support, options.limit);
}

}  // namespace pdo
