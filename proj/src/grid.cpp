#include "pdo/grid.hpp"

#include <cmath>
#include <string>

#include "pdo/errors.hpp"
#include "pdo/fft.hpp"

namespace pdo {

bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

Grid::Grid(int dim, double half_length, int points_per_axis)
    : dim_(dim), L_(half_length), P_(points_per_axis) {
  if (dim != 1 && dim != 2) throw ParameterError("grid dimension must be 1 or 2, got " + std::to_string(dim));
  if (!(half_length > 0.0) || !std::isfinite(half_length))
    throw ParameterError("grid half length must be positive");
  if (points_per_axis < 2 || !is_power_of_two(points_per_axis))
    throw ParameterError("points per axis must be a power of two >= 2, got " + std::to_string(points_per_axis));
}

std::size_t Grid::size() const {
  return dim_ == 1 ? static_cast<std::size_t>(P_) : static_cast<std::size_t>(P_) * P_;
}

std::array<int, 2> Grid::axis_indices(std::size_t index) const {
  if (dim_ == 1) return {static_cast<int>(index), 0};
  return {static_cast<int>(index / P_), static_cast<int>(index % P_)};
}

Point Grid::point(std::size_t index) const {
  auto k = axis_indices(index);
  if (dim_ == 1) return Point(coordinate(k[0]));
  return Point(coordinate(k[0]), coordinate(k[1]));
}

Point Grid::frequency_point(std::size_t index) const {
  auto q = axis_indices(index);
  if (dim_ == 1) return Point(frequency(q[0]));
  return Point(frequency(q[0]), frequency(q[1]));
}

double Grid::quadrature_weight() const { return std::pow(spacing(), dim_); }
double Grid::frequency_weight() const { return std::pow(1.0 / box_length(), dim_); }

namespace {

void check_finite(const std::vector<Complex>& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ParameterError("grid function contains non-finite entries");
}

void check_shape(const Grid& g, int components, std::size_t count) {
  if (components < 1) throw ShapeError("component dimension must be >= 1");
  if (count != g.size() * static_cast<std::size_t>(components))
    throw ShapeError("value count " + std::to_string(count) + " does not match lattice size " +
                     std::to_string(g.size()) + " x " + std::to_string(components));
}

// (-1)^(q0 + q1) for an FFT-order index; equals (-1)^m since P is even.
double parity(const Grid& g, std::size_t index) {
  auto q = g.axis_indices(index);
  return ((q[0] + q[1]) & 1) ? -1.0 : 1.0;
}

}  // namespace

GridFunction::GridFunction(Grid grid, int components, std::vector<Complex> values)
    : grid_(grid), N_(components), values_(std::move(values)) {
  check_shape(grid_, N_, values_.size());
  check_finite(values_);
}

GridFunction::GridFunction(Grid grid, int components)
    : grid_(grid), N_(components), values_(grid.size() * static_cast<std::size_t>(std::max(components, 1))) {
  check_shape(grid_, N_, values_.size());
}

GridFunction GridFunction::sample(const Grid& grid, const std::function<Complex(const Point&)>& f) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.point(i));
  return GridFunction(grid, 1, std::move(v));
}

std::vector<Complex> GridFunction::component(int c) const {
  std::vector<Complex> out(grid_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, c);
  return out;
}

void GridFunction::set_component(int c, const std::vector<Complex>& data) {
  if (data.size() != grid_.size()) throw ShapeError("component length mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) at(i, c) = data[i];
}

FourierCoefficients::FourierCoefficients(Grid grid, int components, std::vector<Complex> values)
    : grid_(grid), N_(components), values_(std::move(values)) {
  check_shape(grid_, N_, values_.size());
}

FourierCoefficients forward_fourier(const GridFunction& u) {
  const Grid& g = u.grid();
  std::vector<Complex> out(u.values().size());
  const double w = g.quadrature_weight();
  for (int c = 0; c < u.components(); ++c) {
    auto col = u.component(c);
    fft::forward(col.data(), g.dim(), g.points());
    for (std::size_t i = 0; i < col.size(); ++i) out[i * u.components() + c] = w * parity(g, i) * col[i];
  }
  return FourierCoefficients(g, u.components(), std::move(out));
}

GridFunction inverse_fourier(const FourierCoefficients& coeffs) {
  const Grid& g = coeffs.grid();
  const int N = coeffs.components();
  std::vector<Complex> out(coeffs.values().size());
  const double w = g.frequency_weight();
  std::vector<Complex> col(g.size());
  for (int c = 0; c < N; ++c) {
    for (std::size_t i = 0; i < col.size(); ++i) col[i] = parity(g, i) * coeffs.at(i, c);
    fft::backward(col.data(), g.dim(), g.points());
    for (std::size_t i = 0; i < col.size(); ++i) out[i * N + c] = w * col[i];
  }
  return GridFunction(g, N, std::move(out));
}

GridFunction fourier_multiplier(const GridFunction& u, const std::function<Complex(const Point&)>& symbol) {
  const Grid& g = u.grid();
  std::vector<Complex> mult(g.size());
  for (std::size_t i = 0; i < mult.size(); ++i) mult[i] = symbol(g.frequency_point(i)) / static_cast<double>(g.size());
  GridFunction out(g, u.components());
  for (int c = 0; c < u.components(); ++c) {
    auto col = u.component(c);
    fft::forward(col.data(), g.dim(), g.points());
    for (std::size_t i = 0; i < col.size(); ++i) col[i] *= mult[i];
    fft::backward(col.data(), g.dim(), g.points());
    out.set_component(c, col);
  }
  return out;
}

GridFunction bessel_multiplier(double s, const GridFunction& u) {
  if (s == 0.0) return u;
  return fourier_multiplier(u, [s](const Point& xi) { return Complex(std::pow(bracket(xi), s), 0.0); });
}

GridFunction spectral_derivative(const GridFunction& u, const MultiIndex& beta) {
  if (beta.is_zero()) return u;
  const double nyq = u.grid().nyquist();
  return fourier_multiplier(u, [&](const Point& xi) {
    Complex f(1.0, 0.0);
    for (int i = 0; i < xi.dim; ++i) {
      // The Nyquist mode has no conjugate partner; odd derivatives drop it.
      if (beta[i] % 2 == 1 && std::abs(std::abs(xi[i]) - nyq) < 1e-9 * nyq) return Complex(0.0, 0.0);
      f *= ipow(Complex(0.0, xi[i]), beta[i]);
    }
    return f;
  });
}

double l2_norm(const GridFunction& u) {
  double s = 0.0;
  for (const auto& z : u.values()) s += std::norm(z);
  return std::sqrt(s * u.grid().quadrature_weight());
}

double sobolev_norm(const GridFunction& u, double s) { return l2_norm(bessel_multiplier(s, u)); }

double sup_norm(const GridFunction& u) {
  double m = 0.0;
  for (const auto& z : u.values()) m = std::max(m, std::abs(z));
  return m;
}

double coefficient_l2_norm(const FourierCoefficients& c) {
  double s = 0.0;
  for (const auto& z : c.values()) s += std::norm(z);
  return std::sqrt(s * c.grid().frequency_weight());
}

}  // namespace pdo
