#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "pdo/core.hpp"

namespace pdo {

// Periodic lattice on [-pi L, pi L)^n with P points per axis. Lattice indices are
// row-major with axis 0 slowest. Frequencies are stored in FFT order: storage
// index q holds xi = m / L with m = q for q < P/2 and m = q - P otherwise.
class Grid {
 public:
  Grid(int dim, double half_length, int points_per_axis);
  static Grid line(int points, double half_length = 1.0) { return Grid(1, half_length, points); }

  int dim() const { return dim_; }
  double half_length() const { return L_; }
  int points() const { return P_; }
  std::size_t size() const;
  double box_length() const { return 2.0 * kPi * L_; }
  double spacing() const { return box_length() / P_; }
  double frequency_step() const { return 1.0 / L_; }
  double nyquist() const { return 0.5 * P_ / L_; }

  double coordinate(int k) const { return -kPi * L_ + k * spacing(); }
  int signed_index(int q) const { return q < P_ / 2 ? q : q - P_; }
  double frequency(int q) const { return signed_index(q) / L_; }

  Point point(std::size_t index) const;
  Point frequency_point(std::size_t index) const;
  double frequency_bracket(std::size_t index) const { return bracket(frequency_point(index)); }
  // Axis indices of a flat lattice index.
  std::array<int, 2> axis_indices(std::size_t index) const;

  // Lattice quadrature weight h^n and frequency weight (1 / (2 pi L))^n.
  double quadrature_weight() const;
  double frequency_weight() const;

  bool operator==(const Grid& o) const { return dim_ == o.dim_ && L_ == o.L_ && P_ == o.P_; }
  bool operator!=(const Grid& o) const { return !(*this == o); }

 private:
  int dim_;
  double L_;
  int P_;
};

// Complex field with N components; value of component c at lattice point k is
// values[k * N + c].
class GridFunction {
 public:
  GridFunction(Grid grid, int components, std::vector<Complex> values);
  GridFunction(Grid grid, int components = 1);

  static GridFunction sample(const Grid& grid, const std::function<Complex(const Point&)>& f);

  const Grid& grid() const { return grid_; }
  int components() const { return N_; }
  std::vector<Complex>& values() { return values_; }
  const std::vector<Complex>& values() const { return values_; }
  Complex& at(std::size_t point, int c = 0) { return values_[point * N_ + c]; }
  const Complex& at(std::size_t point, int c = 0) const { return values_[point * N_ + c]; }

  // One component as a contiguous vector.
  std::vector<Complex> component(int c) const;
  void set_component(int c, const std::vector<Complex>& data);

 private:
  Grid grid_;
  int N_;
  std::vector<Complex> values_;
};

// Fourier coefficients on the frequency lattice, FFT order, same layout as GridFunction.
class FourierCoefficients {
 public:
  FourierCoefficients(Grid grid, int components, std::vector<Complex> values);

  const Grid& grid() const { return grid_; }
  int components() const { return N_; }
  std::vector<Complex>& values() { return values_; }
  const std::vector<Complex>& values() const { return values_; }
  Complex& at(std::size_t freq, int c = 0) { return values_[freq * N_ + c]; }
  const Complex& at(std::size_t freq, int c = 0) const { return values_[freq * N_ + c]; }

 private:
  Grid grid_;
  int N_;
  std::vector<Complex> values_;
};

// u^(xi_m) ~ integral of e^{-i x xi} u(x) dx over the box.
FourierCoefficients forward_fourier(const GridFunction& u);
// u(x_k) = sum_m e^{i x_k xi_m} u^(xi_m) (1 / (2 pi L))^n.
GridFunction inverse_fourier(const FourierCoefficients& c);

// Applies the Fourier multiplier symbol(xi) to every component of u.
GridFunction fourier_multiplier(const GridFunction& u, const std::function<Complex(const Point&)>& symbol);
GridFunction bessel_multiplier(double s, const GridFunction& u);
// Spectral partial derivative d^beta u.
GridFunction spectral_derivative(const GridFunction& u, const MultiIndex& beta);

double l2_norm(const GridFunction& u);
double sobolev_norm(const GridFunction& u, double s);
double sup_norm(const GridFunction& u);
// Squared-magnitude sum of coefficients weighted by the frequency weight.
double coefficient_l2_norm(const FourierCoefficients& c);

bool is_power_of_two(long n);

}  // namespace pdo
