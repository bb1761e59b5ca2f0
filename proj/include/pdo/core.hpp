#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <algorithm>
#include <vector>

#include <Eigen/Dense>

namespace pdo {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
// Stands in for "no bound" on integer regularity indices.
inline constexpr int kUnbounded = std::numeric_limits<int>::max();

// A point of R^n for n in {1,2}.
struct Point {
  int dim = 1;
  std::array<double, 2> v{0.0, 0.0};

  Point() = default;
  Point(double a) : dim(1), v{a, 0.0} {}  // NOLINT: 1D points read naturally as scalars
  Point(double a, double b) : dim(2), v{a, b} {}

  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double norm_sq() const { return dim == 1 ? v[0] * v[0] : v[0] * v[0] + v[1] * v[1]; }
  double norm() const { return std::sqrt(norm_sq()); }
  Point shifted(int axis, double h) const {
    Point p = *this;
    p[axis] += h;
    return p;
  }
};

inline Point operator+(Point a, const Point& b) {
  for (int i = 0; i < a.dim; ++i) a[i] += b[i];
  return a;
}
inline Point operator*(double s, Point a) {
  for (int i = 0; i < a.dim; ++i) a[i] *= s;
  return a;
}

// Multi-index; the second entry stays 0 in 1D.
struct MultiIndex {
  std::array<int, 2> v{0, 0};

  MultiIndex() = default;
  MultiIndex(int a) : v{a, 0} {}  // NOLINT
  MultiIndex(int a, int b) : v{a, b} {}

  int operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  int order() const { return v[0] + v[1]; }
  bool is_zero() const { return v[0] == 0 && v[1] == 0; }
  double factorial() const;
  MultiIndex minus_axis(int axis) const {
    MultiIndex m = *this;
    m[axis] -= 1;
    return m;
  }
  bool operator==(const MultiIndex& o) const { return v == o.v; }
};

// All multi-indices of total order exactly k in dimension n.
std::vector<MultiIndex> multi_indices_of_order(int n, int k);
// Sub-indices b <= a with the Leibniz weight binom(a, b).
std::vector<std::pair<MultiIndex, double>> sub_indices(const MultiIndex& a);

double binomial(int n, int k);

inline Complex ipow(Complex z, int n) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

inline double bracket(double t) { return std::sqrt(1.0 + t * t); }
inline double bracket(const Point& p) { return std::sqrt(1.0 + p.norm_sq()); }

// Complex N x N value of a symbol; N <= 4 keeps it on the stack.
using SymbolValue = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

inline SymbolValue scalar_value(Complex z) {
  SymbolValue m(1, 1);
  m(0, 0) = z;
  return m;
}

// Largest entry modulus; the norm used for all sup-type estimates.
inline double max_abs(const SymbolValue& m) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < m.size(); ++i) r = std::max(r, std::abs(m.data()[i]));
  return r;
}

// Worker pool size used by parallel_for; 0 selects hardware concurrency.
void set_worker_count(int workers);
int worker_count();

// Runs body(i) for i in [0, n). Each index must write only its own output slot,
// which makes results independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace pdo
