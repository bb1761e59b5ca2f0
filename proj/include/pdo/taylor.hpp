#pragma once

#include <vector>

#include "pdo/core.hpp"

namespace pdo {

// Truncated Taylor series in two increments (h0, h1) of total degree <= order.
// Used to push exact derivatives through compositions of elementary functions.
class Series {
 public:
  explicit Series(int order, double constant = 0.0);
  // at + h_axis
  static Series variable(int order, int axis, double at);

  int order() const { return K_; }
  double constant() const { return c_[0]; }
  double coeff(int i, int j) const { return c_[idx(i, j)]; }
  double& coeff(int i, int j) { return c_[idx(i, j)]; }
  // Partial derivative d^alpha of the represented function at the base point.
  double derivative(const MultiIndex& alpha) const;

  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(double s);
  Series& operator+=(double s) {
    c_[0] += s;
    return *this;
  }

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator*(double s, Series a) { return a *= s; }

  // f(this) given f^(k) at the constant term for k = 0..order.
  Series compose(const std::vector<double>& derivs) const;

 private:
  int idx(int i, int j) const { return i * (K_ + 1) + j; }
  int K_;
  std::vector<double> c_;
};

// Derivative lists f^(k)(t), k = 0..order, for elementary functions.
std::vector<double> power_derivatives(double t, double p, int order);
std::vector<double> exp_derivatives(double t, int order);
std::vector<double> cos_derivatives(double t, int order);

Series pow(const Series& s, double p);
Series exp(const Series& s);
Series sqrt(const Series& s);
Series reciprocal(const Series& s);

// Series of (1 + |xi|^2)^{p/2} at xi, enough to read any derivative of order <= order.
Series bracket_power_series(const Point& xi, double p, int order);

}  // namespace pdo
