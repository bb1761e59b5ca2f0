#include "pdo/profiles.hpp"

#include <cmath>

#include "pdo/errors.hpp"

namespace pdo {

BumpProfile parse_bump_profile(const std::string& name) {
  if (name == "exp_bump") return BumpProfile::exp_bump;
  if (name == "poly_bump") return BumpProfile::poly_bump;
  throw LookupError("unknown cutoff profile '" + name + "'");
}

const char* to_string(BumpProfile p) { return p == BumpProfile::exp_bump ? "exp_bump" : "poly_bump"; }

namespace {

// e^{-1/s} as a series in s (s > 0).
Series flat_exp(const Series& s) {
  Series inv = reciprocal(s);
  inv *= -1.0;
  return exp(inv);
}

}  // namespace

double step(BumpProfile p, double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  if (p == BumpProfile::poly_bump) {
    double u = t - 1.0;
    return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  }
  double a = std::exp(-1.0 / (2.0 - t));
  double b = std::exp(-1.0 / (t - 1.0));
  return a / (a + b);
}

std::vector<double> step_derivatives(BumpProfile p, double t, int order) {
  std::vector<double> d(static_cast<std::size_t>(order + 1), 0.0);
  if (t <= 1.0 || t >= 2.0) {
    d[0] = step(p, t);
    return d;
  }
  if (p == BumpProfile::poly_bump) {
    // 1 - (10u^3 - 15u^4 + 6u^5)
    const double u = t - 1.0;
    const double c[6] = {0.0, 0.0, 0.0, 10.0, -15.0, 6.0};
    for (int k = 0; k <= order; ++k) {
      double s = 0.0;
      for (int n = k; n <= 5; ++n) {
        double f = 1.0;
        for (int i = 0; i < k; ++i) f *= (n - i);
        s += c[n] * f * std::pow(u, n - k);
      }
      d[static_cast<std::size_t>(k)] = (k == 0 ? 1.0 : 0.0) - s;
    }
    return d;
  }
  Series x = Series::variable(order, 0, t);
  Series a = flat_exp(Series(order, 2.0) - x);
  Series b = flat_exp(x - Series(order, 1.0));
  Series s = a * reciprocal(a + b);
  for (int k = 0; k <= order; ++k) d[static_cast<std::size_t>(k)] = s.derivative(MultiIndex(k));
  return d;
}

Series radial_step_series(BumpProfile p, const Point& z, double scale, int order) {
  const double r = z.norm() / scale;
  if (r < 1.0 || r > 2.0) return Series(order, step(p, r));
  Series u(order, 0.0);
  for (int i = 0; i < z.dim; ++i) {
    Series v = Series::variable(order, i, z[i] / scale);
    u += v * v;
  }
  // The series is in units of z / scale; rescale to derivatives in z.
  Series radius = sqrt(u);
  Series s = radius.compose(step_derivatives(p, r, order));
  for (int i = 0; i <= order; ++i)
    for (int j = 0; i + j <= order; ++j) s.coeff(i, j) *= std::pow(scale, -(i + j));
  return s;
}

double window(const Point& x, double r) {
  double w = 1.0;
  for (int i = 0; i < x.dim; ++i) w *= step(BumpProfile::exp_bump, std::abs(x[i]) / r);
  return w;
}

double window_derivative(const Point& x, double r, const MultiIndex& beta) {
  double w = 1.0;
  for (int i = 0; i < x.dim; ++i) {
    const int k = beta[i];
    const double t = std::abs(x[i]) / r;
    double dk = step_derivatives(BumpProfile::exp_bump, t, k)[static_cast<std::size_t>(k)];
    if (k % 2 == 1 && x[i] < 0.0) dk = -dk;
    w *= dk * std::pow(r, -k);
    if (w == 0.0) return 0.0;
  }
  return w;
}

double weierstrass(double x, double s, int terms, int k) {
  double r = 0.0;
  for (int j = 0; j < terms; ++j) {
    const double f = std::ldexp(1.0, j);
    if (k == 0) {
      r += std::pow(2.0, -j * s) * std::cos(f * x);
      continue;
    }
    r += std::pow(2.0, -j * s) * std::pow(f, k) * cos_derivatives(f * x, k)[static_cast<std::size_t>(k)];
  }
  return r;
}

double weierstrass_mass(double s, int terms) {
  double m = 0.0;
  for (int j = 0; j < terms; ++j) m += std::pow(2.0, -j * s);
  return m;
}

}  // namespace pdo
