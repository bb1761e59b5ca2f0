#include "pdo/taylor.hpp"

#include <cmath>

namespace pdo {

Series::Series(int order, double constant) : K_(order), c_(static_cast<std::size_t>((order + 1) * (order + 1)), 0.0) {
  c_[0] = constant;
}

Series Series::variable(int order, int axis, double at) {
  Series s(order, at);
  if (order >= 1) {
    if (axis == 0) s.coeff(1, 0) = 1.0;
    else s.coeff(0, 1) = 1.0;
  }
  return s;
}

double Series::derivative(const MultiIndex& alpha) const {
  if (alpha.order() > K_) return 0.0;
  return coeff(alpha[0], alpha[1]) * alpha.factorial();
}

Series& Series::operator+=(const Series& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Series& Series::operator-=(const Series& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Series& Series::operator*=(double s) {
  for (auto& v : c_) v *= s;
  return *this;
}

Series operator*(const Series& a, const Series& b) {
  const int K = a.K_;
  Series r(K);
  for (int i1 = 0; i1 <= K; ++i1)
    for (int j1 = 0; i1 + j1 <= K; ++j1) {
      double av = a.coeff(i1, j1);
      if (av == 0.0) continue;
      for (int i2 = 0; i1 + i2 <= K; ++i2)
        for (int j2 = 0; i1 + j1 + i2 + j2 <= K; ++j2) r.coeff(i1 + i2, j1 + j2) += av * b.coeff(i2, j2);
    }
  return r;
}

Series Series::compose(const std::vector<double>& derivs) const {
  Series h = *this;
  h.c_[0] = 0.0;
  Series result(K_, derivs[0]);
  Series hp(K_, 1.0);
  double fact = 1.0;
  for (int k = 1; k <= K_; ++k) {
    hp = hp * h;
    fact *= k;
    Series term = hp;
    term *= derivs[static_cast<std::size_t>(k)] / fact;
    result += term;
  }
  return result;
}

std::vector<double> power_derivatives(double t, double p, int order) {
  std::vector<double> d(static_cast<std::size_t>(order + 1));
  double coef = 1.0;
  for (int k = 0; k <= order; ++k) {
    d[static_cast<std::size_t>(k)] = coef * std::pow(t, p - k);
    coef *= (p - k);
  }
  return d;
}

std::vector<double> exp_derivatives(double t, int order) {
  return std::vector<double>(static_cast<std::size_t>(order + 1), std::exp(t));
}

std::vector<double> cos_derivatives(double t, int order) {
  std::vector<double> d(static_cast<std::size_t>(order + 1));
  const double c = std::cos(t), s = std::sin(t);
  const double cycle[4] = {c, -s, -c, s};
  for (int k = 0; k <= order; ++k) d[static_cast<std::size_t>(k)] = cycle[k % 4];
  return d;
}

Series pow(const Series& s, double p) { return s.compose(power_derivatives(s.constant(), p, s.order())); }
Series exp(const Series& s) { return s.compose(exp_derivatives(s.constant(), s.order())); }
Series sqrt(const Series& s) { return pow(s, 0.5); }
Series reciprocal(const Series& s) { return pow(s, -1.0); }

Series bracket_power_series(const Point& xi, double p, int order) {
  Series u(order, 1.0);
  for (int i = 0; i < xi.dim; ++i) {
    Series v = Series::variable(order, i, xi[i]);
    u += v * v;
  }
  return pow(u, 0.5 * p);
}

}  // namespace pdo
