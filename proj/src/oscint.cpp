#include "pdo/oscint.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "pdo/errors.hpp"
#include "pdo/profiles.hpp"
#include "pdo/taylor.hpp"

namespace pdo {

namespace {

// d^d e^{-k |z|^2}.
double gauss_derivative(const Point& z, double k, const MultiIndex& d) {
  if (d.is_zero()) return std::exp(-k * z.norm_sq());
  const int K = d.order();
  Series u(K, 0.0);
  for (int i = 0; i < z.dim; ++i) {
    Series v = Series::variable(K, i, z[i]);
    u += v * v;
  }
  u *= -k;
  return exp(u).derivative(d);
}

// d^d e^{i z.c} = (i c)^d e^{i z.c}.
Complex wave_derivative(const Point& z, const Point& c, const MultiIndex& d) {
  double phase = 0.0;
  Complex f(1.0, 0.0);
  for (int i = 0; i < z.dim; ++i) {
    phase += z[i] * c[i];
    f *= ipow(Complex(0.0, c[i]), d[i]);
  }
  return f * std::polar(1.0, phase);
}

Point zero_point(int dim) { return dim == 1 ? Point(0.0) : Point(0.0, 0.0); }

void check_dim(int dim) {
  if (dim != 1 && dim != 2) throw ShapeError("amplitudes live in dimension 1 or 2");
}

// One term of a regularizer after integration by parts: coeff * w(z) * d^deriv acting on the
// other variable, with w(z) = (c z_coord)^{[coord >= 0]} (1 + c^2 |z|^2)^{p/2}.
struct Term {
  Complex coeff;
  double c = 1.0;
  double p = 0.0;
  int coord = -1;
  MultiIndex deriv;
};

double weight_derivative(const Term& t, const Point& z, const MultiIndex& d) {
  if (d.is_zero()) {
    const double w = std::pow(1.0 + t.c * t.c * z.norm_sq(), 0.5 * t.p);
    return t.coord < 0 ? w : t.c * z[t.coord] * w;
  }
  const int K = d.order();
  Series u(K, 1.0);
  for (int i = 0; i < z.dim; ++i) {
    Series v = t.c * Series::variable(K, i, z[i]);
    u += v * v;
  }
  Series w = pow(u, 0.5 * t.p);
  if (t.coord >= 0) w = (t.c * Series::variable(K, t.coord, z[t.coord])) * w;
  return w.derivative(d);
}

// (1 + c^2|z|^2)^{p/2} (1 + c^2(-Delta))^k, plus for odd l the first-order terms
// (c z_a)(1 + c^2|z|^2)^{p/2} (1 + c^2(-Delta))^k c D_a. With c = 1 this is the transpose of
// A^l, with c = <xi>^delta it is B^l.
std::vector<Term> regularizer_terms(int dim, int l, double c) {
  std::vector<Term> out;
  if (l <= 0) return out;
  const bool even = l % 2 == 0;
  const int k = even ? l / 2 : (l - 1) / 2;
  const double p = even ? -l : -l - 1;
  const double s = c * c;
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= (dim == 2 ? k - i : 0); ++j) {
      const double multi = binomial(k, i) * binomial(k - i, j) * std::pow(-s, i + j);
      out.push_back({Complex(multi, 0.0), c, p, -1, MultiIndex(2 * i, 2 * j)});
      if (even) continue;
      for (int a = 0; a < dim; ++a) {
        MultiIndex d(2 * i, 2 * j);
        d[a] += 1;
        // D_a = -i d_a; for A^l the transpose flips the sign of the D-term, B^l has it as written.
        out.push_back({Complex(0.0, -multi * c), c, p, a, d});
      }
    }
  return out;
}

// The amplitude sum_t coeff_t w_t(weight var) d^{deriv_t}(other var) a.
Amplitude apply_terms(const Amplitude& a, std::vector<Term> terms, bool weight_on_y, const std::string& label) {
  auto inner = std::make_shared<const Amplitude>(a);
  auto ts = std::make_shared<const std::vector<Term>>(std::move(terms));
  Amplitude r;
  r.name = label + "[" + a.name + "]";
  r.dim = a.dim;
  r.m = a.m;
  r.tau = a.tau;
  r.eta_degree = a.eta_degree;
  r.y_degree = a.y_degree;
  r.eval = [inner, ts, weight_on_y](const Point& y, const Point& eta, const MultiIndex& al,
                                    const MultiIndex& be) -> Complex {
    Complex acc(0.0, 0.0);
    for (const Term& t : *ts) {
      if (weight_on_y) {
        for (const auto& [g, w] : sub_indices(be)) {
          const double wd = weight_derivative(t, y, g);
          if (wd == 0.0) continue;
          MultiIndex a2 = al, b2 = be;
          for (int i = 0; i < 2; ++i) {
            a2[i] += t.deriv[i];
            b2[i] -= g[i];
          }
          acc += t.coeff * w * wd * inner->eval(y, eta, a2, b2);
        }
      } else {
        for (const auto& [g, w] : sub_indices(al)) {
          const double wd = weight_derivative(t, eta, g);
          if (wd == 0.0) continue;
          MultiIndex a2 = al, b2 = be;
          for (int i = 0; i < 2; ++i) {
            a2[i] -= g[i];
            b2[i] += t.deriv[i];
          }
          acc += t.coeff * w * wd * inner->eval(y, eta, a2, b2);
        }
      }
    }
    return acc;
  };
  return r;
}

int reduce_degree(int degree, int used) { return degree == kUnbounded ? kUnbounded : degree - used; }

}  // namespace

// ---- Amplitudes ---------------------------------------------------------------

Amplitude gaussian_amplitude(int dim) {
  check_dim(dim);
  Amplitude a;
  a.name = "gaussian";
  a.dim = dim;
  a.eval = [](const Point& y, const Point& eta, const MultiIndex& al, const MultiIndex& be) -> Complex {
    return gauss_derivative(eta, 1.0, al) * gauss_derivative(y, 1.0, be);
  };
  return a;
}

Amplitude reproduction_amplitude(const Point& x, std::function<Complex(const Point&, const MultiIndex&)> u,
                                 const std::string& name) {
  check_dim(x.dim);
  Amplitude a;
  a.name = name;
  a.dim = x.dim;
  a.eval = [x, u = std::move(u)](const Point& y, const Point& eta, const MultiIndex& al,
                                 const MultiIndex& be) -> Complex {
    return wave_derivative(eta, x, al) * u(y, be);
  };
  return a;
}

Amplitude reproduction_amplitude(const Point& x) {
  return reproduction_amplitude(
      x, [](const Point& y, const MultiIndex& be) -> Complex { return gauss_derivative(y, 0.5, be); }, "reproduction");
}

Amplitude constant_amplitude(Complex c, int dim) {
  check_dim(dim);
  Amplitude a;
  a.name = "constant";
  a.dim = dim;
  a.eval = [c](const Point&, const Point&, const MultiIndex& al, const MultiIndex& be) -> Complex {
    return al.is_zero() && be.is_zero() ? c : Complex(0.0, 0.0);
  };
  return a;
}

Amplitude plane_wave_amplitude(const Point& c) {
  check_dim(c.dim);
  Amplitude a;
  a.name = "plane_wave";
  a.dim = c.dim;
  a.eval = [c](const Point& y, const Point&, const MultiIndex& al, const MultiIndex& be) -> Complex {
    return al.is_zero() ? wave_derivative(y, c, be) : Complex(0.0, 0.0);
  };
  return a;
}

Amplitude scale(Complex c, const Amplitude& a) {
  Amplitude r = a;
  r.name = "scale(" + a.name + ")";
  auto f = a.eval;
  r.eval = [c, f](const Point& y, const Point& eta, const MultiIndex& al, const MultiIndex& be) {
    return c * f(y, eta, al, be);
  };
  return r;
}

Amplitude sum(const Amplitude& a, const Amplitude& b) {
  if (a.dim != b.dim) throw ShapeError("amplitudes live in different dimensions");
  Amplitude r;
  r.name = a.name + "+" + b.name;
  r.dim = a.dim;
  r.m = std::max(a.m, b.m);
  r.tau = std::max(a.tau, b.tau);
  r.eta_degree = std::min(a.eta_degree, b.eta_degree);
  r.y_degree = std::min(a.y_degree, b.y_degree);
  auto f = a.eval, g = b.eval;
  r.eval = [f, g](const Point& y, const Point& eta, const MultiIndex& al, const MultiIndex& be) {
    return f(y, eta, al, be) + g(y, eta, al, be);
  };
  return r;
}

Amplitude damped(const Amplitude& a, double r) {
  if (!(r > 0.0)) throw ParameterError("damped: radius must be positive");
  Amplitude out = a;
  out.name = "damped(" + a.name + ")";
  const double k = 0.5 / (r * r);
  auto f = a.eval;
  out.eval = [f, k](const Point& y, const Point& eta, const MultiIndex& al, const MultiIndex& be) -> Complex {
    Complex acc(0.0, 0.0);
    for (const auto& [ga, wa] : sub_indices(al))
      for (const auto& [gb, wb] : sub_indices(be)) {
        MultiIndex a2 = al, b2 = be;
        for (int i = 0; i < 2; ++i) {
          a2[i] -= ga[i];
          b2[i] -= gb[i];
        }
        acc += wa * wb * gauss_derivative(eta, k, ga) * gauss_derivative(y, k, gb) * f(y, eta, a2, b2);
      }
    return acc;
  };
  return out;
}

const std::vector<std::string>& amplitude_names() {
  static const std::vector<std::string> names = {"constant", "gaussian", "plane_wave", "reproduction", "zero"};
  return names;
}

Amplitude amplitude_gallery(const std::string& name, int dim) {
  check_dim(dim);
  const Point origin = zero_point(dim);
  if (name == "constant") return constant_amplitude(1.0, dim);
  if (name == "gaussian") return gaussian_amplitude(dim);
  if (name == "plane_wave") return plane_wave_amplitude(dim == 1 ? Point(1.0) : Point(1.0, 0.5));
  if (name == "reproduction") return reproduction_amplitude(origin);
  if (name == "zero") {
    Amplitude z = constant_amplitude(0.0, dim);
    z.name = "zero";
    return z;
  }
  throw LookupError("unknown amplitude '" + name + "'");
}

double amplitude_growth_constant(const Amplitude& a, int k, double radius, int samples) {
  if (samples < 2) throw ParameterError("amplitude_growth_constant: need at least 2 samples per axis");
  const int n = a.dim;
  std::vector<double> axis(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) axis[static_cast<std::size_t>(i)] = -radius + 2.0 * radius * i / (samples - 1);
  const long total = std::lround(std::pow(samples, 2 * n));
  double best = 0.0;
  for (int ka = 0; ka <= std::min(k, a.eta_degree); ++ka)
    for (int kb = 0; kb <= std::min(k, a.y_degree); ++kb)
      for (const MultiIndex& al : multi_indices_of_order(n, ka))
        for (const MultiIndex& be : multi_indices_of_order(n, kb))
          for (long idx = 0; idx < total; ++idx) {
            long r = idx;
            double c[4] = {0, 0, 0, 0};
            for (int t = 0; t < 2 * n; ++t) {
              c[t] = axis[static_cast<std::size_t>(r % samples)];
              r /= samples;
            }
            const Point y = n == 1 ? Point(c[0]) : Point(c[0], c[1]);
            const Point eta = n == 1 ? Point(c[1]) : Point(c[2], c[3]);
            const double w = std::pow(1.0 + eta.norm(), a.m) * std::pow(1.0 + y.norm(), a.tau);
            best = std::max(best, std::abs(a.eval(y, eta, al, be)) / w);
          }
  return best;
}

// ---- Regularizers -------------------------------------------------------------

Regularizer Regularizer::a_type(int l, int l_prime) {
  if (l < 0 || l_prime < 0) throw ParameterError("regularizer orders must be nonnegative");
  Regularizer r;
  r.kind = RegularizerKind::a_type;
  r.l = l;
  r.l_prime = l_prime;
  return r;
}

Regularizer Regularizer::b_type(int l, double delta, Point xi_ref) {
  if (l < 0) throw ParameterError("regularizer order must be nonnegative");
  if (delta < 0.0 || delta >= 1.0) throw ParameterError("B-type weight exponent delta must lie in [0,1)");
  Regularizer r;
  r.kind = RegularizerKind::b_type;
  r.l = l;
  r.delta_weight = delta;
  r.xi_ref = xi_ref;
  return r;
}

std::string Regularizer::label() const {
  if (kind == RegularizerKind::a_type)
    return "A(l=" + std::to_string(l) + ",l'=" + std::to_string(l_prime) + ")";
  return "B(l=" + std::to_string(l) + ",delta=" + std::to_string(delta_weight) + ")";
}

Amplitude apply_regularizer(const Regularizer& reg, const Amplitude& a) {
  if (reg.kind == RegularizerKind::a_type) {
    if (reg.l > a.y_degree)
      throw CapabilityError("A^l(D_y, eta) needs " + std::to_string(reg.l) + " y-derivatives of " + a.name);
    if (reg.l_prime > a.eta_degree)
      throw CapabilityError("A^l'(D_eta, y) needs " + std::to_string(reg.l_prime) + " eta-derivatives of " + a.name);
    Amplitude r = a;
    if (reg.l > 0) r = apply_terms(r, regularizer_terms(a.dim, reg.l, 1.0), false, "A_y" + std::to_string(reg.l));
    if (reg.l_prime > 0)
      r = apply_terms(r, regularizer_terms(a.dim, reg.l_prime, 1.0), true, "A_eta" + std::to_string(reg.l_prime));
    r.m = a.m - reg.l;
    r.tau = a.tau - reg.l_prime;
    r.y_degree = reduce_degree(a.y_degree, reg.l);
    r.eta_degree = reduce_degree(a.eta_degree, reg.l_prime);
    return r;
  }
  if (reg.l > a.eta_degree)
    throw CapabilityError("B^l(y, Delta_eta) needs " + std::to_string(reg.l) + " eta-derivatives of " + a.name);
  if (reg.xi_ref.dim != a.dim) throw ShapeError("B-type reference frequency has the wrong dimension");
  if (reg.l == 0) return a;
  const double c = std::pow(bracket(reg.xi_ref), reg.delta_weight);
  Amplitude r = apply_terms(a, regularizer_terms(a.dim, reg.l, c), true, "B" + std::to_string(reg.l));
  r.tau = a.tau - reg.l;
  r.eta_degree = reduce_degree(a.eta_degree, reg.l);
  return r;
}

// ---- Oscillatory integrals ---------------------------------------------------------

const char* to_string(ChiProfile c) { return c == ChiProfile::gaussian ? "gaussian" : "bump"; }

ChiProfile parse_chi(const std::string& name) {
  if (name == "gaussian") return ChiProfile::gaussian;
  if (name == "bump") return ChiProfile::bump;
  throw LookupError("unknown chi profile '" + name + "'");
}

double chi_value(ChiProfile c, const Point& y, const Point& eta) {
  const double r2 = y.norm_sq() + eta.norm_sq();
  if (c == ChiProfile::gaussian) return std::exp(-0.5 * r2);
  return step(BumpProfile::exp_bump, std::sqrt(r2));
}

void OscIntConfig::validate(int dim) const {
  if (epsilon_schedule.empty()) throw ParameterError("epsilon schedule is empty");
  for (std::size_t i = 0; i < epsilon_schedule.size(); ++i) {
    if (!(epsilon_schedule[i] > 0.0)) throw ParameterError("epsilon schedule entries must be positive");
    if (i > 0 && !(epsilon_schedule[i] < epsilon_schedule[i - 1]))
      throw ParameterError("epsilon schedule must be strictly decreasing");
  }
  if (!(box > 0.0)) throw ParameterError("quadrature box must be positive");
  if (resolution < 8 || resolution % 2 != 0) throw ParameterError("quadrature resolution must be even and >= 8");
  if (std::pow(static_cast<double>(resolution), 2 * dim) > std::pow(2.0, 22))
    throw ParameterError("quadrature lattice exceeds 2^22 points; lower the resolution");
}

namespace {

double pairwise_sum_real(const std::vector<Complex>& v, std::size_t lo, std::size_t hi, bool imag) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += imag ? v[i].imag() : v[i].real();
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_real(v, lo, mid, imag) + pairwise_sum_real(v, mid, hi, imag);
}

Complex pairwise_sum(const std::vector<Complex>& v) {
  if (v.empty()) return {0.0, 0.0};
  return {pairwise_sum_real(v, 0, v.size(), false), pairwise_sum_real(v, 0, v.size(), true)};
}

struct Lattice {
  int dim, P;
  std::size_t count;  // points per variable (P^dim)
  double h, h_eta;
  Point y(std::size_t k) const {
    if (dim == 1) return Point(-0.5 * h * P + h * static_cast<double>(k));
    return Point(-0.5 * h * P + h * static_cast<double>(k / P), -0.5 * h * P + h * static_cast<double>(k % P));
  }
  long eta_index(std::size_t l, int axis) const {
    const long c = P / 2;
    if (dim == 1) return static_cast<long>(l) - c;
    return (axis == 0 ? static_cast<long>(l / P) : static_cast<long>(l % P)) - c;
  }
  Point eta(std::size_t l) const {
    if (dim == 1) return Point(h_eta * static_cast<double>(eta_index(l, 0)));
    return Point(h_eta * static_cast<double>(eta_index(l, 0)), h_eta * static_cast<double>(eta_index(l, 1)));
  }
  long y_index(std::size_t k, int axis) const {
    if (dim == 1) return static_cast<long>(k);
    return axis == 0 ? static_cast<long>(k / P) : static_cast<long>(k % P);
  }
};

// Damped lattice sums for every epsilon. e^{-i y.eta} is taken from the exact roots of unity
// of the pairing: y_k eta_l = -pi l' + 2 pi k l' / P with l' the centered eta index.
std::vector<Complex> damped_sums(const Amplitude& a, const OscIntConfig& cfg, double box, long& points,
                                 double* magnitude = nullptr) {
  Lattice lat;
  lat.dim = a.dim;
  lat.P = cfg.resolution;
  lat.count = a.dim == 1 ? static_cast<std::size_t>(lat.P) : static_cast<std::size_t>(lat.P) * lat.P;
  lat.h = 2.0 * box / lat.P;
  lat.h_eta = kPi / box;
  points = static_cast<long>(lat.count * lat.count);

  std::vector<Complex> roots(static_cast<std::size_t>(lat.P));
  for (int t = 0; t < lat.P; ++t) roots[static_cast<std::size_t>(t)] = std::polar(1.0, -2.0 * kPi * t / lat.P);

  // Phased amplitude values, one row per eta point.
  std::vector<Complex> vals(lat.count * lat.count);
  parallel_for(lat.count, [&](std::size_t l) {
    const Point eta = lat.eta(l);
    for (std::size_t k = 0; k < lat.count; ++k) {
      Complex ph(1.0, 0.0);
      for (int ax = 0; ax < lat.dim; ++ax) {
        const long le = lat.eta_index(l, ax);
        const long t = ((lat.y_index(k, ax) * le) % lat.P + lat.P) % lat.P;
        ph *= roots[static_cast<std::size_t>(t)] * ((le % 2 == 0) ? 1.0 : -1.0);
      }
      vals[l * lat.count + k] = ph * a(lat.y(k), eta);
    }
  });

  const double w = std::pow(lat.h * lat.h_eta / (2.0 * kPi), lat.dim);
  std::vector<Complex> out;
  std::vector<Complex> rows(lat.count);
  std::vector<double> mass(lat.count);
  double biggest = 0.0;
  for (double eps : cfg.epsilon_schedule) {
    parallel_for(lat.count, [&](std::size_t l) {
      const Point eta = eps * lat.eta(l);
      std::vector<Complex> row(lat.count);
      double m = 0.0;
      for (std::size_t k = 0; k < lat.count; ++k) {
        row[k] = chi_value(cfg.chi, eps * lat.y(k), eta) * vals[l * lat.count + k];
        m += std::abs(row[k]);
      }
      rows[l] = pairwise_sum(row);
      mass[l] = m;
    });
    out.push_back(w * pairwise_sum(rows));
    double total = 0.0;
    for (double m : mass) total += m;
    biggest = std::max(biggest, w * total);
  }
  if (magnitude) *magnitude = biggest;
  return out;
}

void check_feasible(const Amplitude& a, const OscIntConfig& cfg) {
  const double budget = std::pow(cfg.eta_box(), std::max(a.m, 0.0)) * std::pow(cfg.box, std::max(a.tau, 0.0)) *
                        std::pow(static_cast<double>(cfg.resolution), 2 * a.dim) * 0x1p-52;
  if (budget > 1e-6)
    throw ParameterError("amplitude growth (m=" + std::to_string(a.m) + ", tau=" + std::to_string(a.tau) +
                         ") exceeds what the quadrature lattice resolves; regularize first");
}

}  // namespace

Complex richardson_limit(const std::vector<double>& eps, const std::vector<Complex>& values, OscIntDiagnostics& diag,
                         double noise_floor) {
  const std::size_t n = values.size();
  diag.order = std::nan("");
  diag.divergent = false;
  diag.extrapolations = values;
  if (n == 1) return values[0];
  double scale = 0.0;
  for (const Complex& v : values) scale = std::max(scale, std::abs(v));
  const double floor = 1e-14 * std::max(scale, 1e-300);
  const double d2 = std::abs(values[n - 1] - values[n - 2]);
  if (d2 <= floor) return values[n - 1];

  double p = 1.0;
  if (n >= 3) {
    const double d1 = std::abs(values[n - 2] - values[n - 3]);
    p = std::log(d1 / d2) / std::log(eps[n - 2] / eps[n - 1]);
    diag.order = p;
  }
  double pu = (std::isfinite(p) && p >= 0.5) ? std::min(p, 8.0) : 1.0;
  // Smooth amplitudes expand in integer powers of eps; snap near-integer estimates.
  if (std::abs(pu - std::round(pu)) < 0.15) pu = std::round(pu);
  const std::size_t K = std::min<std::size_t>(n - 1, 3);
  std::vector<std::vector<Complex>> T(n, std::vector<Complex>(K + 1));
  for (std::size_t i = 0; i < n; ++i) T[i][0] = values[i];
  for (std::size_t k = 1; k <= K; ++k)
    for (std::size_t i = k; i < n; ++i) {
      const double f = std::pow(eps[i - 1] / eps[i], static_cast<double>(k) * pu);
      T[i][k] = T[i][k - 1] + (T[i][k - 1] - T[i - 1][k - 1]) / (f - 1.0);
    }
  diag.extrapolations.clear();
  for (std::size_t i = K; i < n; ++i) diag.extrapolations.push_back(T[i][K]);
  const auto& E = diag.extrapolations;
  if (E.size() >= 3) {
    const double da = std::abs(E[E.size() - 2] - E[E.size() - 3]);
    const double db = std::abs(E.back() - E[E.size() - 2]);
    diag.divergent = db > std::max({da, 1e-9 * scale, noise_floor});
  }
  return E.back();
}

OscIntResult osc_integral(const Amplitude& a, const OscIntConfig& cfg, const std::optional<Regularizer>& reg) {
  cfg.validate(a.dim);
  const Amplitude b = reg ? apply_regularizer(*reg, a) : a;
  check_feasible(b, cfg);
  OscIntResult r;
  auto& d = r.diagnostics;
  d.epsilons = cfg.epsilon_schedule;
  d.values = damped_sums(b, cfg, cfg.box, d.lattice_points, &d.magnitude);
  // Summation of terms of size |t| leaves noise of order 1e-16 |t| per term; this floor is generous.
  r.value = richardson_limit(d.epsilons, d.values, d, 1e-12 * d.magnitude);
  if (cfg.box_sensitivity) {
    long pts = 0;
    OscIntDiagnostics tmp;
    const Complex v = richardson_limit(d.epsilons, damped_sums(b, cfg, 0.75 * cfg.box, pts), tmp);
    d.box_sensitivity = std::abs(v - r.value);
  }
  return r;
}

InvarianceReport invariance_check(const Amplitude& a, const OscIntConfig& cfg, const std::vector<Regularizer>& regs,
                                  const std::vector<ChiProfile>& extra_chis, double tolerance) {
  InvarianceReport rep;
  rep.tolerance = tolerance;
  auto add = [&](const std::string& label, const OscIntResult& r) {
    rep.entries.push_back({label, r.value, r.diagnostics.divergent});
  };
  add("none", osc_integral(a, cfg));
  for (const Regularizer& reg : regs) add(reg.label(), osc_integral(a, cfg, reg));
  for (ChiProfile c : extra_chis) {
    OscIntConfig alt = cfg;
    alt.chi = c;
    add(std::string("chi=") + to_string(c), osc_integral(a, alt));
  }
  double scale = 0.0, dev = 0.0;
  for (const auto& e : rep.entries) {
    scale = std::max(scale, std::abs(e.value));
    dev = std::max(dev, std::abs(e.value - rep.entries.front().value));
  }
  rep.spread = scale > 0.0 ? dev / scale : 0.0;
  rep.pass = rep.spread <= tolerance;
  return rep;
}

ContinuityReport sequence_continuity_check(const std::vector<Amplitude>& sequence, const Amplitude& a,
                                           const OscIntConfig& cfg, double tolerance) {
  if (sequence.empty()) throw ParameterError("sequence_continuity_check: empty sequence");
  ContinuityReport rep;
  rep.limit = osc_integral(a, cfg).value;
  double scale = std::abs(rep.limit);
  for (const Amplitude& aj : sequence) {
    rep.values.push_back(osc_integral(aj, cfg).value);
    rep.distances.push_back(std::abs(rep.values.back() - rep.limit));
    scale = std::max(scale, std::abs(rep.values.back()));
  }
  const Point o = zero_point(a.dim);
  for (double t : {0.0, 0.7, -1.9})
    for (double s : {0.0, 1.3}) {
      Point y = o, eta = o;
      y[0] = t;
      eta[0] = s;
      rep.pointwise_gap = std::max(rep.pointwise_gap, std::abs(sequence.back()(y, eta) - a(y, eta)));
    }
  rep.decreasing = true;
  for (std::size_t j = 1; j < rep.distances.size(); ++j)
    if (rep.distances[j] > rep.distances[j - 1] + 1e-12 * std::max(scale, 1.0)) rep.decreasing = false;
  rep.pass = rep.decreasing && rep.distances.back() <= tolerance * std::max(scale, 1e-300);
  if (scale == 0.0) rep.pass = rep.decreasing;
  return rep;
}

}  // namespace pdo
