#include "pdo/fredholm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include "pdo/errors.hpp"
#include "pdo/profiles.hpp"
#include "pdo/verify.hpp"

namespace pdo {

namespace {

std::string point_text(const Point& p) {
  std::ostringstream o;
  if (p.dim == 1)
    o << p[0];
  else
    o << "(" << p[0] << ", " << p[1] << ")";
  return o.str();
}

std::string location(const Point& x, const Point& xi) { return "x = " + point_text(x) + ", xi = " + point_text(xi); }

double normalized_det(const SymbolValue& v, double weight_power, const Point& xi) {
  return std::abs(v.determinant()) * std::pow(bracket(xi), -weight_power);
}

std::vector<Point> ellipticity_frequencies(int dim, const EllipticityPlan& plan) {
  std::vector<Point> out;
  out.push_back(dim == 1 ? Point(0.0) : Point(0.0, 0.0));
  for (double r : {0.25, 0.5}) {
    if (dim == 1) {
      out.emplace_back(r);
      out.emplace_back(-r);
    } else {
      for (int q = 0; q < 4; ++q) out.emplace_back(r * std::cos(0.5 * kPi * q), r * std::sin(0.5 * kPi * q));
    }
  }
  for (int j = 0; j <= plan.max_annulus; ++j)
    for (const auto& p : annulus_samples(dim, j, plan.points_per_annulus)) out.push_back(p);
  return out;
}

// Combined derivative index over (xi_1, xi_2, x_1, x_2).
using Index4 = std::array<int, 4>;

MultiIndex xi_part(const Index4& g) { return MultiIndex(g[0], g[1]); }
MultiIndex x_part(const Index4& g) { return MultiIndex(g[2], g[3]); }

std::vector<std::pair<Index4, double>> sub_indices4(const Index4& g) {
  std::vector<std::pair<Index4, double>> out;
  for (int a = 0; a <= g[0]; ++a)
    for (int b = 0; b <= g[1]; ++b)
      for (int c = 0; c <= g[2]; ++c)
        for (int d = 0; d <= g[3]; ++d)
          out.push_back({Index4{a, b, c, d},
                         binomial(g[0], a) * binomial(g[1], b) * binomial(g[2], c) * binomial(g[3], d)});
  return out;
}

Index4 minus(const Index4& a, const Index4& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]}; }
bool is_zero(const Index4& g) { return g[0] == 0 && g[1] == 0 && g[2] == 0 && g[3] == 0; }

SymbolValue invert(const SymbolValue& A, const Point& x, const Point& xi, const std::string& name) {
  const Eigen::Index N = A.rows();
  const double scale = std::max(max_abs(A), 1e-300);
  SymbolValue inv(N, N);
  Complex det;
  if (N == 1) {
    det = A(0, 0);
    inv(0, 0) = 1.0;
  } else if (N == 2) {
    det = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    inv << A(1, 1), -A(0, 1), -A(1, 0), A(0, 0);
  } else if (N == 3) {
    // Cramer: transpose of the cofactor matrix.
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        const int r1 = (c + 1) % 3, r2 = (c + 2) % 3, c1 = (r + 1) % 3, c2 = (r + 2) % 3;
        inv(r, c) = A(r1, c1) * A(r2, c2) - A(r1, c2) * A(r2, c1);
      }
    det = A(0, 0) * inv(0, 0) + A(0, 1) * inv(1, 0) + A(0, 2) * inv(2, 0);
  } else {
    Eigen::MatrixXcd d = A;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(d);
    det = lu.determinant();
    if (std::abs(det) > 1e-14 * std::pow(scale, static_cast<double>(N))) return SymbolValue(lu.inverse());
  }
  if (!(std::abs(det) > 1e-14 * std::pow(scale, static_cast<double>(N))))
    throw InversionError(name + ": symbol is singular at " + location(x, xi));
  return inv / det;
}

// d^g of psi(q), q = (|x|^2 + |xi|^2) / R^2, by tracking terms c psi^{(k)}(q) z^e.
double psi_derivative(const Point& x, const Point& xi, double R, const Index4& g, PsiProfile profile) {
  const std::array<double, 4> z{xi[0], xi.dim == 2 ? xi[1] : 0.0, x[0], x.dim == 2 ? x[1] : 0.0};
  using Key = std::array<int, 5>;  // (k, e_0..e_3)
  std::map<Key, double> terms{{Key{0, 0, 0, 0, 0}, 1.0}};
  const double r2 = R * R;
  for (int axis = 0; axis < 4; ++axis)
    for (int rep = 0; rep < g[static_cast<std::size_t>(axis)]; ++rep) {
      std::map<Key, double> next;
      for (const auto& [key, c] : terms) {
        Key up = key;
        up[0] += 1;
        up[static_cast<std::size_t>(axis) + 1] += 1;
        next[up] += 2.0 * c / r2;
        const int e = key[static_cast<std::size_t>(axis) + 1];
        if (e > 0) {
          Key down = key;
          down[static_cast<std::size_t>(axis) + 1] -= 1;
          next[down] += c * e;
        }
      }
      terms = std::move(next);
    }
  const double q = (x.norm_sq() + xi.norm_sq()) / r2;
  double out = 0.0;
  for (const auto& [key, c] : terms) {
    double mono = c * psi(q, key[0], profile);
    for (int i = 0; i < 4; ++i) mono *= std::pow(z[static_cast<std::size_t>(i)], key[static_cast<std::size_t>(i) + 1]);
    out += mono;
  }
  return out;
}

// d^g of A^{-1} from A A^{-1} = I; derivs(nu) returns d^nu A.
template <class Deriv>
SymbolValue inverse_derivative(const SymbolValue& inv, const Index4& g, const Deriv& derivs,
                               std::map<Index4, SymbolValue>& memo) {
  if (is_zero(g)) return inv;
  auto it = memo.find(g);
  if (it != memo.end()) return it->second;
  SymbolValue acc = SymbolValue::Zero(inv.rows(), inv.cols());
  for (const auto& [nu, w] : sub_indices4(g)) {
    if (is_zero(nu)) continue;
    acc += w * derivs(nu) * inverse_derivative(inv, minus(g, nu), derivs, memo);
  }
  SymbolValue out = -inv * acc;
  memo.emplace(g, out);
  return out;
}

double fit_tail(const std::vector<double>& sigma, int k_lo, int k_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double s = sigma[static_cast<std::size_t>(k - 1)];
    if (!(s > 0.0)) continue;
    const double lx = std::log(static_cast<double>(k)), ly = std::log(s);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 3) return kInf;
  const double den = n * sxx - sx * sx;
  if (den <= 0.0) return kInf;
  return -(n * sxy - sx * sy) / den;
}

Eigen::MatrixXcd band_limit(const Eigen::MatrixXcd& m, const Grid& g, int N, double fraction) {
  if (fraction >= 1.0) return m;
  const double cutoff = fraction * g.nyquist();
  auto mask = [cutoff](const Point& xi) {
    for (int i = 0; i < xi.dim; ++i)
      if (std::abs(xi[i]) > cutoff) return 0.0;
    return 1.0;
  };
  return multiplier_right(multiplier_left(m, g, N, mask), g, N, mask);
}

template <class F>
auto staged(const std::string& stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    e.rethrow_in_stage(stage);
  }
}

}  // namespace

// ---- Ellipticity ---------------------------------------------------------------------

EllipticityReport ellipticity_check(const Symbol& a, const EllipticityPlan& plan) {
  if (plan.x_grid.dim() != a.dim()) throw ShapeError("ellipticity plan and symbol dimensions differ");
  if (plan.radii.empty()) throw ParameterError("ellipticity check needs candidate radii");
  EllipticityReport rep;
  rep.symbol = a.name();
  rep.order = a.spec().order;
  // det a has order N m; the normalization reduces to <xi>^{-m} for scalar symbols.
  const double weight = a.matrix_dim() * rep.order;
  const std::vector<Point> xis = ellipticity_frequencies(a.dim(), plan);
  const std::size_t X = plan.x_grid.size();
  std::vector<std::vector<double>> vals(X, std::vector<double>(xis.size()));
  std::vector<double> limit_gap(X, 0.0);
  const bool limit = plan.check_limit;
  if (limit && !a.has_limit())
    throw CapabilityError(a.name() + ": the limit condition needs a(infinity, xi)");
  parallel_for(X, [&](std::size_t i) {
    const Point x = plan.x_grid.point(i);
    for (std::size_t j = 0; j < xis.size(); ++j) {
      const SymbolValue v = a.eval(x, xis[j]);
      vals[i][j] = normalized_det(v, weight, xis[j]);
      if (limit)
        limit_gap[i] = std::max(limit_gap[i], max_abs(v - a.limit(xis[j])) * std::pow(bracket(xis[j]), -rep.order));
    }
  });
  double best = 0.0;
  for (double r : plan.radii) {
    double m = kInf;
    for (std::size_t i = 0; i < X; ++i) {
      const double xn = plan.x_grid.point(i).norm();
      for (std::size_t j = 0; j < xis.size(); ++j)
        if (xn + xis[j].norm() >= r) m = std::min(m, vals[i][j]);
    }
    if (std::isfinite(m)) {
      rep.det_min_profile.emplace_back(r, m);
      best = std::max(best, m);
    }
  }
  if (rep.det_min_profile.empty()) throw ParameterError("no lattice point lies outside the candidate radii");
  rep.R = rep.det_min_profile.back().first;
  for (const auto& [r, m] : rep.det_min_profile)
    if (best > 0.0 && m >= 0.5 * best) {
      rep.R = r;
      rep.C0 = m;
      break;
    }
  const double floor = plan.violation_fraction * best;
  for (std::size_t i = 0; i < X && rep.violating_points.size() < 32; ++i)
    for (std::size_t j = 0; j < xis.size() && rep.violating_points.size() < 32; ++j)
      if (vals[i][j] <= floor) rep.violating_points.push_back({plan.x_grid.point(i), xis[j], vals[i][j]});
  if (!(rep.C0 > 0.0)) rep.warnings.push_back("hypothesis ellipticity: |det a| <xi>^{-m} is not bounded below on the lattice");

  if (limit) {
    std::vector<Point> xs(X);
    for (std::size_t i = 0; i < X; ++i) xs[i] = plan.x_grid.point(i);
    const double box = plan.x_grid.box_length();
    const EnvelopeEstimate env = x_envelope(xs, limit_gap, box, 1.0 / 8.0, 1.0 / 2.5);
    rep.limit_checked = true;
    rep.limit_envelope = env.envelope;
    rep.limit_decreasing = env.pass;
    if (!env.pass)
      rep.warnings.push_back("hypothesis limit at infinity: sup_xi |a(x, xi) - a(infinity, xi)| <xi>^{-m} does not decay in |x|");
  }
  rep.pass = rep.C0 > 0.0 && (!rep.limit_checked || rep.limit_decreasing);
  return rep;
}

// ---- Parametrix ------------------------------------------------------------------------

PsiProfile parse_psi_profile(const std::string& name) {
  if (name == "quintic") return PsiProfile::quintic;
  if (name == "smooth") return PsiProfile::smooth;
  throw LookupError("unknown psi profile '" + name + "' (known: quintic, smooth)");
}

const char* to_string(PsiProfile p) { return p == PsiProfile::quintic ? "quintic" : "smooth"; }

double psi(double t, int k, PsiProfile profile) {
  if (t <= 1.0) return 0.0;
  if (t >= 2.0) return k == 0 ? 1.0 : 0.0;
  if (profile == PsiProfile::smooth) {
    const double d = step_derivatives(BumpProfile::exp_bump, t, k)[static_cast<std::size_t>(k)];
    return k == 0 ? 1.0 - d : -d;
  }
  const double u = t - 1.0;
  switch (k) {
    case 0: return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
    case 1: return 30.0 * u * u * (1.0 - u) * (1.0 - u);
    case 2: return 60.0 * u * (1.0 - u) * (1.0 - 2.0 * u);
    case 3: return 60.0 * (1.0 - 6.0 * u + 6.0 * u * u);
    case 4: return 60.0 * (12.0 * u - 6.0);
    case 5: return 720.0;
    default: return 0.0;
  }
}

Symbol build_parametrix(const Symbol& a, const ParametrixConfig& cfg) {
  if (!(cfg.R > 0.0)) throw ParameterError("parametrix radius must be positive");
  const double R = cfg.R;
  const PsiProfile profile = cfg.psi_profile;
  const std::string name = a.name();
  auto eval = [a, R, profile, name](const Point& x, const Point& xi, const MultiIndex& al,
                                    const MultiIndex& be) -> SymbolValue {
    const int N = a.matrix_dim();
    if ((x.norm_sq() + xi.norm_sq()) <= R * R) return SymbolValue::Zero(N, N);
    const SymbolValue inv = invert(a.eval(x, xi), x, xi, name);
    const Index4 g{al[0], al[1], be[0], be[1]};
    std::map<Index4, SymbolValue> memo;
    auto derivs = [&](const Index4& nu) { return a.eval(x, xi, xi_part(nu), x_part(nu)); };
    SymbolValue out = SymbolValue::Zero(N, N);
    for (const auto& [nu, w] : sub_indices4(g)) {
      const double p = psi_derivative(x, xi, R, nu, profile);
      if (p == 0.0) continue;
      out += (w * p) * inverse_derivative(inv, minus(g, nu), derivs, memo);
    }
    return out;
  };
  std::optional<LimitEval> limit;
  if (a.has_limit())
    limit = [a, name](const Point& xi, const MultiIndex& al) -> SymbolValue {
      const Point far = xi.dim == 1 ? Point(kInf) : Point(kInf, kInf);
      const SymbolValue inv = invert(a.limit(xi), far, xi, name + " at infinity");
      std::map<Index4, SymbolValue> memo;
      auto derivs = [&](const Index4& nu) { return a.limit(xi, xi_part(nu)); };
      return inverse_derivative(inv, Index4{al[0], al[1], 0, 0}, derivs, memo);
    };
  SymbolClassSpec spec = a.spec();
  spec.order = -a.spec().order;
  const auto& sup = a.support();
  return Symbol("parametrix(" + name + ")", a.dim(), spec, eval,
                DerivativeSupport{sup.max_xi, sup.max_x, sup.max_xi, sup.max_x}, limit);
}

Symbol adjoint_symbol(const Symbol& a) {
  auto eval = [a](const Point& x, const Point& xi, const MultiIndex& al, const MultiIndex& be) -> SymbolValue {
    return a.eval(x, xi, al, be).adjoint();
  };
  std::optional<LimitEval> limit;
  if (a.has_limit()) limit = [a](const Point& xi, const MultiIndex& al) -> SymbolValue { return a.limit(xi, al).adjoint(); };
  const auto& sup = a.support();
  return Symbol(a.name() + "^*", a.dim(), a.spec(), eval, DerivativeSupport{sup.max_xi, sup.max_x, sup.max_xi, sup.max_x},
                limit, a.x_independent());
}

// ---- Compactness proxy ------------------------------------------------------------------

const char* to_string(CompactnessVerdict v) {
  switch (v) {
    case CompactnessVerdict::compact_like: return "compact-like";
    case CompactnessVerdict::not_compact_like: return "not-compact-like";
    case CompactnessVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::vector<double> singular_values(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

KernelCount kernel_count(const std::vector<double>& sigma, double rel_threshold) {
  KernelCount k;
  if (sigma.empty()) return k;
  k.sigma_max = *std::max_element(sigma.begin(), sigma.end());
  k.sigma_min = *std::min_element(sigma.begin(), sigma.end());
  k.threshold = rel_threshold * k.sigma_max;
  k.count = static_cast<int>(std::count_if(sigma.begin(), sigma.end(), [&](double s) { return s < k.threshold; }));
  return k;
}

CompactnessReport compactness_proxy(const std::vector<LevelMatrix>& levels, const CompactnessOptions& options) {
  if (levels.size() < 2) throw ParameterError("compactness proxy needs at least two refinement levels");
  CompactnessReport rep;
  rep.levels.resize(levels.size());
  parallel_for(levels.size(), [&](std::size_t l) {
    rep.levels[l].points = levels[l].points;
    rep.levels[l].singular_values = singular_values(levels[l].matrix);
  });
  std::size_t fine = 0;
  for (std::size_t l = 1; l < levels.size(); ++l)
    if (levels[l].matrix.rows() > levels[fine].matrix.rows()) fine = l;
  const auto& sf = rep.levels[fine].singular_values;
  double top = 0.0;
  for (const auto& lv : rep.levels)
    if (!lv.singular_values.empty()) top = std::max(top, lv.singular_values.front());
  if (!(top > options.zero_tolerance)) {
    rep.tail_exponent = kInf;
    rep.verdict = CompactnessVerdict::compact_like;
    rep.notes.push_back("numerically zero: every singular value is below the zero tolerance");
    return rep;
  }
  // Leading eighth of the smallest level: modes every level resolves.
  std::size_t smallest = sf.size();
  for (const auto& lv : rep.levels) smallest = std::min(smallest, lv.singular_values.size());
  const double sig = options.significance * sf.front();
  std::size_t compared = std::max<std::size_t>(smallest / 8, 1);
  std::size_t significant = 0;
  while (significant < sf.size() && sf[significant] > sig) ++significant;
  compared = std::min(compared, significant);
  rep.compared = static_cast<int>(compared);
  rep.stability.assign(compared, 0.0);
  for (std::size_t k = 0; k < compared; ++k)
    for (const auto& lv : rep.levels)
      rep.stability[k] = std::max(rep.stability[k], std::abs(lv.singular_values[k] - sf[k]) / sf[k]);
  for (double d : rep.stability) rep.max_stability = std::max(rep.max_stability, d);

  const int k_hi = static_cast<int>(std::min(sf.size() / 8, significant));
  const int k_lo = std::max(1, k_hi / 8);
  rep.tail_exponent = k_hi >= 1 ? fit_tail(sf, k_lo, k_hi) : kInf;

  rep.plateau = true;
  for (const auto& lv : rep.levels) {
    const auto& s = lv.singular_values;
    const std::size_t q = std::max<std::size_t>(s.size() / 8, 1) - 1;
    if (!(s.front() > 0.0) || s[q] < options.plateau_fraction * s.front()) rep.plateau = false;
  }
  if (rep.plateau) {
    rep.verdict = CompactnessVerdict::not_compact_like;
    rep.notes.push_back("singular values plateau at a positive level on every refinement");
  } else if (rep.max_stability <= options.stability_tolerance && rep.tail_exponent > options.tail_exponent_min) {
    rep.verdict = CompactnessVerdict::compact_like;
  } else {
    rep.verdict = CompactnessVerdict::inconclusive;
    std::ostringstream o;
    o << "stability " << rep.max_stability << " (limit " << options.stability_tolerance << "), tail exponent "
      << rep.tail_exponent << " (limit " << options.tail_exponent_min << ")";
    rep.notes.push_back(o.str());
  }
  return rep;
}

// ---- Experiments ------------------------------------------------------------------------

TheoremParameters theorem_parameters(const SymbolClassSpec& spec, int dim, const FredholmExperimentConfig& cfg) {
  if (!(cfg.p > 1.0)) throw ParameterError("p must exceed 1");
  TheoremParameters tp;
  const double mt = spec.holder_total();
  const double rd = spec.rho - spec.delta;
  if (spec.holder_int < 1)
    tp.warnings.push_back("hypothesis m~ in N: the x-regularity index is 0, the theorem asks for m~ >= 1");
  if (!(rd > 0.0)) tp.warnings.push_back("hypothesis delta < rho: the theta interval is empty");
  if (cfg.p != 2.0) tp.warnings.push_back("hypothesis p: norms are computed for p = 2 only");
  const double M_need = (dim + 2) + dim * std::max(0.5, 1.0 / cfg.p);
  if (spec.xi_regularity != kUnbounded && spec.xi_regularity < M_need) {
    std::ostringstream o;
    o << "hypothesis M >= (n+2) + n max{1/2, 1/p}: M = " << spec.xi_regularity << " < " << M_need;
    tp.warnings.push_back(o.str());
  }
  tp.theta_max = std::max(std::min(mt * rd, 1.0), 0.0);
  if (cfg.theta) {
    if (!(*cfg.theta > 0.0 && *cfg.theta < tp.theta_max)) {
      std::ostringstream o;
      o << "theta = " << *cfg.theta << " lies outside (0, " << tp.theta_max << ")";
      throw ParameterError(o.str());
    }
    tp.theta = *cfg.theta;
  } else {
    tp.theta = 0.5 * tp.theta_max;
  }
  tp.eps_max = std::max(std::min({rd * spec.holder_frac, rd * mt - tp.theta, tp.theta}), 0.0);
  if (cfg.eps_tilde) {
    if (!(*cfg.eps_tilde > 0.0 && *cfg.eps_tilde < tp.eps_max)) {
      std::ostringstream o;
      o << "eps_tilde = " << *cfg.eps_tilde << " lies outside (0, " << tp.eps_max << ")";
      throw ParameterError(o.str());
    }
    tp.eps_tilde = *cfg.eps_tilde;
  } else {
    tp.eps_tilde = 0.5 * tp.eps_max;
  }
  tp.window.lo = (1.0 - spec.rho) * dim / 2.0 - (1.0 - spec.delta) * mt + tp.theta + tp.eps_tilde;
  tp.window.hi = mt;
  tp.in_window = tp.window.contains(cfg.s);
  if (!tp.in_window) {
    std::ostringstream o;
    o << "hypothesis s-window: s = " << cfg.s << " lies outside (" << tp.window.lo << ", " << tp.window.hi
      << "); result is out-of-theorem";
    tp.warnings.push_back(o.str());
  }
  return tp;
}

CompactnessReport composition_residual(const Symbol& a1, const Symbol& a2, const FredholmExperimentConfig& cfg) {
  if (a1.dim() != a2.dim() || a1.matrix_dim() != a2.matrix_dim()) throw ShapeError("composition residual: symbol shapes differ");
  const int n = a1.dim(), N = a1.matrix_dim();
  const auto& s1 = a1.spec();
  const auto& s2 = a2.spec();
  std::vector<std::string> warnings;
  const double rho = std::min(s1.rho, s2.rho), delta = std::max(s1.delta, s2.delta), rd = rho - delta;
  const double mt2 = s2.holder_total();
  const double theta_max = mt2 * rd;
  double theta = cfg.theta.value_or(0.5 * theta_max);
  if (!(theta > 0.0 && theta < theta_max)) {
    std::ostringstream o;
    o << "theta = " << theta << " lies outside (0, " << theta_max << ")";
    throw ParameterError(o.str());
  }
  if (theta == std::floor(theta)) warnings.push_back("hypothesis theta not in N_0: accepted, the expansion order is ceil(theta)");
  const double eps_max = std::min({rd * s2.holder_frac, rd * mt2 - theta, theta});
  const double eps = cfg.eps_tilde.value_or(0.5 * eps_max);
  if (!(eps > 0.0 && eps < eps_max)) {
    std::ostringstream o;
    o << "eps_tilde = " << eps << " lies outside (0, " << eps_max << ")";
    throw ParameterError(o.str());
  }
  const double sreg = std::min(s1.holder_total(), mt2 - std::floor(theta));
  const double mt = std::floor(sreg), tau = sreg - mt;
  const double lo1 = (1.0 - rho) * n / 2.0 - (1.0 - delta) * mt2 + theta + eps;
  const double hi1 = mt + s2.holder_frac;
  const double lo2 = (1.0 - rho) * n / 2.0 - (1.0 - delta) * (mt + tau) + (mt + tau) / mt2 * (theta + eps);
  const double hi2 = mt + tau;
  const double s = cfg.s;
  if (!(s + s1.order > lo1 && s + s1.order < hi1 && s > lo2 && s < hi2)) {
    std::ostringstream o;
    o << "hypothesis s-window: s = " << s << " violates (" << lo1 << " < s + m1 < " << hi1 << ") or (" << lo2
      << " < s < " << hi2 << "); result is out-of-theorem";
    warnings.push_back(o.str());
  }
  if (s2.variant != SymbolVariant::tilde && !a2.x_independent())
    warnings.push_back("hypothesis a2 slowly varying: the right factor does not claim the tilde class");
  const int k = static_cast<int>(std::ceil(theta));
  const Symbol sharp = sharp_symbol(a1, a2, k);
  std::vector<LevelMatrix> mats;
  for (int P : cfg.levels) {
    const Grid g(n, cfg.half_length, P);
    staged("composition residual at P = " + std::to_string(P), [&] {
      DiscretizedOperator K = subtract(compose(quantize(a1, g, N), quantize(a2, g, N)), quantize(sharp, g, N));
      K.source_order = s1.order + s2.order;
      K.target_order = 0.0;
      mats.push_back({P, band_limit(sobolev_conjugate(K, s), g, N, cfg.band_fraction)});
      return 0;
    });
  }
  CompactnessReport rep = compactness_proxy(mats, cfg.compactness);
  rep.notes.insert(rep.notes.begin(), warnings.begin(), warnings.end());
  rep.notes.push_back("expansion order k = " + std::to_string(k));
  return rep;
}

int winding_index(const Symbol& a, double R, int samples, std::optional<double> c0) {
  if (a.dim() != 1 || a.matrix_dim() != 1) throw ShapeError("winding index needs n = N = 1");
  if (!(R > 0.0) || samples < 16) throw ParameterError("winding index needs R > 0 and at least 16 samples");
  double C0;
  if (c0) {
    C0 = *c0;
  } else {
    EllipticityPlan plan;
    plan.check_limit = false;
    C0 = ellipticity_check(a, plan).C0;
  }
  const double m = a.spec().order;
  auto value = [&](double x, double xi) { return a.scalar(x, xi) * std::pow(bracket(xi), -m); };
  // Counterclockwise in the (x, xi) plane, starting at (R, -R).
  const std::array<std::array<double, 4>, 4> edges{{{R, -R, R, R}, {R, R, -R, R}, {-R, R, -R, -R}, {-R, -R, R, -R}}};
  const int per_edge = (samples + 3) / 4;
  double total = 0.0;
  Complex prev = value(R, -R);
  for (const auto& e : edges)
    for (int i = 1; i <= per_edge; ++i) {
      const double t = static_cast<double>(i) / per_edge;
      const double x = e[0] + t * (e[2] - e[0]), xi = e[1] + t * (e[3] - e[1]);
      const Complex z = value(x, xi);
      if (std::abs(z) < 0.1 * C0) throw ConditioningError(a.name() + ": |a~| is near zero on the winding loop at " + location(x, xi));
      const double step = std::arg(z / prev);
      if (std::abs(step) > 0.5 * kPi)
        throw ConditioningError(a.name() + ": winding loop under-resolved near " + location(x, xi));
      total += step;
      prev = z;
    }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

FredholmReport fredholm_experiment(const Symbol& a, const FredholmExperimentConfig& cfg) {
  if (cfg.levels.size() < 2) throw ParameterError("fredholm experiment needs at least two refinement levels");
  FredholmReport rep;
  rep.symbol = a.name();
  rep.order = a.spec().order;
  rep.s = cfg.s;
  const int n = a.dim(), N = a.matrix_dim();
  rep.parameters = staged("parameters", [&] { return theorem_parameters(a.spec(), n, cfg); });
  rep.warnings = rep.parameters.warnings;

  EllipticityPlan eplan = cfg.ellipticity;
  if (eplan.x_grid.dim() != n) eplan.x_grid = Grid(n, eplan.x_grid.half_length(), n == 1 ? 64 : 16);
  rep.ellipticity = staged("ellipticity", [&] { return ellipticity_check(a, eplan); });
  rep.warnings.insert(rep.warnings.end(), rep.ellipticity.warnings.begin(), rep.ellipticity.warnings.end());

  const double m = a.spec().order;
  const Symbol at = xi_weight(-m, a).renamed(a.name() + "~");
  rep.R = cfg.R.value_or(std::max(rep.ellipticity.R, 1.0));
  const Symbol b = staged("parametrix", [&] { return build_parametrix(at, ParametrixConfig{rep.R, cfg.psi_profile}); });

  std::vector<LevelMatrix> right, left;
  std::vector<std::vector<double>> sigma_a, sigma_adj;
  for (int P : cfg.levels) {
    const Grid g(n, cfg.half_length, P);
    staged("residuals at P = " + std::to_string(P), [&] {
      const DiscretizedOperator A = quantize(at, g, N), B = quantize(b, g, N);
      const DiscretizedOperator I = identity_operator(g, N);
      right.push_back({P, band_limit(sobolev_conjugate(subtract(compose(A, B), I), cfg.s), g, N, cfg.band_fraction)});
      left.push_back({P, band_limit(sobolev_conjugate(subtract(compose(B, A), I), cfg.s), g, N, cfg.band_fraction)});
      const Eigen::MatrixXcd Ac = sobolev_conjugate(quantize(a, g, N), cfg.s);
      sigma_a.push_back(singular_values(Ac));
      sigma_adj.push_back(singular_values(Ac.adjoint()));
      return 0;
    });
  }
  rep.residual_right = staged("compactness of op(a~) op(b) - I", [&] { return compactness_proxy(right, cfg.compactness); });
  rep.residual_left = staged("compactness of op(b) op(a~) - I", [&] { return compactness_proxy(left, cfg.compactness); });

  for (std::size_t l = 0; l < cfg.levels.size(); ++l)
    rep.kernel_levels.push_back({cfg.levels[l], kernel_count(sigma_a[l], cfg.svd_threshold),
                                 kernel_count(sigma_adj[l], cfg.svd_threshold), sigma_a[l]});
  std::size_t fine = 0;
  for (std::size_t l = 1; l < cfg.levels.size(); ++l)
    if (cfg.levels[l] > cfg.levels[fine]) fine = l;
  rep.kernel_dim = rep.kernel_levels[fine].kernel.count;
  rep.cokernel_dim = rep.kernel_levels[fine].cokernel.count;
  rep.kernel_at_threshold_range = {kernel_count(sigma_a[fine], 0.1 * cfg.svd_threshold).count,
                                   kernel_count(sigma_a[fine], 10.0 * cfg.svd_threshold).count};
  rep.threshold_robust =
      rep.kernel_at_threshold_range.first == rep.kernel_dim && rep.kernel_at_threshold_range.second == rep.kernel_dim;
  if (!rep.threshold_robust)
    rep.notes.push_back("threshold robustness: kernel count changes within a factor 10 of the threshold; inconclusive");

  if (n == 1 && N == 1) {
    rep.winding = staged("winding", [&] { return winding_index(a, 2.0 * rep.R, cfg.winding_samples, rep.ellipticity.C0); });
    rep.index = *rep.winding;
    rep.index_method = "winding";
  } else {
    rep.index = rep.kernel_dim - rep.cokernel_dim;
    rep.index_method = "kernel_count";
  }
  rep.caveat =
      "square truncations have equal kernel and cokernel counts, so a count-based index is 0 unless the threshold "
      "separates them asymmetrically";
  rep.fredholm_like = rep.ellipticity.pass && rep.threshold_robust &&
                      rep.residual_right.verdict == CompactnessVerdict::compact_like &&
                      rep.residual_left.verdict == CompactnessVerdict::compact_like;
  return rep;
}

}  // namespace pdo
