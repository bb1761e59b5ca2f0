#include "pdo/smoothing.hpp"

#include <algorithm>
#include <cmath>

#include "pdo/errors.hpp"
#include "pdo/tabulated.hpp"

namespace pdo {

SmoothingConfig SmoothingConfig::make(const Grid& grid, double gamma, BumpProfile profile, int j_max, double eps_tilde) {
  SmoothingConfig c;
  c.grid = grid;
  c.gamma = gamma;
  c.partition = DyadicPartition(build_cutoffs(profile), j_max < 0 ? default_j_max(grid) : j_max, gamma);
  c.eps_tilde = eps_tilde;
  return c;
}

namespace {

// Indices whose open support contains |xi|; the partition is extended past J_max so the sum is exact everywhere.
std::vector<int> support_indices(const Point& xi) {
  const double r = xi.norm();
  std::vector<int> out;
  if (r < 2.0) out.push_back(0);
  for (int j = 1; j < 62; ++j) {
    const double lo = std::ldexp(1.0, j - 1), hi = std::ldexp(1.0, j + 1);
    if (r <= lo) break;
    if (r < hi) out.push_back(j);
  }
  return out;
}

double psi_derivative(const CutoffPair& c, int j, const Point& xi, const MultiIndex& alpha) {
  if (j == 0) return c.psi0_derivative(xi, 1.0, alpha);
  return c.psi0_derivative(xi, std::ldexp(1.0, j), alpha) - c.psi0_derivative(xi, std::ldexp(1.0, j - 1), alpha);
}

Symbol zero_symbol(const std::string& name, int dim, const SymbolClassSpec& spec) {
  const int N = spec.matrix_dim;
  SymbolEval eval = [N](const Point&, const Point&, const MultiIndex&, const MultiIndex&) {
    return SymbolValue(SymbolValue::Zero(N, N));
  };
  LimitEval lim = [N](const Point&, const MultiIndex&) { return SymbolValue(SymbolValue::Zero(N, N)); };
  return Symbol(name, dim, spec, eval, DerivativeSupport{kUnbounded, kUnbounded, kUnbounded, kUnbounded}, lim, true);
}

double effective_eps_tilde(const SmoothingConfig& cfg, const SymbolClassSpec& spec) {
  if (cfg.eps_tilde > 0.0) return cfg.eps_tilde;
  return 0.5 * (cfg.gamma - spec.delta) * spec.holder_frac;
}

}  // namespace

SmoothingSplit split(const Symbol& a, const SmoothingConfig& cfg) {
  const auto& spec = a.spec();
  if (!(cfg.gamma > spec.delta && cfg.gamma < spec.rho))
    throw ParameterError("smoothing exponent gamma must lie strictly between delta and rho");
  if (cfg.grid.dim() != a.dim()) throw ShapeError("smoothing grid dimension differs from the symbol dimension");
  const double eps_tilde = effective_eps_tilde(cfg, spec);
  if (!(eps_tilde > 0.0 && eps_tilde < (cfg.gamma - spec.delta) * spec.holder_frac))
    throw ParameterError("eps~ must lie in (0, (gamma - delta) tau)");

  SymbolClassSpec sharp_spec = spec;
  sharp_spec.delta = cfg.gamma;
  SymbolClassSpec flat_spec = spec;
  flat_spec.delta = cfg.gamma;
  flat_spec.order = spec.order - (cfg.gamma - spec.delta) * spec.holder_total();

  if (a.x_independent()) {
    // J_eps fixes functions constant in x, so the split is exact.
    return SmoothingSplit{a, a.renamed(a.name() + "#").with_spec(sharp_spec),
                          zero_symbol(a.name() + "_flat", a.dim(), flat_spec), cfg, eps_tilde};
  }

  const Grid grid = cfg.grid;
  const CutoffPair cut = cfg.partition.cutoffs();
  const double gamma = cfg.gamma;
  const int N2 = a.matrix_dim() * a.matrix_dim();
  ColumnProvider provider = [a, grid, cut, gamma, N2](const Point& xi, const MultiIndex& alpha) {
    const std::size_t n = grid.size();
    const auto C = static_cast<std::size_t>(N2);
    ColumnCoefficients out(n * C, Complex(0.0, 0.0));
    const auto js = support_indices(xi);
    for (const auto& [a1, w] : sub_indices(alpha)) {
      const MultiIndex a2(alpha[0] - a1[0], alpha[1] - a1[1]);
      // sum_j d^{a2} psi_j(xi) phi(eps_j eta)
      std::vector<std::pair<double, double>> terms;
      for (int j : js) {
        const double p = psi_derivative(cut, j, xi, a2);
        if (p != 0.0) terms.emplace_back(p, std::exp2(-j * gamma));
      }
      if (terms.empty()) continue;
      const ColumnCoefficients c = sample_coefficients(a, grid, xi, a1);
      for (std::size_t q = 0; q < n; ++q) {
        const Point eta = grid.frequency_point(q);
        double m = 0.0;
        for (const auto& [p, eps] : terms) m += p * cut.phi(eps * eta);
        if (m == 0.0) continue;
        for (std::size_t k = 0; k < C; ++k) out[q * C + k] += w * m * c[q * C + k];
      }
    }
    return out;
  };
  TabulatedOptions opt;
  opt.max_xi = std::min(a.support().max_xi, spec.xi_regularity);
  if (a.has_limit()) {
    opt.limit = [a](const Point& xi, const MultiIndex& alpha) { return a.limit(xi, alpha); };
  }
  Symbol sharp = tabulated_symbol(a.name() + "#", grid, sharp_spec, provider, opt);

  SymbolEval flat_eval = [a, sharp](const Point& x, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) {
    return SymbolValue(a.eval(x, xi, alpha, beta) - sharp.eval(x, xi, alpha, beta));
  };
  const int mx = std::min(a.support().max_x, kTabulatedXOrder);
  std::optional<LimitEval> flat_limit;
  if (a.has_limit()) {
    const int N = a.matrix_dim();
    flat_limit = [N](const Point&, const MultiIndex&) { return SymbolValue(SymbolValue::Zero(N, N)); };
  }
  Symbol flat(a.name() + "_flat", a.dim(), flat_spec, flat_eval, DerivativeSupport{opt.max_xi, mx, opt.max_xi, mx},
              flat_limit);
  return SmoothingSplit{a, sharp, flat, cfg, eps_tilde};
}

std::pair<int, int> fitted_annuli(const SmoothingConfig& cfg) {
  const int lo = 1, hi = cfg.partition.j_max() - 3;
  if (hi - lo + 1 < 4) throw ParameterError("grid too coarse: smoothing fits need at least 4 annuli below 2^{J_max-2}");
  return {lo, hi};
}

namespace {

struct FitSamples {
  std::vector<Point> xis;
};

FitSamples fit_samples(const SmoothingConfig& cfg, int count) {
  const auto [lo, hi] = fitted_annuli(cfg);
  FitSamples f;
  for (int j = lo; j <= hi; ++j)
    for (const auto& p : annulus_samples(cfg.grid.dim(), j, count)) f.xis.push_back(p);
  return f;
}

// Per lattice x, max entry magnitude of the column.
std::vector<double> column_magnitudes(const Symbol& s, const Grid& g, const Point& xi, const MultiIndex& alpha,
                                      const MultiIndex& beta) {
  std::vector<double> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = max_abs(s.eval(g.point(k), xi, alpha, beta));
  return out;
}

GridFunction column_function(const Symbol& s, const Grid& g, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) {
  const int N = s.matrix_dim();
  GridFunction f(g, N * N);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const SymbolValue v = s.eval(g.point(k), xi, alpha, beta);
    for (int c = 0; c < N * N; ++c) f.at(k, c) = v(c / N, c % N);
  }
  return f;
}

// Constant, fit and optional envelope for one (alpha, beta) over the sampled frequencies.
ConstantEstimate lattice_constant(const Symbol& s, const Grid& g, const std::vector<Point>& xis, const MultiIndex& alpha,
                                  const MultiIndex& beta, double order, double tol, EnvelopeEstimate* env,
                                  const SmoothingCheckOptions& o) {
  std::vector<std::vector<double>> mags(xis.size());
  parallel_for(xis.size(), [&](std::size_t i) { mags[i] = column_magnitudes(s, g, xis[i], alpha, beta); });
  ConstantEstimate est;
  est.alpha = alpha;
  est.beta = beta;
  est.claimed_order = order;
  std::vector<std::pair<double, double>> pairs;
  std::vector<double> cx(g.size(), 0.0);
  for (std::size_t i = 0; i < xis.size(); ++i) {
    const double b = bracket(xis[i]);
    const double w = std::pow(b, -order);
    double m = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      m = std::max(m, mags[i][k]);
      cx[k] = std::max(cx[k], mags[i][k] * w);
    }
    pairs.emplace_back(b, m);
    est.constant = std::max(est.constant, m * w);
  }
  est.fit = fit_decay_exponent(pairs);
  est.pass = std::isfinite(est.constant) && (est.fit.exponent == -kInf || est.fit.exponent <= order + tol);
  if (env) {
    std::vector<Point> pts;
    for (std::size_t k = 0; k < g.size(); ++k) pts.push_back(g.point(k));
    *env = x_envelope(pts, cx, g.box_length(), o.envelope_inner, o.envelope_outer);
    env->alpha = alpha;
    env->beta = beta;
    env->claimed_order = order;
  }
  return est;
}

int alpha_limit(const SmoothingSplit& s, const SmoothingCheckOptions& o) {
  return std::min({o.alpha_cap, s.source.spec().xi_regularity, s.a_sharp.support().max_xi});
}

}  // namespace

SeminormReport verify_sharp(const SmoothingSplit& s, int max_extra_derivs, SmoothingCheckOptions o) {
  const auto& spec = s.source.spec();
  const int mt = spec.holder_int;
  const int kmax = mt + max_extra_derivs;
  if (max_extra_derivs < 0) throw ParameterError("max_extra_derivs must be nonnegative");
  if (kmax > kTabulatedXOrder)
    throw CapabilityError("x-derivatives of order " + std::to_string(kmax) + " exceed the tabulation accuracy");
  const Grid& g = s.config.grid;
  const auto xis = fit_samples(s.config, o.points_per_annulus).xis;
  const double gamma = s.config.gamma;
  SeminormReport rep;
  rep.symbol = s.a_sharp.name();
  rep.spec = s.a_sharp.spec();
  const bool dot = spec.variant == SymbolVariant::dot;
  const bool tilde = spec.variant == SymbolVariant::tilde;
  for (int ao = 0; ao <= alpha_limit(s, o); ++ao)
    for (const auto& alpha : multi_indices_of_order(g.dim(), ao))
      for (int k = 0; k <= kmax; ++k)
        for (const auto& beta : multi_indices_of_order(g.dim(), k)) {
          const int kb = std::min(k, mt);
          const double order = spec.order - spec.rho * ao + spec.delta * kb + gamma * (k - kb);
          const bool want_env = dot || (tilde && k >= 1);
          EnvelopeEstimate env;
          rep.constants.push_back(lattice_constant(s.a_sharp, g, xis, alpha, beta, order, o.tolerance, want_env ? &env : nullptr, o));
          rep.pass = rep.pass && rep.constants.back().pass;
          if (want_env) {
            rep.envelopes.push_back(env);
            rep.pass = rep.pass && env.pass;
          }
        }
  if (s.source.x_independent()) rep.notes.push_back("x-independent source: a# = a");
  return rep;
}

SeminormReport verify_flat(const SmoothingSplit& s, SmoothingCheckOptions o) {
  const auto& spec = s.source.spec();
  const int mt = spec.holder_int;
  const double tau = spec.holder_frac;
  const Grid& g = s.config.grid;
  const auto xis = fit_samples(s.config, o.points_per_annulus).xis;
  const double gamma = s.config.gamma;
  const double base = spec.order - (gamma - spec.delta) * (mt + tau);
  SeminormReport rep;
  rep.symbol = s.a_flat.name();
  rep.spec = s.a_flat.spec();
  const bool dot = spec.variant == SymbolVariant::dot;
  const bool tilde = spec.variant == SymbolVariant::tilde;
  const double window = o.window_fraction * g.box_length();
  for (int ao = 0; ao <= alpha_limit(s, o); ++ao)
    for (const auto& alpha : multi_indices_of_order(g.dim(), ao))
      for (int k = 0; k <= std::min(mt, s.a_flat.support().max_x); ++k)
        for (const auto& beta : multi_indices_of_order(g.dim(), k)) {
          const double order = base + gamma * k - spec.rho * ao;
          rep.constants.push_back(lattice_constant(s.a_flat, g, xis, alpha, beta, order, o.tolerance, nullptr, o));
          rep.pass = rep.pass && rep.constants.back().pass;

          // Holder norm of order m~ - |beta|, tau
          const double horder = order + gamma * (mt - k + tau);
          std::vector<double> norms(xis.size());
          parallel_for(xis.size(), [&](std::size_t i) {
            norms[i] = holder_norm_estimate(column_function(s.a_flat, g, xis[i], alpha, beta), mt - k, tau, window);
          });
          HolderEstimate h;
          h.alpha = alpha;
          h.holder_int = mt - k;
          h.holder_frac = tau;
          h.claimed_order = horder;
          std::vector<std::pair<double, double>> pairs;
          for (std::size_t i = 0; i < xis.size(); ++i) {
            pairs.emplace_back(bracket(xis[i]), norms[i]);
            h.constant = std::max(h.constant, norms[i] * std::pow(bracket(xis[i]), -horder));
          }
          h.fit = fit_decay_exponent(pairs);
          h.pass = std::isfinite(h.constant) && (h.fit.exponent == -kInf || h.fit.exponent <= horder + o.tolerance);
          rep.holder.push_back(h);
          rep.pass = rep.pass && h.pass;

          if (dot || (tilde && k >= 1)) {
            EnvelopeEstimate env;
            lattice_constant(s.a_flat, g, xis, alpha, beta, order + s.eps_tilde, o.tolerance, &env, o);
            rep.envelopes.push_back(env);
            rep.pass = rep.pass && env.pass;
          }
        }
  if (s.source.x_independent()) rep.notes.push_back("x-independent source: a_flat = 0");
  return rep;
}

double split_residual(const SmoothingSplit& s, int points_per_annulus) {
  const Grid& g = s.config.grid;
  const auto xis = fit_samples(s.config, points_per_annulus).xis;
  std::vector<double> num(xis.size(), 0.0), den(xis.size(), 0.0);
  parallel_for(xis.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Point x = g.point(k);
      const SymbolValue a = s.source.eval(x, xis[i]);
      num[i] = std::max(num[i], max_abs(a - s.a_sharp.eval(x, xis[i]) - s.a_flat.eval(x, xis[i])));
      den[i] = std::max(den[i], max_abs(a));
    }
  });
  const double d = *std::max_element(den.begin(), den.end());
  return d > 0.0 ? *std::max_element(num.begin(), num.end()) / d : 0.0;
}

InfinitySplit split_at_infinity(const Symbol& a, const SmoothingConfig& cfg) {
  if (!a.has_limit()) throw CapabilityError(a.name() + " has no limit at spatial infinity");
  SymbolClassSpec inf_spec = a.spec();
  inf_spec.variant = SymbolVariant::plain;
  const int N = a.matrix_dim();
  SymbolEval inf_eval = [a, N](const Point&, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) {
    if (!beta.is_zero()) return SymbolValue(SymbolValue::Zero(N, N));
    return a.limit(xi, alpha);
  };
  LimitEval inf_limit = [a](const Point& xi, const MultiIndex& alpha) { return a.limit(xi, alpha); };
  const int mxi = a.support().max_xi;
  Symbol a_inf(a.name() + "(inf)", a.dim(), inf_spec, inf_eval, DerivativeSupport{mxi, kUnbounded, mxi, kUnbounded},
               inf_limit, true);
  SymbolClassSpec b_spec = a.spec();
  b_spec.variant = SymbolVariant::dot;
  Symbol b = sum(a, scale(Complex(-1.0, 0.0), a_inf)).renamed(a.name() + "-inf").with_spec(b_spec);
  SmoothingSplit bs = split(b, cfg);
  return InfinitySplit{a_inf, b, bs};
}

double infinity_identity_residual(const SmoothingSplit& a_split, const InfinitySplit& inf, int points_per_annulus) {
  const Grid& g = a_split.config.grid;
  const auto xis = fit_samples(a_split.config, points_per_annulus).xis;
  std::vector<double> num(xis.size(), 0.0), den(xis.size(), 0.0);
  parallel_for(xis.size(), [&](std::size_t i) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const Point x = g.point(k);
      const SymbolValue s = a_split.a_sharp.eval(x, xis[i]);
      num[i] = std::max(num[i], max_abs(s - inf.a_inf.eval(x, xis[i]) - inf.b_split.a_sharp.eval(x, xis[i])));
      den[i] = std::max(den[i], max_abs(s));
    }
  });
  const double d = *std::max_element(den.begin(), den.end());
  return d > 0.0 ? *std::max_element(num.begin(), num.end()) / d : 0.0;
}

}  // namespace pdo
