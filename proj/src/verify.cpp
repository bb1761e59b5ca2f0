#include "pdo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pdo/errors.hpp"

namespace pdo {

namespace {

int window_points(const Grid& g, double window) {
  if (window < g.spacing() * (1.0 - 1e-12))
    throw ParameterError("Holder window " + std::to_string(window) + " is smaller than the lattice spacing " +
                         std::to_string(g.spacing()));
  return std::max(1, static_cast<int>(std::floor(window / g.spacing() + 1e-9)));
}

// Largest |f(x+d) - f(x)| / |d|^tau over periodic pairs with |d| <= W lattice steps.
double max_quotient(const std::vector<Complex>& f, const Grid& g, double tau, int W) {
  const int P = g.points();
  const double h = g.spacing();
  double best = 0.0;
  if (g.dim() == 1) {
    std::vector<double> inv(static_cast<std::size_t>(W + 1));
    for (int d = 1; d <= W; ++d) inv[static_cast<std::size_t>(d)] = std::pow(d * h, -tau);
    for (int i = 0; i < P; ++i) {
      const Complex fi = f[static_cast<std::size_t>(i)];
      for (int d = 1; d <= W; ++d) {
        const int j = i + d < P ? i + d : i + d - P;
        best = std::max(best, std::abs(f[static_cast<std::size_t>(j)] - fi) * inv[static_cast<std::size_t>(d)]);
      }
    }
    return best;
  }
  struct Offset {
    int d0, d1;
    double inv;
  };
  std::vector<Offset> offsets;
  for (int d0 = 0; d0 <= W; ++d0)
    for (int d1 = -W; d1 <= W; ++d1) {
      if (d0 == 0 && d1 <= 0) continue;
      const double r2 = static_cast<double>(d0 * d0 + d1 * d1);
      if (r2 > static_cast<double>(W) * W + 1e-9) continue;
      offsets.push_back({d0, d1, std::pow(std::sqrt(r2) * h, -tau)});
    }
  for (int i0 = 0; i0 < P; ++i0)
    for (int i1 = 0; i1 < P; ++i1) {
      const Complex fi = f[static_cast<std::size_t>(i0) * P + i1];
      for (const auto& o : offsets) {
        const int j0 = (i0 + o.d0) % P;
        const int j1 = ((i1 + o.d1) % P + P) % P;
        best = std::max(best, std::abs(f[static_cast<std::size_t>(j0) * P + j1] - fi) * o.inv);
      }
    }
  return best;
}

std::vector<MultiIndex> indices_up_to(int dim, int k) {
  std::vector<MultiIndex> out;
  for (int o = 0; o <= k; ++o)
    for (const auto& m : multi_indices_of_order(dim, o)) out.push_back(m);
  return out;
}

}  // namespace

double bounded_derivative_norm(const GridFunction& samples, int k) {
  double best = 0.0;
  for (const auto& beta : indices_up_to(samples.grid().dim(), k))
    best = std::max(best, sup_norm(beta.is_zero() ? samples : spectral_derivative(samples, beta)));
  return best;
}

double holder_quotient(const GridFunction& samples, int holder_int, double tau, double window) {
  const Grid& g = samples.grid();
  const int W = window_points(g, window);
  double best = 0.0;
  for (const auto& beta : multi_indices_of_order(g.dim(), holder_int)) {
    GridFunction d = beta.is_zero() ? samples : spectral_derivative(samples, beta);
    for (int c = 0; c < samples.components(); ++c) best = std::max(best, max_quotient(d.component(c), g, tau, W));
  }
  return best;
}

double holder_norm_estimate(const GridFunction& samples, int holder_int, double tau, double window) {
  if (holder_int < 0) throw ParameterError("holder_int must be nonnegative");
  if (!(tau > 0.0 && tau <= 1.0)) throw ParameterError("Holder exponent must lie in (0,1]");
  window_points(samples.grid(), window);
  return bounded_derivative_norm(samples, holder_int) + holder_quotient(samples, holder_int, tau, window);
}

DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& pairs) {
  std::map<int, std::pair<double, double>> annuli;  // annulus -> (<xi> at argmax, sup)
  for (const auto& [b, mag] : pairs) {
    if (!(b >= 1.0) || !std::isfinite(mag) || mag < 0.0) throw ParameterError("fit_decay_exponent: invalid sample");
    const int j = static_cast<int>(std::floor(std::log2(b) + 1e-12));
    auto it = annuli.find(j);
    if (it == annuli.end()) annuli[j] = {b, mag};
    else if (mag > it->second.second) it->second = {b, mag};
  }
  if (annuli.size() < 4) throw ParameterError("fit_decay_exponent needs samples from at least 4 dyadic annuli");
  DecayFit fit;
  std::vector<double> xs, ys;
  for (const auto& [j, v] : annuli) {
    fit.annulus_sup.push_back(v);
    if (v.second > 0.0) {
      xs.push_back(std::log2(v.first));
      ys.push_back(std::log2(v.second));
    }
  }
  fit.annuli = static_cast<int>(xs.size());
  if (xs.size() < 2) {
    fit.exponent = -kInf;
    fit.residual = 0.0;
    return fit;
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  fit.exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + fit.exponent * (xs[i] - mx));
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  return fit;
}

namespace {

double c_norm(const GridFunction& f, int k) { return bounded_derivative_norm(f, k); }
double ct_norm(const GridFunction& f, int k, double tau, double window) {
  return holder_norm_estimate(f, k, tau, window);
}

RatioSweep sweep(const std::vector<Grid>& levels, const std::function<double(const Grid&)>& ratio) {
  if (levels.empty()) throw ParameterError("ratio sweep needs at least one level");
  RatioSweep s;
  for (const auto& g : levels) {
    s.resolutions.push_back(g.points());
    s.ratios.push_back(ratio(g));
  }
  const double first = s.ratios.front();
  double mx = 0.0;
  bool finite = true;
  for (double r : s.ratios) {
    mx = std::max(mx, r);
    finite = finite && std::isfinite(r);
  }
  s.spread = first > 0.0 ? mx / first : (mx > 0.0 ? kInf : 1.0);
  s.pass = finite && s.spread <= kBoundedRatioGrowth;
  return s;
}

}  // namespace

double holder_product_ratio(const GridFunction& f, const GridFunction& g, int k, double tau, double window) {
  if (f.grid() != g.grid()) throw ShapeError("product check needs samples on the same grid");
  GridFunction fg = f;
  for (std::size_t i = 0; i < fg.values().size(); ++i) fg.values()[i] *= g.values()[i];
  const double lhs = ct_norm(fg, k, tau, window);
  double rhs = 0.0;
  for (int k1 = 0; k1 <= k; ++k1) {
    const int k2 = k - k1;
    rhs += c_norm(f, k1) * ct_norm(g, k2, tau, window) + ct_norm(f, k1, tau, window) * c_norm(g, k2);
  }
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : kInf;
  return lhs / rhs;
}

RatioSweep holder_product_check(const Sampler& f, const Sampler& g, int k, double tau, const std::vector<Grid>& levels) {
  return sweep(levels, [&](const Grid& grid) {
    return holder_product_ratio(GridFunction::sample(grid, f), GridFunction::sample(grid, g), k, tau, default_window(grid));
  });
}

double interpolation_ratio(const GridFunction& f, int k, int m, double tau, double window) {
  if (k > m) throw ParameterError("interpolation check needs k <= m");
  if (k < 0) throw ParameterError("interpolation check needs k >= 0");
  const double theta = k / (m + tau);
  const double lhs = c_norm(f, k);
  const double rhs = std::pow(c_norm(f, 0), 1.0 - theta) * std::pow(ct_norm(f, m, tau, window), theta);
  if (rhs == 0.0) return lhs == 0.0 ? 0.0 : kInf;
  return lhs / rhs;
}

RatioSweep interpolation_check(const Sampler& f, int k, int m, double tau, const std::vector<Grid>& levels) {
  if (k > m) throw ParameterError("interpolation check needs k <= m");
  return sweep(levels, [&](const Grid& grid) {
    return interpolation_ratio(GridFunction::sample(grid, f), k, m, tau, default_window(grid));
  });
}

std::vector<Point> annulus_samples(int dim, int annulus, int count) {
  std::vector<Point> out;
  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < count; ++i) {
    const double b = std::exp2(annulus + (i + 0.5) / count);
    const double r = std::sqrt(b * b - 1.0);
    if (dim == 1) {
      out.emplace_back(i % 2 == 0 ? r : -r);
    } else {
      const double phi = 2.0 * kPi * std::fmod((i + 0.5) * golden, 1.0);
      out.emplace_back(r * std::cos(phi), r * std::sin(phi));
    }
  }
  return out;
}

void SeminormReport::merge(const SeminormReport& other) {
  constants.insert(constants.end(), other.constants.begin(), other.constants.end());
  holder.insert(holder.end(), other.holder.begin(), other.holder.end());
  envelopes.insert(envelopes.end(), other.envelopes.begin(), other.envelopes.end());
  notes.insert(notes.end(), other.notes.begin(), other.notes.end());
  pass = pass && other.pass;
}

EnvelopeEstimate x_envelope(const std::vector<Point>& xs, const std::vector<double>& cx, double box, double inner,
                            double outer) {
  if (xs.size() != cx.size() || xs.empty()) throw ShapeError("x_envelope: sample count mismatch");
  EnvelopeEstimate env;
  auto env_at = [&](double r) {
    double m = 0.0;
    for (std::size_t t = 0; t < xs.size(); ++t)
      if (xs[t].norm() >= r) m = std::max(m, cx[t]);
    return m;
  };
  const int steps = 32;
  for (int i = 0; i <= steps; ++i) {
    const double r = 0.5 * box * std::sqrt(static_cast<double>(xs.front().dim)) * i / steps;
    env.envelope.emplace_back(r, env_at(r));
  }
  env.inner = env_at(inner * box);
  env.outer = env_at(outer * box);
  env.pass = env.outer <= 0.5 * env.inner || env.inner == 0.0;
  return env;
}

namespace {

std::vector<Point> plan_frequencies(const SamplingPlan& plan) {
  std::vector<Point> out;
  for (int j = plan.min_annulus; j <= plan.max_annulus; ++j)
    for (const auto& p : annulus_samples(plan.grid.dim(), j, plan.points_per_annulus)) out.push_back(p);
  return out;
}

std::vector<std::size_t> plan_x_indices(const SamplingPlan& plan) {
  const Grid& g = plan.grid;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto k = g.axis_indices(i);
    if (k[0] % plan.x_stride == 0 && k[1] % plan.x_stride == 0) out.push_back(i);
  }
  return out;
}

DecayFit plan_fit(const std::vector<std::pair<double, double>>& pairs, const SamplingPlan& plan) {
  const int from = std::max(plan.min_annulus, std::min(plan.fit_from_annulus, plan.max_annulus - 3));
  const double lo = std::exp2(from);
  std::vector<std::pair<double, double>> tail;
  for (const auto& p : pairs)
    if (p.first >= lo) tail.push_back(p);
  return fit_decay_exponent(tail);
}

bool order_ok(const DecayFit& fit, double order, double tol) {
  return fit.exponent == -kInf || fit.exponent <= order + tol;
}

GridFunction sample_column(const Symbol& a, const Grid& g, const Point& xi, const MultiIndex& alpha, const MultiIndex& beta) {
  const int N = a.matrix_dim();
  GridFunction f(g, N * N);
  for (std::size_t i = 0; i < g.size(); ++i) {
    SymbolValue v = a.eval(g.point(i), xi, alpha, beta);
    for (int r = 0; r < N; ++r)
      for (int c = 0; c < N; ++c) f.at(i, r * N + c) = v(r, c);
  }
  return f;
}

}  // namespace

ConstantEstimate estimate_constant(const Symbol& a, const SamplingPlan& plan, const MultiIndex& alpha,
                                   const MultiIndex& beta, double order, EnvelopeEstimate* envelope) {
  const auto xis = plan_frequencies(plan);
  const auto xs = plan_x_indices(plan);
  // rows: xi samples, columns: x samples
  std::vector<double> table(xis.size() * xs.size());
  parallel_for(xis.size(), [&](std::size_t s) {
    for (std::size_t t = 0; t < xs.size(); ++t)
      table[s * xs.size() + t] = max_abs(a.eval(plan.grid.point(xs[t]), xis[s], alpha, beta));
  });
  ConstantEstimate est;
  est.alpha = alpha;
  est.beta = beta;
  est.claimed_order = order;
  std::vector<std::pair<double, double>> pairs;
  std::vector<double> cx(xs.size(), 0.0);
  for (std::size_t s = 0; s < xis.size(); ++s) {
    const double b = bracket(xis[s]);
    const double w = std::pow(b, -order);
    double m = 0.0;
    for (std::size_t t = 0; t < xs.size(); ++t) {
      const double v = table[s * xs.size() + t];
      m = std::max(m, v);
      cx[t] = std::max(cx[t], v * w);
    }
    pairs.emplace_back(b, m);
    est.constant = std::max(est.constant, m * w);
  }
  est.fit = plan_fit(pairs, plan);
  est.pass = std::isfinite(est.constant) && order_ok(est.fit, order, plan.order_tolerance);
  if (envelope) {
    std::vector<Point> pts;
    for (auto i : xs) pts.push_back(plan.grid.point(i));
    *envelope = x_envelope(pts, cx, plan.grid.box_length(), plan.envelope_inner, plan.envelope_outer);
    envelope->alpha = alpha;
    envelope->beta = beta;
    envelope->claimed_order = order;
  }
  return est;
}

HolderEstimate estimate_holder(const Symbol& a, const SamplingPlan& plan, const MultiIndex& alpha, const MultiIndex& beta,
                               int holder_int, double tau, double order, bool measure_growth) {
  const auto xis = plan_frequencies(plan);
  const double window = plan.window();
  std::vector<double> norms(xis.size());
  parallel_for(xis.size(), [&](std::size_t s) {
    norms[s] = holder_norm_estimate(sample_column(a, plan.grid, xis[s], alpha, beta), holder_int, tau, window);
  });
  HolderEstimate est;
  est.alpha = alpha;
  est.holder_int = holder_int;
  est.holder_frac = tau;
  est.claimed_order = order;
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t s = 0; s < xis.size(); ++s) {
    const double b = bracket(xis[s]);
    pairs.emplace_back(b, norms[s]);
    est.constant = std::max(est.constant, norms[s] * std::pow(b, -order));
  }
  est.fit = plan_fit(pairs, plan);
  bool growth_ok = true;
  if (measure_growth && plan.refinements > 0) {
    // One representative frequency per annulus keeps the fine levels affordable. The quotient is taken over
    // pairs a few spacings apart: a fixed physical window keeps discovering finer oscillations of truncated
    // lacunary series long after the local quotient has settled.
    std::vector<Point> reps;
    for (std::size_t s = 0; s < xis.size(); s += static_cast<std::size_t>(plan.points_per_annulus)) reps.push_back(xis[s]);
    for (int r = 0; r <= plan.refinements; ++r) {
      Grid g(plan.grid.dim(), plan.grid.half_length(), plan.grid.points() << r);
      const double local = plan.growth_window_spacings * g.spacing();
      std::vector<double> q(reps.size());
      parallel_for(reps.size(), [&](std::size_t s) {
        q[s] = holder_quotient(sample_column(a, g, reps[s], alpha, beta), holder_int, tau, local) *
               std::pow(bracket(reps[s]), -order);
      });
      est.refinement_quotients.push_back(*std::max_element(q.begin(), q.end()));
    }
    const double q0 = est.refinement_quotients.front();
    const double qn = est.refinement_quotients.back();
    est.growth = q0 > 0.0 && qn > 0.0 ? std::log2(qn / q0) / plan.refinements : 0.0;
    growth_ok = est.growth <= plan.growth_tolerance;
  }
  est.pass = std::isfinite(est.constant) && order_ok(est.fit, order, plan.order_tolerance) && growth_ok;
  return est;
}

SeminormReport verify_symbol_class(const Symbol& a, const SamplingPlan& plan) {
  const auto& spec = a.spec();
  if (plan.grid.dim() != a.dim()) throw ShapeError("sampling plan dimension differs from the symbol dimension");
  const int alpha_max = std::min(spec.xi_regularity, plan.alpha_cap);
  const int beta_max = std::min(spec.holder_int, plan.beta_cap);
  if (alpha_max > a.support().max_xi)
    throw CapabilityError(a.name() + ": claimed xi-regularity exceeds the derivatives the symbol provides");
  if (spec.holder_int > a.support().max_x)
    throw CapabilityError(a.name() + ": claimed x-regularity C^" + std::to_string(spec.holder_int) +
                          " exceeds the derivatives the symbol provides");
  SeminormReport rep;
  rep.symbol = a.name();
  rep.spec = spec;
  const int n = a.dim();
  for (int ao = 0; ao <= alpha_max; ++ao)
    for (const auto& alpha : multi_indices_of_order(n, ao)) {
      for (int bo = 0; bo <= beta_max; ++bo)
        for (const auto& beta : multi_indices_of_order(n, bo)) {
          const double order = spec.order - spec.rho * ao + spec.delta * bo;
          const bool env = spec.variant == SymbolVariant::dot || (spec.variant == SymbolVariant::tilde && bo >= 1);
          EnvelopeEstimate e;
          rep.constants.push_back(estimate_constant(a, plan, alpha, beta, order, env ? &e : nullptr));
          rep.pass = rep.pass && rep.constants.back().pass;
          if (env) {
            rep.envelopes.push_back(e);
            rep.pass = rep.pass && e.pass;
          }
        }
      const double horder = spec.order - spec.rho * ao + spec.delta * spec.holder_total();
      rep.holder.push_back(estimate_holder(a, plan, alpha, MultiIndex{}, spec.holder_int, spec.holder_frac, horder,
                                           !a.x_independent()));
      rep.pass = rep.pass && rep.holder.back().pass;
    }
  if (spec.holder_int > plan.beta_cap)
    rep.notes.push_back("pointwise x-derivative checks capped at order " + std::to_string(plan.beta_cap));
  if (spec.xi_regularity > plan.alpha_cap)
    rep.notes.push_back("xi-derivative checks capped at order " + std::to_string(plan.alpha_cap));
  return rep;
}

}  // namespace pdo
