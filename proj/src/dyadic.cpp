#include "pdo/dyadic.hpp"

#include <algorithm>
#include <cmath>

#include "pdo/errors.hpp"
#include "pdo/verify.hpp"

namespace pdo {

double CutoffPair::psi0_derivative(const Point& xi, double scale, const MultiIndex& alpha) const {
  if (alpha.is_zero()) return step(profile_, xi.norm() / scale);
  return radial_step_series(profile_, xi, scale, alpha.order()).derivative(alpha);
}

CutoffPair build_cutoffs(BumpProfile profile) { return CutoffPair(profile); }

DyadicPartition::DyadicPartition(CutoffPair cutoffs, int j_max, double gamma)
    : cutoffs_(cutoffs), j_max_(j_max), gamma_(gamma) {
  if (j_max < 0 || j_max > 60) throw ParameterError("J_max must lie in [0, 60]");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ParameterError("gamma must lie in (0, 1]");
}

double DyadicPartition::epsilon(int j) const { return std::exp2(-j * gamma_); }

void DyadicPartition::check_index(int j) const {
  if (j < 0 || j > j_max_) throw ParameterError("psi_j: j = " + std::to_string(j) + " outside [0, J_max]");
}

double DyadicPartition::psi(int j, const Point& xi) const {
  check_index(j);
  const double r = xi.norm();
  if (j == 0) return cutoffs_.psi0(xi);
  return step(cutoffs_.profile(), std::ldexp(r, -j)) - step(cutoffs_.profile(), std::ldexp(r, -j + 1));
}

double DyadicPartition::psi_derivative(int j, const Point& xi, const MultiIndex& alpha) const {
  check_index(j);
  if (j == 0) return cutoffs_.psi0_derivative(xi, 1.0, alpha);
  return cutoffs_.psi0_derivative(xi, std::ldexp(1.0, j), alpha) - cutoffs_.psi0_derivative(xi, std::ldexp(1.0, j - 1), alpha);
}

std::pair<double, double> DyadicPartition::support(int j) const {
  check_index(j);
  if (j == 0) return {0.0, 2.0};
  return {std::ldexp(1.0, j - 1), std::ldexp(1.0, j + 1)};
}

std::vector<int> DyadicPartition::active(const Point& xi) const {
  const double r = xi.norm();
  std::vector<int> out;
  for (int j = 0; j <= j_max_; ++j) {
    const auto [lo, hi] = support(j);
    if (r >= hi) continue;
    if (j > 0 && r <= lo) break;
    if (psi(j, xi) != 0.0) out.push_back(j);
  }
  return out;
}

int default_j_max(const Grid& g) {
  const int j = static_cast<int>(std::floor(std::log2(g.nyquist()))) - 1;
  if (j < 1) throw ParameterError("grid too coarse for a dyadic partition");
  return j;
}

PsiEstimateReport psi_estimate_check(const DyadicPartition& partition, int dim, int max_order) {
  if (dim != 1 && dim != 2) throw ParameterError("psi_estimate_check: dim must be 1 or 2");
  const int J = partition.j_max();
  const std::size_t nj = static_cast<std::size_t>(J + 1);
  PsiEstimateReport rep;
  rep.j_max = J;
  rep.constants.assign(static_cast<std::size_t>(max_order + 1), std::vector<double>(nj, 0.0));
  std::vector<double> rmin(nj, kInf), rmax(nj, 0.0);
  std::vector<int> overlap(nj, 0);
  const int radial = 400;
  const int directions = dim == 1 ? 2 : 8;
  parallel_for(nj, [&](std::size_t js) {
    const int j = static_cast<int>(js);
    const auto [lo, hi] = partition.support(j);
    for (int d = 0; d < directions; ++d) {
      const double th = kPi * (d + 0.5) / directions;
      for (int i = 0; i <= radial; ++i) {
        const double r = lo + (hi - lo) * i / radial;
        const Point xi = dim == 1 ? Point(d == 0 ? r : -r) : Point(r * std::cos(th), r * std::sin(th));
        overlap[js] = std::max(overlap[js], static_cast<int>(partition.active(xi).size()));
        const double v0 = partition.psi(j, xi);
        // open support: the endpoints carry value 0 and are skipped for the ratio scan
        if (v0 != 0.0) {
          const double ratio = std::ldexp(bracket(xi), -j);
          rmin[js] = std::min(rmin[js], ratio);
          rmax[js] = std::max(rmax[js], ratio);
        }
        const double b = bracket(xi);
        for (int a = 0; a <= max_order; ++a)
          for (const auto& al : multi_indices_of_order(dim, a)) {
            const double v = std::abs(partition.psi_derivative(j, xi, al)) * std::pow(b, a);
            auto& c = rep.constants[static_cast<std::size_t>(a)][js];
            c = std::max(c, v);
          }
      }
    }
  });
  rep.ratio_min = *std::min_element(rmin.begin(), rmin.end());
  rep.ratio_max = *std::max_element(rmax.begin(), rmax.end());
  rep.max_overlap = *std::max_element(overlap.begin(), overlap.end());
  for (const auto& row : rep.constants) rep.uniform.push_back(*std::max_element(row.begin(), row.end()));
  return rep;
}

GridFunction apply_J(double eps, const GridFunction& f, const CutoffPair& cutoffs) {
  if (!(eps > 0.0)) throw ParameterError("J_eps needs eps > 0");
  return fourier_multiplier(f, [&](const Point& xi) { return Complex(cutoffs.phi(eps * xi), 0.0); });
}

GridFunction apply_one_minus_J(double eps, const GridFunction& f, const CutoffPair& cutoffs) {
  if (!(eps > 0.0)) throw ParameterError("J_eps needs eps > 0");
  return fourier_multiplier(f, [&](const Point& xi) { return Complex(1.0 - cutoffs.phi(eps * xi), 0.0); });
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double floor) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > floor)) continue;
    const double lx = std::log2(x[i]), ly = std::log2(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return kInf;
  const double den = n * sxx - sx * sx;
  if (den <= 0.0) return kInf;
  return (n * sxy - sx * sy) / den;
}

JEpsilonSweep j_epsilon_estimate_sweep(const GridFunction& f, double s, const MultiIndex& beta, const std::vector<double>& eps,
                                       const CutoffPair& cutoffs, double tolerance) {
  if (eps.size() < 4) throw ParameterError("j_epsilon_estimate_sweep needs at least 4 eps values");
  for (double e : eps)
    if (!(e > 0.0)) throw ParameterError("eps values must be positive");
  JEpsilonSweep out;
  out.s = s;
  out.beta = beta;
  out.eps = eps;
  const double b = beta.order();
  const double ex = s - b;  // remainder Holder exponent s - |beta| - t with t = ex / 2, nudged off the integers
  double t = 0.5 * ex;
  if (ex > 0.0 && std::abs((ex - t) - std::round(ex - t)) < 1e-9) t -= std::min(0.05, 0.25 * ex);
  const double hx = ex - t;
  const double window = default_window(f.grid());
  const std::size_t n = eps.size();
  out.j_norms.assign(n, 0.0);
  out.remainder_norms.assign(n, 0.0);
  out.remainder_holder.assign(n, 0.0);
  const GridFunction df = spectral_derivative(f, beta);
  parallel_for(n, [&](std::size_t i) {
    out.j_norms[i] = sup_norm(apply_J(eps[i], df, cutoffs));
    const GridFunction r = apply_one_minus_J(eps[i], df, cutoffs);
    out.remainder_norms[i] = sup_norm(r);
    if (ex > 0.0) {
      const int k = static_cast<int>(std::floor(hx));
      out.remainder_holder[i] = holder_norm_estimate(r, k, hx - k, window);
    }
  });
  // Roundoff level of the multiplier output.
  const double floor = 1e-13 * std::max(sup_norm(df), 1e-300);
  out.j_slope = loglog_slope(eps, out.j_norms, floor);
  out.remainder_slope = loglog_slope(eps, out.remainder_norms, floor);
  out.remainder_holder_slope = ex > 0.0 ? loglog_slope(eps, out.remainder_holder, floor) : kInf;
  // D^beta J_eps f bounded (|beta| <= s) or O(eps^{-(|beta|-s)})
  out.j_claim = b > s ? -(b - s) : 0.0;
  out.j_pass = out.j_slope >= out.j_claim - tolerance;
  if (b <= s) {
    out.remainder_claim = s - b;
    out.remainder_pass = out.remainder_slope >= out.remainder_claim - tolerance;
  } else {
    out.remainder_claim = -kInf;
    out.remainder_pass = true;
  }
  if (ex > 0.0) {
    out.holder_claim = t;
    out.holder_pass = out.remainder_holder_slope >= out.holder_claim - tolerance;
  } else {
    out.holder_claim = -kInf;
    out.holder_pass = true;
  }
  return out;
}

}  // namespace pdo
