#pragma once

#include <vector>

#include "pdo/grid.hpp"
#include "pdo/profiles.hpp"

namespace pdo {

// phi and psi0 share one radial profile: 1 on |xi| <= 1, 0 on |xi| >= 2.
class CutoffPair {
 public:
  explicit CutoffPair(BumpProfile profile = BumpProfile::exp_bump) : profile_(profile) {}

  BumpProfile profile() const { return profile_; }
  double phi(const Point& xi) const { return step(profile_, xi.norm()); }
  double psi0(const Point& xi) const { return step(profile_, xi.norm()); }
  // d^k/dr^k of the radial profile, k = 0..order (order <= 4 is enough for every caller).
  std::vector<double> radial_derivatives(double r, int order) const { return step_derivatives(profile_, r, order); }
  // d_xi^alpha psi0(xi / scale)
  double psi0_derivative(const Point& xi, double scale, const MultiIndex& alpha) const;

 private:
  BumpProfile profile_;
};

CutoffPair build_cutoffs(BumpProfile profile = BumpProfile::exp_bump);

// psi_0 = psi0, psi_j(xi) = psi0(2^{-j} xi) - psi0(2^{-j+1} xi) for j >= 1; these telescope to psi0(2^{-J} xi).
class DyadicPartition {
 public:
  DyadicPartition(CutoffPair cutoffs, int j_max, double gamma);

  const CutoffPair& cutoffs() const { return cutoffs_; }
  int j_max() const { return j_max_; }
  double gamma() const { return gamma_; }
  double epsilon(int j) const;  // 2^{-j gamma}

  double psi(int j, const Point& xi) const;
  double psi_derivative(int j, const Point& xi, const MultiIndex& alpha) const;
  // Indices j <= J_max with psi_j(xi) != 0.
  std::vector<int> active(const Point& xi) const;
  // Radial support of psi_j: [inner, outer].
  std::pair<double, double> support(int j) const;

 private:
  void check_index(int j) const;

  CutoffPair cutoffs_;
  int j_max_;
  double gamma_;
};

// floor(log2(nyquist)) - 1: the top annulus ends at the Nyquist frequency.
int default_j_max(const Grid& g);

struct PsiEstimateReport {
  int j_max = 0;
  // constants[a][j] = sup over supp psi_j of max_{|alpha| = a} |d^alpha psi_j| <xi>^a
  std::vector<std::vector<double>> constants;
  std::vector<double> uniform;  // max over j, per order
  double ratio_min = 0.0;       // min / max of 2^{-j} <xi> over supp psi_j
  double ratio_max = 0.0;
  int max_overlap = 0;
};

PsiEstimateReport psi_estimate_check(const DyadicPartition& partition, int dim = 1, int max_order = 3);

// phi(eps D_x) f
GridFunction apply_J(double eps, const GridFunction& f, const CutoffPair& cutoffs = CutoffPair());
// (1 - phi(eps D_x)) f
GridFunction apply_one_minus_J(double eps, const GridFunction& f, const CutoffPair& cutoffs = CutoffPair());

struct JEpsilonSweep {
  double s = 0.0;
  MultiIndex beta;
  std::vector<double> eps;
  std::vector<double> j_norms;          // ||D^beta J_eps f||_inf
  std::vector<double> remainder_norms;  // ||D^beta (1 - J_eps) f||_inf
  std::vector<double> remainder_holder; // ||D^beta (1 - J_eps) f||_{C^{s - |beta| - t}}, t = (s - |beta|) / 2
  double j_slope = 0.0;
  double remainder_slope = 0.0;
  double remainder_holder_slope = 0.0;
  double j_claim = 0.0;          // lower bound the J-slope must respect
  double remainder_claim = 0.0;  // lower bound for the remainder slope (|beta| <= s only)
  double holder_claim = 0.0;
  bool j_pass = false;
  bool remainder_pass = false;   // vacuous when |beta| > s
  bool holder_pass = false;      // vacuous unless s - |beta| > 0
  bool pass() const { return j_pass && remainder_pass && holder_pass; }
};

// Log-log slopes in eps; slopes of sequences that vanish (up to roundoff) are +inf.
JEpsilonSweep j_epsilon_estimate_sweep(const GridFunction& f, double s, const MultiIndex& beta, const std::vector<double>& eps,
                                       const CutoffPair& cutoffs = CutoffPair(), double tolerance = 0.15);

// Least-squares slope of log2 y against log2 x over the entries with y > floor.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y, double floor = 0.0);

}  // namespace pdo
