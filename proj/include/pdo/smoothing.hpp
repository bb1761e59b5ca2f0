#pragma once

#include "pdo/dyadic.hpp"
#include "pdo/symbol.hpp"
#include "pdo/verify.hpp"

namespace pdo {

struct SmoothingConfig {
  Grid grid = Grid::line(2048, 2.0);
  double gamma = 0.5;
  DyadicPartition partition{CutoffPair(), 8, 0.5};  // J_max bounds the fitted annuli
  double eps_tilde = 0.0;                           // <= 0: 0.5 (gamma - delta) tau

  static SmoothingConfig make(const Grid& grid, double gamma, BumpProfile profile = BumpProfile::exp_bump, int j_max = -1,
                              double eps_tilde = 0.0);
};

struct SmoothingSplit {
  Symbol source;
  Symbol a_sharp;
  Symbol a_flat;
  SmoothingConfig config;
  double eps_tilde = 0.0;
};

// a# = sum_j psi_j(xi) J_{eps_j} a(., xi), tabulated on the x-lattice; a_flat = a - a#.
SmoothingSplit split(const Symbol& a, const SmoothingConfig& cfg);

struct SmoothingCheckOptions {
  int alpha_cap = 2;
  int points_per_annulus = 16;
  double tolerance = 0.1;
  double window_fraction = 1.0 / 8.0;
  double envelope_inner = 1.0 / 8.0;
  double envelope_outer = 1.0 / 2.5;
};

// Fitted xi-orders of d_xi^alpha d_x^k a# against m - rho|alpha| + delta min(k, m~) + gamma (k - min(k, m~)),
// for k <= m~ + max_extra_derivs.
SeminormReport verify_sharp(const SmoothingSplit& s, int max_extra_derivs, SmoothingCheckOptions options = {});
inline SeminormReport verify_sharp(const SmoothingSplit& s, int max_extra_derivs, double tolerance) {
  SmoothingCheckOptions o;
  o.tolerance = tolerance;
  return verify_sharp(s, max_extra_derivs, o);
}

// Fitted xi-orders of d_xi^alpha D^beta a_flat against m - (gamma - delta)(m~ + tau) + gamma|beta| - rho|alpha|,
// Holder norms against that order plus gamma (m~ - |beta| + tau), and x-envelopes at the eps~-shifted order
// for dot/tilde sources.
SeminormReport verify_flat(const SmoothingSplit& s, SmoothingCheckOptions options = {});

// Annuli j with 2 <= <xi> <= 2^{J_max - 2}, i.e. j = 1 .. J_max - 3.
std::pair<int, int> fitted_annuli(const SmoothingConfig& cfg);

// max |a - (a# + a_flat)| / max |a| over lattice x and the fitted annuli.
double split_residual(const SmoothingSplit& s, int points_per_annulus = 16);

struct InfinitySplit {
  Symbol a_inf;  // x-independent a(infinity, xi)
  Symbol b;      // a - a(infinity, .), vanishing at infinity
  SmoothingSplit b_split;
};

InfinitySplit split_at_infinity(const Symbol& a, const SmoothingConfig& cfg);
// max |a# - (a_inf + b#)| / max |a#| over lattice x and the fitted annuli.
double infinity_identity_residual(const SmoothingSplit& a_split, const InfinitySplit& inf, int points_per_annulus = 16);

}  // namespace pdo
