#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pdo/grid.hpp"
#include "pdo/symbol.hpp"

namespace pdo {

// ---- Holder norms ---------------------------------------------------------

// max_{|beta|<=k} sup |d^beta f| plus the largest tau-quotient of the order-k
// derivatives over lattice pairs with separation <= window (periodic).
double holder_norm_estimate(const GridFunction& samples, int holder_int, double tau, double window);
// Only the quotient part for order-k derivatives.
double holder_quotient(const GridFunction& samples, int holder_int, double tau, double window);
// max_{|beta|<=k} sup |d^beta f|.
double bounded_derivative_norm(const GridFunction& samples, int k);

// Default quotient window: 1/8 of the box edge.
inline double default_window(const Grid& g) { return g.box_length() / 8.0; }

// ---- Decay fits -------------------------------------------------------------

struct DecayFit {
  double exponent = 0.0;  // -infinity when every magnitude is zero
  double residual = 0.0;
  int annuli = 0;         // annuli with a nonzero supremum used in the fit
  std::vector<std::pair<double, double>> annulus_sup;  // (<xi> at the argmax, sup)
};

// Least-squares slope of log2(per-annulus sup) against log2 <xi>.
DecayFit fit_decay_exponent(const std::vector<std::pair<double, double>>& pairs);

// ---- Lemma-style ratio checks -------------------------------------------------

using Sampler = std::function<Complex(const Point&)>;

struct RatioSweep {
  std::vector<int> resolutions;
  std::vector<double> ratios;
  double spread = 0.0;  // max ratio / first ratio
  bool pass = false;
};

// Tolerated growth of a ratio across a refinement sweep.
inline constexpr double kBoundedRatioGrowth = 1.25;

// ||fg||_{C^{k,tau}} / sum_{k1+k2=k} (||f||_{C^{k1}} ||g||_{C^{k2,tau}} + ||f||_{C^{k1,tau}} ||g||_{C^{k2}}).
double holder_product_ratio(const GridFunction& f, const GridFunction& g, int k, double tau, double window);
RatioSweep holder_product_check(const Sampler& f, const Sampler& g, int k, double tau, const std::vector<Grid>& levels);

// ||f||_{C^k} / (||f||_{C^0}^{1-theta} ||f||_{C^{m,tau}}^theta), theta = k / (m + tau).
double interpolation_ratio(const GridFunction& f, int k, int m, double tau, double window);
RatioSweep interpolation_check(const Sampler& f, int k, int m, double tau, const std::vector<Grid>& levels);

// ---- Class verification ---------------------------------------------------------

struct SamplingPlan {
  Grid grid = Grid::line(512, 2.0);
  int min_annulus = 0;  // annulus j: 2^j <= <xi> < 2^{j+1}
  int max_annulus = 7;
  int fit_from_annulus = 3;  // order fits skip the preasymptotic low annuli
  int points_per_annulus = 16;
  int x_stride = 4;
  int alpha_cap = 3;
  int beta_cap = 3;
  int refinements = 2;  // Holder growth measured on P, 2P, ..., 2^refinements P
  double window_fraction = 1.0 / 8.0;
  double order_tolerance = 0.1;
  double growth_tolerance = 0.05;
  double growth_window_spacings = 3.0;  // pair separations used for the refinement growth
  double envelope_inner = 1.0 / 8.0;  // fractions of the box edge
  double envelope_outer = 1.0 / 2.5;

  double window() const { return window_fraction * grid.box_length(); }
};

std::vector<Point> annulus_samples(int dim, int annulus, int count);

struct ConstantEstimate {
  MultiIndex alpha, beta;
  double claimed_order = 0.0;
  double constant = 0.0;
  DecayFit fit;
  bool pass = false;
};

struct HolderEstimate {
  MultiIndex alpha;
  int holder_int = 0;
  double holder_frac = 0.0;
  double claimed_order = 0.0;
  double constant = 0.0;
  DecayFit fit;
  std::vector<double> refinement_quotients;  // normalized quotient per refinement level
  double growth = 0.0;                       // log2 growth per refinement
  bool pass = false;
};

struct EnvelopeEstimate {
  MultiIndex alpha, beta;
  double claimed_order = 0.0;
  std::vector<std::pair<double, double>> envelope;  // (r, sup_{|x|>=r} C(x))
  double inner = 0.0, outer = 0.0;
  bool pass = false;
};

struct SeminormReport {
  std::string symbol;
  SymbolClassSpec spec;
  std::vector<ConstantEstimate> constants;
  std::vector<HolderEstimate> holder;
  std::vector<EnvelopeEstimate> envelopes;
  std::vector<std::string> notes;
  bool pass = true;

  void merge(const SeminormReport& other);
};

// C(x) sampled at xs; inner/outer radii are fractions of the box edge. Passes when the
// outer sup is at most half the inner one (or C vanishes).
EnvelopeEstimate x_envelope(const std::vector<Point>& xs, const std::vector<double>& cx, double box, double inner,
                            double outer);

// Building blocks, reused by the smoothing checks.
// sup over the plan of |d_xi^alpha d_x^beta a| <xi>^{-order}, with the per-annulus fit
// and (optionally) the x-envelope of C(x).
ConstantEstimate estimate_constant(const Symbol& a, const SamplingPlan& plan, const MultiIndex& alpha,
                                   const MultiIndex& beta, double order, EnvelopeEstimate* envelope = nullptr);
HolderEstimate estimate_holder(const Symbol& a, const SamplingPlan& plan, const MultiIndex& alpha, const MultiIndex& beta,
                               int holder_int, double tau, double order, bool measure_growth);

SeminormReport verify_symbol_class(const Symbol& a, const SamplingPlan& plan);

}  // namespace pdo
