#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdo/calculus.hpp"
#include "pdo/symbol.hpp"

namespace pdo {

// ---- Ellipticity ---------------------------------------------------------------------

// Lattice for the ellipticity scan: the grid's x points times annulus frequencies
// (2^0 .. 2^max_annulus) plus the origin and a few small radii.
struct EllipticityPlan {
  Grid x_grid = Grid::line(64, 2.0);
  int max_annulus = 10;
  int points_per_annulus = 8;
  std::vector<double> radii = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
  double violation_fraction = 1e-6;  // points below this fraction of the best C0 are violating
  bool check_limit = true;
};

struct EllipticPoint {
  Point x, xi;
  double value = 0.0;  // |det a| <xi>^{-m}
};

struct EllipticityReport {
  std::string symbol;
  double order = 0.0;
  double C0 = 0.0;
  double R = 0.0;
  std::vector<EllipticPoint> violating_points;
  std::vector<std::pair<double, double>> det_min_profile;  // (radius, min |det a| <xi>^{-m} over |x| + |xi| >= radius)
  bool limit_checked = false;
  std::vector<std::pair<double, double>> limit_envelope;  // (r, sup_{|x| >= r} sup_xi |a - a(inf)| <xi>^{-m})
  bool limit_decreasing = false;
  bool pass = false;
  std::vector<std::string> warnings;
};

// C0 is the profile value at the smallest radius reaching half the best value on the lattice.
EllipticityReport ellipticity_check(const Symbol& a, const EllipticityPlan& plan = {});

// ---- Parametrix ------------------------------------------------------------------------

// quintic: the C^2 smoothstep. smooth: C-infinity, built from e^{-1/t}.
enum class PsiProfile { quintic, smooth };
PsiProfile parse_psi_profile(const std::string& name);
const char* to_string(PsiProfile p);

struct ParametrixConfig {
  double R = 1.0;
  PsiProfile psi_profile = PsiProfile::quintic;
};

// psi(t) = 0 for t <= 1, 1 for t >= 2; k-th derivative.
double psi(double t, int k = 0, PsiProfile profile = PsiProfile::quintic);

// b = psi(R^{-2}(|x|^2 + |xi|^2)) a^{-1}; derivatives by the Leibniz rule on psi and the inverse.
Symbol build_parametrix(const Symbol& a, const ParametrixConfig& cfg);

// a(x, xi)^* pointwise.
Symbol adjoint_symbol(const Symbol& a);

// ---- Compactness proxy ------------------------------------------------------------------

enum class CompactnessVerdict { compact_like, not_compact_like, inconclusive };
const char* to_string(CompactnessVerdict v);

struct LevelMatrix {
  int points = 0;
  Eigen::MatrixXcd matrix;  // L^2 matrix, already Sobolev-conjugated
};

struct SingularLevel {
  int points = 0;
  std::vector<double> singular_values;  // descending
};

struct CompactnessOptions {
  double stability_tolerance = 0.2;
  double tail_exponent_min = 0.5;
  double plateau_fraction = 0.1;   // sigma at an eighth of the size relative to sigma_1
  double significance = 1e-10;     // relative to sigma_1 at the finest level
  double zero_tolerance = 1e-8;    // every sigma below this on every level: numerically zero
};

struct CompactnessReport {
  std::vector<SingularLevel> levels;
  double tail_exponent = 0.0;
  std::vector<double> stability;  // per k: max relative deviation from the finest level
  double max_stability = 0.0;
  int compared = 0;
  bool plateau = false;
  CompactnessVerdict verdict = CompactnessVerdict::inconclusive;
  std::vector<std::string> notes;
};

CompactnessReport compactness_proxy(const std::vector<LevelMatrix>& levels, const CompactnessOptions& options = {});

// ---- Experiments ------------------------------------------------------------------------

struct FredholmExperimentConfig {
  double s = 0.1;
  double p = 2.0;
  std::optional<double> theta;       // default: half the admissible upper end
  std::optional<double> eps_tilde;   // default: half the admissible upper end
  std::vector<int> levels = {256, 512, 1024};
  double svd_threshold = 1e-6;       // relative to sigma_max at the finest level
  double half_length = 1.0;
  double band_fraction = 0.5;        // residuals are compared on |xi| <= band_fraction * Nyquist
  std::optional<double> R;           // parametrix radius; default from the ellipticity check
  PsiProfile psi_profile = PsiProfile::quintic;
  EllipticityPlan ellipticity;
  int winding_samples = 4096;
  CompactnessOptions compactness;
};

struct TheoremParameters {
  double theta = 0.0;
  double eps_tilde = 0.0;
  double theta_max = 0.0;
  double eps_max = 0.0;
  SobolevWindow window;
  bool in_window = false;
  std::vector<std::string> warnings;
};

// Resolves theta and eps_tilde against the symbol's class and checks the s-window.
TheoremParameters theorem_parameters(const SymbolClassSpec& spec, int dim, const FredholmExperimentConfig& cfg);

// K = op(a1) op(a2) - op(a1 #_{ceil theta} a2) between H^{s + m1 + m2} and H^s.
CompactnessReport composition_residual(const Symbol& a1, const Symbol& a2, const FredholmExperimentConfig& cfg);

struct KernelCount {
  int count = 0;
  double threshold = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

// Singular values below rel_threshold * sigma_max.
KernelCount kernel_count(const std::vector<double>& singular_values, double rel_threshold);
std::vector<double> singular_values(const Eigen::MatrixXcd& m);

struct KernelLevel {
  int points = 0;
  KernelCount kernel, cokernel;
  std::vector<double> singular_values;  // conjugated op(a), descending
};

struct FredholmReport {
  std::string symbol;
  double order = 0.0;
  double s = 0.0;
  TheoremParameters parameters;
  EllipticityReport ellipticity;
  double R = 0.0;
  CompactnessReport residual_right;  // op(a~) op(b) - I
  CompactnessReport residual_left;   // op(b) op(a~) - I
  std::vector<KernelLevel> kernel_levels;
  int kernel_dim = 0;
  int cokernel_dim = 0;
  bool threshold_robust = false;
  std::pair<int, int> kernel_at_threshold_range{0, 0};  // counts at threshold / 10 and * 10
  int index = 0;
  std::string index_method;
  std::optional<int> winding;
  std::string caveat;
  bool fredholm_like = false;
  std::vector<std::string> warnings;  // hypothesis violations
  std::vector<std::string> notes;
};

FredholmReport fredholm_experiment(const Symbol& a, const FredholmExperimentConfig& cfg = {});

// Winding number of a <xi>^{-m} along the positively oriented boundary of [-R,R]^2 in (x, xi).
// c0 defaults to the ellipticity constant of a.
int winding_index(const Symbol& a, double R, int samples, std::optional<double> c0 = std::nullopt);

}  // namespace pdo
