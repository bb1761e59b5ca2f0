#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdo/core.hpp"

namespace pdo {

// d_eta^alpha d_y^beta a(y, eta).
using AmplitudeEval =
    std::function<Complex(const Point& y, const Point& eta, const MultiIndex& alpha, const MultiIndex& beta)>;

// Amplitude with |d_eta^alpha d_y^beta a| <= C (1+|eta|)^m (1+|y|)^tau for |alpha| <= eta_degree,
// |beta| <= y_degree.
struct Amplitude {
  std::string name;
  int dim = 1;
  AmplitudeEval eval;
  double m = 0.0;
  double tau = 0.0;
  int eta_degree = kUnbounded;
  int y_degree = kUnbounded;

  Complex operator()(const Point& y, const Point& eta) const { return eval(y, eta, {}, {}); }
};

// e^{-|y|^2 - |eta|^2}.
Amplitude gaussian_amplitude(int dim = 1);
// e^{i x.eta} u(y) with u(y) = e^{-|y|^2/2}; its oscillatory integral is u(x).
Amplitude reproduction_amplitude(const Point& x);
// Same phase with a caller-supplied u and its derivatives.
Amplitude reproduction_amplitude(const Point& x, std::function<Complex(const Point&, const MultiIndex&)> u,
                                 const std::string& name);
Amplitude constant_amplitude(Complex c, int dim = 1);
// e^{i y.c}.
Amplitude plane_wave_amplitude(const Point& c);

Amplitude scale(Complex c, const Amplitude& a);
Amplitude sum(const Amplitude& a, const Amplitude& b);
// a(y, eta) e^{-(|y|^2 + |eta|^2) / (2 r^2)}.
Amplitude damped(const Amplitude& a, double r);

// Named amplitudes for the CLI: constant, gaussian, plane_wave, reproduction, zero.
const std::vector<std::string>& amplitude_names();
Amplitude amplitude_gallery(const std::string& name, int dim = 1);

// Largest |d_eta^alpha d_y^beta a| (1+|eta|)^{-m} (1+|y|)^{-tau} over a sample set, |alpha|,|beta| <= k.
double amplitude_growth_constant(const Amplitude& a, int k, double radius, int samples);

// ---- Regularizers -----------------------------------------------------------

enum class RegularizerKind { a_type, b_type };

// a_type: A^{l_prime}(D_eta, y) A^l(D_y, eta). b_type: B^l(y, Delta_eta) with weight <xi_ref>^{2 delta}.
struct Regularizer {
  RegularizerKind kind = RegularizerKind::a_type;
  int l = 0;
  int l_prime = 0;
  double delta_weight = 0.0;
  Point xi_ref;

  static Regularizer a_type(int l, int l_prime = 0);
  static Regularizer b_type(int l, double delta = 0.0, Point xi_ref = Point(0.0));
  std::string label() const;
};

// The amplitude the regularizer leaves under the integral after integration by parts.
Amplitude apply_regularizer(const Regularizer& reg, const Amplitude& a);

// ---- Oscillatory integrals -------------------------------------------------------

enum class ChiProfile { gaussian, bump };
const char* to_string(ChiProfile c);
ChiProfile parse_chi(const std::string& name);
double chi_value(ChiProfile c, const Point& y, const Point& eta);

// y runs over [-box, box)^n with `resolution` points per axis; eta over the dual lattice
// (spacing pi / box), so the chi -> 1 sum is a discrete Fourier pairing.
struct OscIntConfig {
  ChiProfile chi = ChiProfile::gaussian;
  std::vector<double> epsilon_schedule = {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  double box = 8.0 * kPi;
  int resolution = 256;
  bool box_sensitivity = true;  // rerun on a 3/4 box to report tail sensitivity

  void validate(int dim) const;
  double eta_box() const { return kPi * resolution / (2.0 * box); }
};

struct OscIntDiagnostics {
  std::vector<double> epsilons;
  std::vector<Complex> values;          // damped lattice sums per epsilon
  std::vector<Complex> extrapolations;  // Richardson table diagonal, one per usable epsilon
  double order = 0.0;                   // estimated convergence order in epsilon (NaN if converged)
  double box_sensitivity = 0.0;         // |value - value on the 3/4 box|
  bool divergent = false;
  long lattice_points = 0;
  double magnitude = 0.0;  // largest sum of |terms| over the schedule; sets the cancellation noise floor
};

struct OscIntResult {
  Complex value;
  OscIntDiagnostics diagnostics;
};

OscIntResult osc_integral(const Amplitude& a, const OscIntConfig& cfg,
                          const std::optional<Regularizer>& reg = std::nullopt);

// Richardson limit of values[i] at eps[i] (decreasing); fills order, extrapolations, divergent.
// Changes below noise_floor never count as divergence.
Complex richardson_limit(const std::vector<double>& eps, const std::vector<Complex>& values, OscIntDiagnostics& diag,
                         double noise_floor = 0.0);

struct InvarianceEntry {
  std::string label;
  Complex value;
  bool divergent = false;
};

struct InvarianceReport {
  std::vector<InvarianceEntry> entries;
  double spread = 0.0;  // max |v - v_0| / max |v|
  double tolerance = 1e-5;
  bool pass = false;
};

// Values with no regularizer, with each regularizer, and with each extra chi profile.
InvarianceReport invariance_check(const Amplitude& a, const OscIntConfig& cfg, const std::vector<Regularizer>& regs,
                                  const std::vector<ChiProfile>& extra_chis = {}, double tolerance = 1e-5);

struct ContinuityReport {
  Complex limit;
  std::vector<Complex> values;
  std::vector<double> distances;
  double pointwise_gap = 0.0;  // max |a_last - a| at spot-check points
  bool decreasing = false;
  bool pass = false;
};

ContinuityReport sequence_continuity_check(const std::vector<Amplitude>& sequence, const Amplitude& a,
                                           const OscIntConfig& cfg, double tolerance = 1e-4);

}  // namespace pdo
