#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pdo/errors.hpp"
#include "pdo/oscint.hpp"

using namespace pdo;

namespace {

double bracket2(double t) { return 1.0 + t * t; }

OscIntConfig quick() {
  OscIntConfig c;
  c.box_sensitivity = false;
  return c;
}

OscIntConfig planar() {
  OscIntConfig c;
  c.box = 2.0 * kPi;
  c.resolution = 32;
  c.box_sensitivity = false;
  return c;
}

}  // namespace

TEST_CASE("regularizer of order zero leaves the amplitude alone") {
  Amplitude a = gaussian_amplitude();
  for (const Regularizer& r : {Regularizer::a_type(0, 0), Regularizer::b_type(0, 0.3, Point(2.0))}) {
    Amplitude b = apply_regularizer(r, a);
    for (double y : {-1.0, 0.3})
      for (double eta : {0.0, 2.5}) CHECK(b(y, eta) == a(y, eta));
    CHECK(b.m == a.m);
    CHECK(b.tau == a.tau);
  }
}

TEST_CASE("A^2 in y on a plane wave") {
  const double c = 1.7;
  Amplitude b = apply_regularizer(Regularizer::a_type(2, 0), plane_wave_amplitude(Point(c)));
  for (double y : {-2.0, 0.0, 1.1})
    for (double eta : {0.0, -3.0, 8.0}) {
      const Complex want = (1.0 + c * c) / bracket2(eta) * std::exp(Complex(0.0, c * y));
      CHECK(std::abs(b(y, eta) - want) <= 1e-14);
    }
  CHECK(b.m == -2.0);
  CHECK(b.y_degree == kUnbounded);
}

TEST_CASE("B^2 with delta 0 on the gaussian amplitude") {
  Amplitude a = gaussian_amplitude();
  Amplitude b = apply_regularizer(Regularizer::b_type(2), a);
  const double h = 1e-3;
  for (double y : {-1.3, 0.0, 0.4})
    for (double eta : {-0.8, 0.0, 1.2}) {
      const double hand = (3.0 - 4.0 * eta * eta) / bracket2(y) * std::exp(-y * y - eta * eta);
      CHECK(std::abs(b(y, eta) - hand) <= 1e-14);
      const Complex d2 = (a(y, eta + h) - 2.0 * a(y, eta) + a(y, eta - h)) / (h * h);
      const Complex fd = (a(y, eta) - d2) / bracket2(y);
      CHECK(std::abs(b(y, eta) - fd) <= 1e-6);
    }
  CHECK(b.tau == -2.0);
}

TEST_CASE("regularized amplitudes carry derivatives") {
  // d_eta of A^1(D_y, eta) a against a centered difference.
  Amplitude b = apply_regularizer(Regularizer::a_type(1, 2), gaussian_amplitude());
  const double h = 1e-5;
  for (double y : {-0.7, 0.5})
    for (double eta : {-1.1, 0.9}) {
      const Complex fd_eta = (b(y, eta + h) - b(y, eta - h)) / (2.0 * h);
      const Complex fd_y = (b(y + h, eta) - b(y - h, eta)) / (2.0 * h);
      CHECK(std::abs(b.eval(y, eta, 1, 0) - fd_eta) <= 1e-8);
      CHECK(std::abs(b.eval(y, eta, 0, 1) - fd_y) <= 1e-8);
    }
}

TEST_CASE("missing derivative degrees are a capability error") {
  Amplitude a = gaussian_amplitude();
  a.y_degree = 1;
  CHECK_THROWS_AS(apply_regularizer(Regularizer::a_type(2, 0), a), CapabilityError);
  CHECK_NOTHROW(apply_regularizer(Regularizer::a_type(1, 3), a));
  a.eta_degree = 2;
  CHECK_THROWS_AS(apply_regularizer(Regularizer::a_type(0, 3), a), CapabilityError);
  CHECK_THROWS_AS(apply_regularizer(Regularizer::b_type(3), a), CapabilityError);
  Amplitude b = apply_regularizer(Regularizer::a_type(1, 2), a);
  CHECK(b.y_degree == 0);
  CHECK(b.eta_degree == 0);
}

TEST_CASE("gaussian amplitude against direct quadrature") {
  const Amplitude a = gaussian_amplitude();
  const Complex direct = oracle::direct_phase_integral_1d(
      [](double y, double eta) { return Complex(std::exp(-y * y - eta * eta), 0.0); }, 9.0, 721);
  CHECK(std::abs(direct - 1.0 / std::sqrt(5.0)) <= 1e-12);
  OscIntResult r = osc_integral(a, OscIntConfig{});
  CHECK(std::abs(r.value - direct) <= 1e-8);
  CHECK(r.diagnostics.values.size() == 6);
  CHECK(r.diagnostics.order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(r.diagnostics.box_sensitivity <= 1e-10);
  CHECK_FALSE(r.diagnostics.divergent);
  CHECK(r.diagnostics.lattice_points == 256L * 256L);

  OscIntResult r2 = osc_integral(gaussian_amplitude(2), planar());
  CHECK(std::abs(r2.value - 0.2) <= 1e-8);
}

TEST_CASE("oscillatory integral reproduces u(x)") {
  const OscIntConfig cfg = quick();
  double worst = 0.0;
  for (double x : {-3.0, -2.2, -1.0, -0.35, 0.0, 0.5, 1.75, 2.9}) {
    const Complex v = osc_integral(reproduction_amplitude(Point(x)), cfg).value;
    worst = std::max(worst, std::abs(v - std::exp(-0.5 * x * x)));
  }
  CHECK(worst <= 1e-5);
  CHECK(std::abs(osc_integral(reproduction_amplitude(Point(0.0)), cfg).value - 1.0) <= 1e-6);

  const Point x2(0.4, -1.1);
  const Complex v2 = osc_integral(reproduction_amplitude(x2), planar()).value;
  CHECK(std::abs(v2 - std::exp(-0.5 * x2.norm_sq())) <= 1e-5);
}

TEST_CASE("constant amplitude and u = 1 give 1") {
  OscIntConfig cfg = quick();
  CHECK(std::abs(osc_integral(constant_amplitude(1.0), cfg).value - 1.0) <= 1e-8);
  // u = 1 at lattice points x of the y-grid; chi(eps x) must reach 1 within the schedule.
  const double h = 2.0 * cfg.box / cfg.resolution;
  for (int k : {cfg.resolution / 2 - 8, cfg.resolution / 2, cfg.resolution / 2 + 5}) {
    const double x = -cfg.box + k * h;
    Amplitude a = reproduction_amplitude(
        Point(x), [](const Point&, const MultiIndex& be) { return Complex(be.is_zero() ? 1.0 : 0.0, 0.0); }, "one");
    CHECK(std::abs(osc_integral(a, cfg).value - 1.0) <= 1e-8);
  }
}

TEST_CASE("regularizers do not change the value") {
  const OscIntConfig cfg = quick();
  auto g = invariance_check(gaussian_amplitude(), cfg, {Regularizer::a_type(2, 0)});
  CHECK(g.spread <= 1e-6);
  CHECK(g.pass);

  const std::vector<Regularizer> all = {
      Regularizer::a_type(1, 0),          Regularizer::a_type(2, 0),
      Regularizer::a_type(3, 0),          Regularizer::a_type(0, 1),
      Regularizer::a_type(0, 2),          Regularizer::a_type(2, 2),
      Regularizer::a_type(3, 3),          Regularizer::b_type(1),
      Regularizer::b_type(2),             Regularizer::b_type(3, 0.3, Point(2.0))};
  for (const Amplitude& a : {gaussian_amplitude(), reproduction_amplitude(Point(0.6))}) {
    auto rep = invariance_check(a, cfg, all);
    CHECK(rep.entries.size() == all.size() + 1);
    CHECK(rep.spread <= 1e-5);
    CHECK(rep.pass);
  }
  // A steep B weight (1 + <xi>|y|^2)^{-1} has poles at |Im y| ~ 0.5; the eta range must resolve
  // them, so this one runs on a 4 pi box (eta half-width 32).
  OscIntConfig wide = cfg;
  wide.box = 4.0 * kPi;
  auto steep = invariance_check(reproduction_amplitude(Point(0.6)), wide, {Regularizer::b_type(2, 0.5, Point(-4.0))});
  CHECK(steep.spread <= 1e-5);

  auto chi = invariance_check(reproduction_amplitude(Point(-0.9)), cfg, {}, {ChiProfile::bump});
  CHECK(chi.entries.size() == 2);
  CHECK(chi.spread <= 1e-6);

  auto z = invariance_check(amplitude_gallery("zero"), cfg, {Regularizer::a_type(2, 2)}, {ChiProfile::bump});
  for (const auto& e : z.entries) CHECK(e.value == Complex(0.0, 0.0));
  CHECK(z.pass);
}

TEST_CASE("B^l with delta 0 and even l equals A^l in eta") {
  const OscIntConfig cfg = quick();
  for (int l : {2, 4})
    for (const Amplitude& a : {gaussian_amplitude(), reproduction_amplitude(Point(1.3))}) {
      const Complex vb = osc_integral(a, cfg, Regularizer::b_type(l)).value;
      const Complex va = osc_integral(a, cfg, Regularizer::a_type(0, l)).value;
      CHECK(std::abs(vb - va) <= 1e-6 * std::abs(va));
      Amplitude ab = apply_regularizer(Regularizer::b_type(l), a), aa = apply_regularizer(Regularizer::a_type(0, l), a);
      CHECK(std::abs(ab(0.3, -0.2) - aa(0.3, -0.2)) <= 1e-14);
    }
}

TEST_CASE("oscillatory integral is linear") {
  const OscIntConfig cfg = quick();
  const Amplitude a = gaussian_amplitude(), b = reproduction_amplitude(Point(0.8));
  const Complex al(2.0, 0.0), be(0.0, 3.0);
  const Complex lhs = osc_integral(sum(scale(al, a), scale(be, b)), cfg).value;
  const Complex rhs = al * osc_integral(a, cfg).value + be * osc_integral(b, cfg).value;
  CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
}

TEST_CASE("continuity along amplitude sequences") {
  const OscIntConfig cfg = quick();
  const Amplitude a = reproduction_amplitude(Point(0.5));

  std::vector<Amplitude> lin;
  for (int j = 1; j <= 6; ++j) lin.push_back(scale(1.0 - 1.0 / (10.0 * j), a));
  auto rl = sequence_continuity_check(lin, a, cfg);
  CHECK(rl.decreasing);
  for (std::size_t j = 0; j < rl.distances.size(); ++j)
    CHECK(rl.distances[j] * 10.0 * (j + 1) == doctest::Approx(std::abs(rl.limit)).epsilon(1e-9));

  std::vector<Amplitude> damp;
  for (double r : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) damp.push_back(damped(a, r));
  auto rd = sequence_continuity_check(damp, a, cfg);
  CHECK(rd.decreasing);
  CHECK(rd.pass);
  CHECK(rd.pointwise_gap <= 1e-3);

  auto rc = sequence_continuity_check({a, a, a}, a, cfg);
  for (double d : rc.distances) CHECK(d == 0.0);
  CHECK(rc.pass);
}

TEST_CASE("configuration errors and divergence flag") {
  OscIntConfig bad = quick();
  bad.epsilon_schedule = {0.5, 0.5, 0.25};
  CHECK_THROWS_AS(osc_integral(gaussian_amplitude(), bad), ParameterError);
  bad.epsilon_schedule = {0.25, 0.5};
  CHECK_THROWS_AS(osc_integral(gaussian_amplitude(), bad), ParameterError);
  OscIntConfig big = quick();
  CHECK_THROWS_AS(osc_integral(gaussian_amplitude(2), big), ParameterError);

  Amplitude steep = gaussian_amplitude();
  steep.m = 9.0;
  CHECK_THROWS_AS(osc_integral(steep, quick()), ParameterError);
  // A regularizer that pays for the growth makes it feasible again.
  CHECK_NOTHROW(osc_integral(steep, quick(), Regularizer::a_type(8, 0)));

  std::vector<double> eps = {0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  std::vector<Complex> grow;
  for (double e : eps) grow.emplace_back(1.0 / e, 0.0);
  OscIntDiagnostics d;
  richardson_limit(eps, grow, d);
  CHECK(d.divergent);

  std::vector<Complex> smooth;
  for (double e : eps) smooth.emplace_back(1.0 + 0.3 * e + 0.1 * e * e, 0.0);
  OscIntDiagnostics d2;
  const Complex lim = richardson_limit(eps, smooth, d2);
  CHECK_FALSE(d2.divergent);
  CHECK(std::abs(lim - 1.0) <= 1e-12);
  CHECK(d2.order == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("results are reproducible bit for bit") {
  const OscIntConfig cfg = quick();
  const Amplitude a = apply_regularizer(Regularizer::a_type(3, 1), reproduction_amplitude(Point(0.25)));
  const Complex v1 = osc_integral(a, cfg).value, v2 = osc_integral(a, cfg).value;
  CHECK(v1 == v2);
}

TEST_CASE("amplitude growth constants") {
  CHECK(amplitude_growth_constant(constant_amplitude(2.0), 2, 5.0, 7) == doctest::Approx(2.0));
  CHECK(amplitude_growth_constant(gaussian_amplitude(), 0, 3.0, 9) == doctest::Approx(1.0));
  Amplitude w = plane_wave_amplitude(Point(2.0));
  CHECK(amplitude_growth_constant(w, 2, 4.0, 9) == doctest::Approx(4.0));
  CHECK(amplitude_names().front() == "constant");
  CHECK_THROWS_AS(amplitude_gallery("nope"), LookupError);
}
