#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pdo/errors.hpp"
#include "pdo/gallery.hpp"
#include "pdo/profiles.hpp"
#include "pdo/verify.hpp"

using namespace pdo;

namespace {

double rel(const SymbolValue& a, Complex b) { return std::abs(a(0, 0) - b) / std::max(1e-300, std::abs(b)); }
double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

SamplingPlan plan_for(int P, double L = 2.0, int dim = 1) {
  SamplingPlan p;
  p.grid = Grid(dim, L, P);
  return p;
}

}  // namespace

TEST_CASE("bessel derivatives against closed forms") {
  const double m = 1.7;
  Symbol a = bessel(m);
  for (double xi : {-7.0, -0.3, 0.0, 2.5, 40.0}) {
    const double b2 = 1.0 + xi * xi;
    CHECK(rel(a.eval(0.0, xi), std::pow(b2, m / 2)) < 1e-14);
    CHECK(rel(a.eval(0.0, xi, 1), m * xi * std::pow(b2, m / 2 - 1)) < 1e-12 + (xi == 0.0 ? kInf : 0.0));
    const double d2 = m * std::pow(b2, m / 2 - 1) + m * (m - 2) * xi * xi * std::pow(b2, m / 2 - 2);
    CHECK(rel(a.eval(0.0, xi, 2), d2) < 1e-12);
  }
  Symbol a2 = bessel(2.0, 2);
  // <xi>^2 = 1 + xi1^2 + xi2^2
  CHECK(std::abs(a2.eval(Point(0.0, 0.0), Point(1.0, 2.0), MultiIndex(1, 0))(0, 0) - 2.0) < 1e-13);
  CHECK(std::abs(a2.eval(Point(0.0, 0.0), Point(1.0, 2.0), MultiIndex(1, 1))(0, 0)) < 1e-13);
  CHECK(std::abs(a2.eval(Point(0.0, 0.0), Point(1.0, 2.0), MultiIndex(0, 2))(0, 0) - 2.0) < 1e-13);
}

TEST_CASE("gallery bessel of order zero is the constant one") {
  Symbol a = gallery("bessel", GalleryParams{});
  for (double xi : {0.0, 3.0, 1e3}) CHECK(a.scalar(0.4, xi) == Complex(1.0, 0.0));
  CHECK(a.x_independent());
  CHECK(a.has_limit());
}

TEST_CASE("gallery lookups") {
  CHECK_THROWS_AS(gallery("no_such_symbol"), LookupError);
  GalleryParams p;
  p.g = "cubic";
  CHECK_THROWS_AS(gallery("multiplier", p), LookupError);
  const auto& cat = gallery_catalog();
  CHECK(std::is_sorted(cat.begin(), cat.end(), [](auto& a, auto& b) { return a.name < b.name; }));
  for (const auto& e : cat) CHECK_NOTHROW(gallery(e.name));
}

TEST_CASE("matrix_diag of two brackets") {
  Symbol a = matrix_diag({bessel(1.0), bessel(1.0)});
  CHECK(a.matrix_dim() == 2);
  for (double xi : {0.0, 1.5, -9.0}) {
    SymbolValue v = a.eval(0.2, xi);
    CHECK(std::abs(v.determinant() - Complex(1.0 + xi * xi, 0.0)) < 1e-12 * (1.0 + xi * xi));
    CHECK(v(0, 1) == Complex(0.0, 0.0));
    CHECK(std::abs(v.determinant()) / (1.0 + xi * xi) == doctest::Approx(1.0));
  }
}

TEST_CASE("rough_elliptic values, limit and capabilities") {
  Symbol a = rough_elliptic(1.0, 0.3, 0.5);
  CHECK(a.spec().variant == SymbolVariant::tilde);
  // Outside the window the x-factor is exactly 2.
  CHECK(rel(a.eval(3.0, 2.0), 2.0 * std::sqrt(5.0)) < 1e-15);
  CHECK(rel(a.limit(2.0), 2.0 * std::sqrt(5.0)) < 1e-15);
  // 2 - c sup|W| stays >= 1.5.
  Grid g = Grid::line(2048);
  double lo = kInf;
  for (std::size_t i = 0; i < g.size(); ++i) lo = std::min(lo, std::abs(a.eval(g.point(i), 0.0)(0, 0)));
  CHECK(lo >= 1.5 - 1e-12);
  CHECK_THROWS_AS(a.eval(0.0, 1.0, 0, 1), CapabilityError);
  Symbol a1 = rough_elliptic(0.0, 0.3, 0.5, 1);
  CHECK_NOTHROW(a1.eval(0.0, 1.0, 0, 1));
  CHECK_THROWS_AS(a1.eval(0.0, 1.0, 0, 2), CapabilityError);
}

TEST_CASE("finite differences agree with exact derivative oracles") {
  std::vector<Symbol> smooth = {bessel(1.3), bessel(-0.7, 2), multiplier("gauss"), transport(), multiplication("gauss"),
                                multiplication("sin_windowed"), vanishing_bump(), vanishing_bump(2),
                                rough_elliptic(1.0, 0.4, 0.5, 1)};
  for (const auto& a : smooth) {
    Symbol fd = a.with_finite_differences();
    CHECK(fd.derivative_mode() == DerivativeMode::finite_difference);
    const int n = a.dim();
    for (double s : {0.3, 1.7, 6.0}) {
      Point x = n == 1 ? Point(0.37 * s - 0.5) : Point(0.37 * s - 0.5, 0.2);
      Point xi = n == 1 ? Point(s) : Point(s, -0.6 * s);
      for (int ao = 0; ao <= 3; ++ao)
        for (const auto& al : multi_indices_of_order(n, ao))
          // x-differences of a C^{k,tau} function only converge like h^tau
          for (int bo = 0; bo <= (a.support().max_x == kUnbounded ? 2 : 0); ++bo)
            for (const auto& be : multi_indices_of_order(n, bo)) {
              if (ao + bo > 3) continue;
              const SymbolValue e = a.eval(x, xi, al, be);
              const SymbolValue f = fd.eval(x, xi, al, be);
              const double scale = std::max(max_abs(e), 1e-3 * max_abs(a.eval(x, xi)));
              INFO(a.name(), " alpha=", ao, " beta=", bo, " xi=", s);
              CHECK(max_abs(e - f) <= 1e-6 * std::max(scale, 1e-9));
            }
    }
  }
}

TEST_CASE("combinators follow the product rule") {
  Symbol a = transport();
  Symbol b = multiplication("gauss");
  Symbol p = product(a, b);
  Symbol fd = p.with_finite_differences();
  for (double xi : {0.5, 3.0}) {
    for (int ao = 0; ao <= 2; ++ao)
      for (int bo = 0; bo <= 2; ++bo) {
        const SymbolValue e = p.eval(0.3, xi, ao, bo);
        CHECK(max_abs(e - fd.eval(0.3, xi, ao, bo)) < 1e-7 * std::max(1.0, max_abs(e)));
      }
    CHECK(rel(sum(a, b).scalar(0.3, xi), a.scalar(0.3, xi) + b.scalar(0.3, xi)) < 1e-15);
    CHECK(rel(scale(Complex(0, 2), b).scalar(0.3, xi), Complex(0, 2) * b.scalar(0.3, xi)) < 1e-15);
    CHECK(rel(xi_weight(2.0, b).scalar(0.3, xi), (1 + xi * xi) * b.scalar(0.3, xi)) < 1e-14);
  }
  CHECK(p.spec().order == 1.0);
  CHECK(xi_weight(-1.0, a).spec().order == 0.0);
}

TEST_CASE("holder norm of a constant") {
  Grid g = Grid::line(256);
  auto f = GridFunction::sample(g, [](const Point&) { return Complex(-3.0, 4.0); });
  CHECK(holder_norm_estimate(f, 0, 0.5, default_window(g)) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(holder_norm_estimate(f, 2, 0.3, default_window(g)) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(holder_norm_estimate(f, 0, 0.5, 0.5 * g.spacing()), ParameterError);
}

TEST_CASE("holder norm of sin matches brute force and is stable") {
  double prev = 0.0;
  for (int P : {256, 512, 1024}) {
    Grid g = Grid::line(P);
    auto f = GridFunction::sample(g, [](const Point& x) { return Complex(std::sin(x[0]), 0.0); });
    const double est = holder_norm_estimate(f, 0, 0.5, default_window(g));
    std::vector<double> raw(static_cast<std::size_t>(P));
    for (int k = 0; k < P; ++k) raw[static_cast<std::size_t>(k)] = std::sin(g.coordinate(k));
    const double brute = 1.0 + oracle::brute_holder_quotient(raw, g.spacing(), 0.5, default_window(g));
    CHECK(est == doctest::Approx(brute).epsilon(1e-12));
    CHECK(est >= 1.0);
    if (prev > 0.0) CHECK(std::abs(est / prev - 1.0) < 0.05);
    prev = est;
  }
}

TEST_CASE("Weierstrass quotient: bounded at its exponent, growing above it") {
  const double tau = 0.3;
  std::vector<double> at_tau, above;
  for (int P : {1024, 2048, 4096}) {
    Grid g = Grid::line(P);
    std::vector<double> raw(static_cast<std::size_t>(P));
    for (int k = 0; k < P; ++k) raw[static_cast<std::size_t>(k)] = oracle::weierstrass(g.coordinate(k), tau, 12);
    auto f = GridFunction::sample(g, [&](const Point& x) { return Complex(weierstrass(x[0], tau, 12), 0.0); });
    const double w = default_window(g);
    const double q = holder_quotient(f, 0, tau, w);
    CHECK(q == doctest::Approx(oracle::brute_holder_quotient(raw, g.spacing(), tau, w)).epsilon(1e-10));
    at_tau.push_back(q);
    above.push_back(holder_quotient(f, 0, tau + 0.3, w));
  }
  CHECK(at_tau.back() / at_tau.front() < 1.1);
  CHECK(above.back() / above.front() > 1.25);
}

TEST_CASE("decay exponent fits") {
  std::vector<std::pair<double, double>> inv2, lin, flat, zero;
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 16; ++i) {
      const double b = std::exp2(j + (i + 0.5) / 16);
      inv2.emplace_back(b, 1.0 / (b * b));
      lin.emplace_back(b, b);
      flat.emplace_back(b, 3.0);
      zero.emplace_back(b, 0.0);
    }
  CHECK(std::abs(fit_decay_exponent(inv2).exponent + 2.0) < 0.05);
  CHECK(std::abs(fit_decay_exponent(lin).exponent - 1.0) < 0.05);
  CHECK(std::abs(fit_decay_exponent(flat).exponent) < 1e-12);
  auto z = fit_decay_exponent(zero);
  CHECK(z.exponent == -kInf);
  CHECK(z.residual == 0.0);
  std::vector<std::pair<double, double>> few(inv2.begin(), inv2.begin() + 48);
  CHECK_THROWS_AS(fit_decay_exponent(few), ParameterError);
}

TEST_CASE("product lemma ratios stay bounded") {
  std::vector<Grid> levels = {Grid::line(256), Grid::line(512), Grid::line(1024)};
  auto one = [](const Point&) { return Complex(1.0, 0.0); };
  auto sinx = [](const Point& x) { return Complex(std::sin(x[0]), 0.0); };
  auto cosx = [](const Point& x) { return Complex(std::cos(x[0]), 0.0); };
  auto w = [](const Point& x) { return Complex(weierstrass(x[0], 0.3, 12), 0.0); };
  auto r1 = holder_product_check(one, sinx, 0, 0.5, levels);
  for (double r : r1.ratios) CHECK(r <= 1.0 + 1e-12);
  CHECK(r1.pass);
  auto r2 = holder_product_check(sinx, sinx, 0, 0.5, levels);
  CHECK(r2.pass);
  auto r3 = holder_product_check(w, cosx, 0, 0.3, levels);
  CHECK(r3.pass);
  auto r4 = holder_product_check(sinx, cosx, 1, 0.5, levels);
  CHECK(r4.pass);
}

TEST_CASE("interpolation lemma ratios stay bounded") {
  std::vector<Grid> levels = {Grid::line(256), Grid::line(512), Grid::line(1024)};
  auto c = interpolation_check([](const Point&) { return Complex(2.5, 0.0); }, 1, 2, 0.5, levels);
  for (double r : c.ratios) CHECK(r == doctest::Approx(1.0).epsilon(1e-12));
  auto s = interpolation_check([](const Point& x) { return Complex(std::sin(8 * x[0]), 0.0); }, 1, 2, 0.5, levels);
  CHECK(s.pass);
  auto gb = interpolation_check([](const Point& x) { return Complex(std::exp(-x.norm_sq()), 0.0); }, 2, 3, 0.4, levels);
  CHECK(gb.pass);
  CHECK_THROWS_AS(interpolation_check([](const Point&) { return Complex(1.0, 0.0); }, 3, 2, 0.5, levels), ParameterError);
}

TEST_CASE("verify: bessel passes with the right fitted order") {
  for (double m : {-1.0, 0.5, 2.0}) {
    Symbol a = bessel(m);
    auto rep = verify_symbol_class(a, plan_for(128));
    CHECK(rep.pass);
    CHECK(std::abs(rep.constants.front().fit.exponent - m) < 0.1);
  }
}

TEST_CASE("verify: windowed Weierstrass symbol passes at its exponent and fails above") {
  const double tau = 0.3;
  SamplingPlan plan = plan_for(1024, 1.0);
  Symbol a = rough_elliptic(1.0, tau, 0.5);
  auto ok = verify_symbol_class(a, plan);
  CHECK(ok.pass);
  for (const auto& h : ok.holder) CHECK(h.growth <= 0.05);
  SymbolClassSpec bad = a.spec();
  bad.holder_frac = 0.5;
  auto fail = verify_symbol_class(a.with_spec(bad), plan);
  CHECK_FALSE(fail.pass);
  CHECK(fail.holder.front().growth > 0.1);
}

TEST_CASE("verify: the zero symbol passes every class with zero constants") {
  Symbol z = scale(0.0, transport());
  for (auto variant : {SymbolVariant::plain, SymbolVariant::dot, SymbolVariant::tilde}) {
    SymbolClassSpec s = z.spec();
    s.variant = variant;
    s.order = -3.0;
    auto rep = verify_symbol_class(z.with_spec(s), plan_for(64));
    CHECK(rep.pass);
    for (const auto& c : rep.constants) CHECK(c.constant == 0.0);
    for (const auto& h : rep.holder) CHECK(h.constant == 0.0);
  }
}

TEST_CASE("verify: gallery rough_elliptic passes its claimed class") {
  auto rep = verify_symbol_class(gallery("rough_elliptic", GalleryParams{}), plan_for(1024, 1.0));
  CHECK(rep.pass);
  GalleryParams p;
  p.holder_int = 1;
  p.m = 1.0;
  auto rep1 = verify_symbol_class(gallery("rough_elliptic", p), plan_for(1024, 1.0));
  CHECK(rep1.pass);
  CHECK(rep1.envelopes.size() > 0);
  for (const auto& e : rep1.envelopes) CHECK(e.outer == 0.0);
}

TEST_CASE("verify: smooth symbols pass any non-smooth class they embed in") {
  std::vector<Symbol> smooth = {bessel(1.0), transport(), multiplication("gauss"), multiplier("gauss"),
                                vanishing_bump()};
  for (const auto& a : smooth)
    for (int k : {0, 1, 2})
      for (double s : {0.2, 0.9}) {
        SymbolClassSpec spec = a.spec();
        spec.holder_int = k;
        spec.holder_frac = s;
        auto rep = verify_symbol_class(a.with_spec(spec), plan_for(256));
        INFO(a.name(), " k=", k, " s=", s);
        CHECK(rep.pass);
      }
}

TEST_CASE("verify: 2D symbols") {
  auto rep = verify_symbol_class(bessel(1.0, 2), plan_for(32, 1.0, 2));
  CHECK(rep.pass);
  SamplingPlan p = plan_for(128, 1.0, 2);
  p.refinements = 1;
  p.alpha_cap = 1;
  p.points_per_annulus = 4;
  p.window_fraction = 1.0 / 32.0;
  CHECK(verify_symbol_class(rough_elliptic(0.0, 0.3, 0.5, 0, 2), p).pass);
}

TEST_CASE("verify: claims beyond the available regularity are capability errors") {
  Symbol a = rough_elliptic(0.0, 0.3, 0.5);
  SymbolClassSpec s = a.spec();
  s.holder_int = 1;
  CHECK_THROWS_AS(verify_symbol_class(a.with_spec(s), plan_for(64)), CapabilityError);
}

TEST_CASE("verify: dot variant needs decay in x") {
  SamplingPlan p = plan_for(256);
  Symbol t = transport();
  CHECK(verify_symbol_class(t, p).pass);
  SymbolClassSpec s = bessel(1.0).spec();
  s.variant = SymbolVariant::dot;
  CHECK_FALSE(verify_symbol_class(bessel(1.0).with_spec(s), p).pass);
}

TEST_CASE("x-derivative norms of a C^{1,tau} symbol are bounded across refinements") {
  // sup_xi ||d_xi^alpha a(., xi)||_{C^k_b} <xi>^{-(m - |alpha|)} for k <= 1
  Symbol a = rough_elliptic(1.0, 0.4, 0.5, 1);
  for (int alpha = 0; alpha <= 2; ++alpha)
    for (int k = 0; k <= 1; ++k) {
      std::vector<double> vals;
      for (int P : {256, 512, 1024}) {
        Grid g = Grid::line(P);
        double best = 0.0;
        for (int j = 0; j < 7; ++j)
          for (const auto& xi : annulus_samples(1, j, 4)) {
            auto f = GridFunction::sample(g, [&](const Point& x) { return a.eval(x, xi, alpha)(0, 0); });
            best = std::max(best, bounded_derivative_norm(f, k) * std::pow(bracket(xi), -(1.0 - alpha)));
          }
        vals.push_back(best);
      }
      CHECK(vals.back() / vals.front() < 1.25);
      CHECK(vals.front() / vals.back() < 1.25);
    }
}
