#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pdo/errors.hpp"
#include "pdo/grid.hpp"

using namespace pdo;

namespace {

GridFunction mode(const Grid& g, double k) {
  return GridFunction::sample(g, [k](const Point& x) { return std::exp(Complex(0.0, k * x[0])); });
}

GridFunction gaussian(const Grid& g) {
  return GridFunction::sample(g, [](const Point& x) { return Complex(std::exp(-0.5 * x.norm_sq()), 0.0); });
}

}  // namespace

TEST_CASE("grid lattices") {
  Grid g(1, 2.0, 64);
  CHECK(g.coordinate(0) == doctest::Approx(-2.0 * kPi));
  CHECK(g.coordinate(32) == doctest::Approx(0.0));
  CHECK(g.frequency(0) == 0.0);
  CHECK(g.frequency(31) == doctest::Approx(15.5));
  CHECK(g.frequency(32) == doctest::Approx(-16.0));
  CHECK(g.frequency_bracket(4) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS_AS(Grid(1, 1.0, 100), ParameterError);
  CHECK_THROWS_AS(Grid(3, 1.0, 64), ParameterError);
  CHECK_THROWS_AS(Grid(1, -1.0, 64), ParameterError);
  Grid g2(2, 1.0, 8);
  CHECK(g2.size() == 64u);
  CHECK(g2.point(9)[0] == doctest::Approx(g2.coordinate(1)));
  CHECK(g2.point(9)[1] == doctest::Approx(g2.coordinate(1)));
}

TEST_CASE("forward transform of a pure mode has one coefficient") {
  for (double L : {1.0, 2.0}) {
    Grid g = Grid::line(128, L);
    auto c = forward_fourier(mode(g, 3.0 / L));
    for (int q = 0; q < g.points(); ++q) {
      if (g.signed_index(q) == 3)
        CHECK(std::abs(c.at(static_cast<std::size_t>(q)) - Complex(g.box_length(), 0.0)) < 1e-12 * g.box_length());
      else
        CHECK(std::abs(c.at(static_cast<std::size_t>(q))) < 1e-12);
    }
  }
}

TEST_CASE("forward transform of a constant is concentrated at zero") {
  Grid g(2, 1.0, 32);
  auto c = forward_fourier(GridFunction::sample(g, [](const Point&) { return Complex(1.0, 0.0); }));
  CHECK(std::abs(c.at(0) - Complex(std::pow(2.0 * kPi, 2), 0.0)) < 1e-10);
  double rest = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) rest = std::max(rest, std::abs(c.at(i)));
  CHECK(rest < 1e-12);
}

TEST_CASE("forward transform of a Gaussian matches the defining integral") {
  Grid g = Grid::line(256, 4.0);
  auto u = gaussian(g);
  auto c = forward_fourier(u);
  // Reference values of the integral of e^{-i x xi} e^{-x^2/2} over R.
  const std::pair<int, double> ref[] = {{0, 2.50662827463100050}, {4, 1.52034690106628081}, {10, 0.110133560121018528}};
  for (auto [m, value] : ref) {
    CHECK(std::abs(c.at(static_cast<std::size_t>(m)) - Complex(value, 0.0)) < 1e-12);
    CHECK(std::abs(oracle::direct_fourier_1d(g, u.values(), m / 4.0) - Complex(value, 0.0)) < 1e-12);
  }
}

TEST_CASE("forward transform rejects inconsistent shapes") {
  Grid g = Grid::line(16);
  CHECK_THROWS_AS(GridFunction(g, 1, std::vector<Complex>(15)), ShapeError);
  CHECK_THROWS_AS(GridFunction(g, 2, std::vector<Complex>(16)), ShapeError);
  CHECK_THROWS_AS(FourierCoefficients(g, 1, std::vector<Complex>(8)), ShapeError);
}

TEST_CASE("bessel multiplier on modes") {
  Grid g = Grid::line(64);
  auto u = mode(g, 3.0);
  auto v = bessel_multiplier(2.0, u);
  CHECK(oracle::max_diff(v.values(), GridFunction(g, 1, [&] {
          auto w = u.values();
          for (auto& z : w) z *= 10.0;
          return w;
        }()).values()) < 1e-12);
  CHECK(oracle::max_diff(bessel_multiplier(0.0, u).values(), u.values()) == 0.0);
}

TEST_CASE("bessel multiplier of order one on a Gaussian") {
  Grid g = Grid::line(256, 4.0);
  auto v = bessel_multiplier(1.0, gaussian(g));
  // Quadrature of the inverse transform of <xi> times the Gaussian transform.
  CHECK(std::abs(v.at(128) - 1.35453080648131530) < 1e-11);
  CHECK(std::abs(v.at(133) - 1.13971230758492915) < 1e-11);
  CHECK(std::abs(v.at(141) - 0.377461501617341473) < 1e-11);
}

TEST_CASE("sobolev norms") {
  for (double L : {1.0, 3.0}) {
    Grid g = Grid::line(64, L);
    CHECK(sobolev_norm(mode(g, 3.0 / L), 0.0) == doctest::Approx(std::sqrt(2.0 * kPi * L)).epsilon(1e-13));
    CHECK(sobolev_norm(GridFunction(g), 1.5) == 0.0);
  }
  Grid g = Grid::line(256, 4.0);
  CHECK(std::abs(sobolev_norm(gaussian(g), 1.0) - 1.63054615891678272) < 1e-12);
}

TEST_CASE("Parseval, round trip and group law on random fields") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    Grid g = trial % 2 == 0 ? Grid(1, 1.0 + 0.1 * trial, 128) : Grid(2, 1.5, 16);
    auto u = oracle::random_function(g, 1 + trial % 3, rng);
    auto c = forward_fourier(u);
    double lhs = l2_norm(u);
    CHECK(std::abs(lhs - coefficient_l2_norm(c)) <= 1e-10 * lhs);
    auto back = inverse_fourier(c);
    CHECK(oracle::max_diff(back.values(), u.values()) <= 1e-12 * oracle::max_abs(u.values()));
    auto st = bessel_multiplier(0.7, bessel_multiplier(-1.9, u));
    auto direct = bessel_multiplier(-1.2, u);
    CHECK(oracle::max_diff(st.values(), direct.values()) <= 1e-10 * oracle::max_abs(direct.values()));
    auto inv = bessel_multiplier(-1.3, bessel_multiplier(1.3, u));
    CHECK(oracle::max_diff(inv.values(), u.values()) <= 1e-12 * oracle::max_abs(u.values()));
    double prev = 0.0;
    for (double s : {-2.0, -0.5, 0.0, 0.3, 1.0, 2.5}) {
      double n = sobolev_norm(u, s);
      CHECK(n >= prev);
      prev = n;
    }
  }
}

TEST_CASE("spectral derivative of a mode") {
  Grid g = Grid::line(64, 2.0);
  auto u = mode(g, 1.5);
  auto du = spectral_derivative(u, MultiIndex(2));
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(du.at(i) + 2.25 * u.at(i)) < 1e-12);
}
