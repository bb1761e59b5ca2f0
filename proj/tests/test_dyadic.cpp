#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "pdo/dyadic.hpp"
#include "pdo/errors.hpp"
#include "pdo/profiles.hpp"

using namespace pdo;

TEST_CASE("cutoff profiles") {
  for (auto prof : {BumpProfile::exp_bump, BumpProfile::poly_bump}) {
    CutoffPair c = build_cutoffs(prof);
    CHECK(c.phi(Point(0.5)) == 1.0);
    CHECK(c.phi(Point(0.0)) == 1.0);
    CHECK(c.psi0(Point(3.0)) == 0.0);
    CHECK(c.psi0(Point(-3.0, 0.1)) == 0.0);
    const double mid = c.psi0(Point(1.5));
    CHECK(mid > 0.0);
    CHECK(mid < 1.0);
    double prev = 1.0;
    for (int i = 0; i <= 1000; ++i) {
      const double v = c.phi(Point(1.0 + i / 1000.0));
      CHECK(v <= prev);
      CHECK(v >= 0.0);
      prev = v;
    }
    for (double r : {1.1, 1.5, 1.9})
      for (double d : c.radial_derivatives(r, 4)) CHECK(std::isfinite(d));
  }
  CutoffPair e = build_cutoffs(BumpProfile::exp_bump);
  for (double t : {1.01, 1.25, 1.5, 1.75, 1.99}) CHECK(e.phi(Point(t)) == doctest::Approx(oracle::exp_step(t)).epsilon(1e-14));
  CHECK(e.phi(Point(1.5)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("psi_j values and index checks") {
  DyadicPartition part(build_cutoffs(), 8, 0.5);
  CHECK(part.psi(0, Point(0.5)) == 1.0);
  CHECK(part.psi(3, Point(1.0)) == 0.0);
  CHECK(part.psi(3, Point(20.0)) == 0.0);
  CHECK(part.psi(3, Point(8.0)) == doctest::Approx(1.0));
  CHECK(part.psi(3, Point(6.0)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(part.psi(9, Point(1.0)), ParameterError);
  CHECK_THROWS_AS(part.psi(-1, Point(1.0)), ParameterError);
  CHECK(part.epsilon(4) == doctest::Approx(0.25));
  CHECK_THROWS_AS(DyadicPartition(build_cutoffs(), 4, 0.0), ParameterError);
}

TEST_CASE("partition of unity, supports and overlap on the lattice") {
  for (int dim : {1, 2}) {
    Grid g(dim, 1.0, dim == 1 ? 1024 : 128);
    const int J = default_j_max(g);
    CHECK(J == (dim == 1 ? 8 : 5));
    for (auto prof : {BumpProfile::exp_bump, BumpProfile::poly_bump}) {
      DyadicPartition part(build_cutoffs(prof), J, 0.5);
      const double top = std::ldexp(1.0, J - 1);
      double worst = 0.0;
      int overlap = 0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const Point xi = g.frequency_point(i);
        double sum = 0.0;
        int active = 0;
        for (int j = 0; j <= J; ++j) {
          const double v = part.psi(j, xi);
          CHECK(v >= -1e-15);
          CHECK(v <= 1.0 + 1e-15);
          if (v != 0.0) {
            ++active;
            const auto [lo, hi] = part.support(j);
            CHECK(xi.norm() <= hi);
            if (j > 0) CHECK(xi.norm() >= lo);
          }
          sum += v;
        }
        overlap = std::max(overlap, active);
        CHECK(static_cast<int>(part.active(xi).size()) == active);
        if (bracket(xi) <= top) worst = std::max(worst, std::abs(sum - 1.0));
        // telescoping: the partial sum equals psi0(2^{-J} xi)
        CHECK(std::abs(sum - part.cutoffs().psi0(std::ldexp(1.0, -J) * xi)) <= 1e-14);
      }
      CHECK(worst <= 1e-12);
      CHECK(overlap <= 3);
    }
  }
}

TEST_CASE("psi_j derivatives match difference quotients") {
  DyadicPartition part(build_cutoffs(), 10, 0.5);
  const double h = 1e-5;
  for (int j : {0, 1, 4, 7})
    for (double r : {0.4, 1.3, 3.1, 12.0, 70.0, 200.0}) {
      const double d = part.psi_derivative(j, Point(r), MultiIndex(1));
      const double fd = (part.psi(j, Point(r + h)) - part.psi(j, Point(r - h))) / (2 * h);
      CHECK(std::abs(d - fd) <= 1e-6 * std::max(1.0, std::abs(d)));
    }
  const Point xi(2.1, -1.4);
  const double d = part.psi_derivative(2, xi, MultiIndex(0, 1));
  const double fd = (part.psi(2, Point(2.1, -1.4 + h)) - part.psi(2, Point(2.1, -1.4 - h))) / (2 * h);
  CHECK(std::abs(d - fd) <= 1e-6);
}

TEST_CASE("psi estimate check") {
  for (int dim : {1, 2}) {
    auto rep = psi_estimate_check(DyadicPartition(build_cutoffs(), 8, 0.5), dim);
    CHECK(rep.uniform[0] <= 1.0 + 1e-15);
    CHECK(rep.ratio_min >= 0.25);
    CHECK(rep.ratio_max <= 4.0);
    CHECK(rep.max_overlap <= 3);
    for (double c : rep.uniform) CHECK(std::isfinite(c));
  }
  // The alpha = 1 constant is scale invariant: more annuli do not raise it.
  auto small = psi_estimate_check(DyadicPartition(build_cutoffs(), 6, 0.5));
  auto large = psi_estimate_check(DyadicPartition(build_cutoffs(), 14, 0.5));
  CHECK(large.uniform[1] <= 1.02 * small.uniform[1]);
  for (int j = 3; j <= 14; ++j)
    CHECK(large.constants[1][static_cast<std::size_t>(j)] == doctest::Approx(large.constants[1][3]).epsilon(0.02));
}

TEST_CASE("apply_J on modes and constants") {
  Grid g = Grid::line(256);
  for (int k : {0, 3, 17, -40}) {
    auto f = GridFunction::sample(g, [&](const Point& x) { return std::exp(Complex(0.0, k * x[0])); });
    auto keep = apply_J(0.9 / std::max(1, std::abs(k)), f);
    CHECK(oracle::max_diff(keep.values(), f.values()) < 1e-13);
    if (k != 0) {
      auto kill = apply_J(2.0 / std::abs(k), f);
      CHECK(oracle::max_abs(kill.values()) < 1e-13);
      auto mid = apply_J(1.5 / std::abs(k), f);
      CHECK(oracle::max_abs(mid.values()) == doctest::Approx(oracle::exp_step(1.5)).epsilon(1e-12));
    }
  }
  auto c = GridFunction::sample(g, [](const Point&) { return Complex(2.0, -1.0); });
  CHECK(oracle::max_diff(apply_J(1.0, c).values(), c.values()) < 1e-13);
  CHECK_THROWS_AS(apply_J(0.0, c), ParameterError);
}

TEST_CASE("apply_J contracts and commutes with derivatives") {
  std::mt19937_64 rng(7);
  for (int dim : {1, 2}) {
    Grid g(dim, 1.0, dim == 1 ? 128 : 32);
    for (int trial = 0; trial < 20; ++trial) {
      auto f = oracle::random_function(g, 1, rng);
      const double eps = std::ldexp(1.0, -(trial % 5));
      auto jf = apply_J(eps, f);
      CHECK(l2_norm(jf) <= l2_norm(f) * (1 + 1e-14));
      auto cj = forward_fourier(jf);
      auto cf = forward_fourier(f);
      for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(cj.at(i, 0)) <= std::abs(cf.at(i, 0)) * (1 + 1e-12) + 1e-300);
      for (int order = 1; order <= 2; ++order)
        for (const auto& beta : multi_indices_of_order(dim, order)) {
          auto a = spectral_derivative(apply_J(eps, f), beta);
          auto b = apply_J(eps, spectral_derivative(f, beta));
          CHECK(oracle::max_diff(a.values(), b.values()) <= 1e-12 * std::max(1.0, oracle::max_abs(a.values())));
        }
      auto one_minus = apply_one_minus_J(eps, f);
      std::vector<Complex> sum(f.values().size());
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = jf.values()[i] + one_minus.values()[i];
      CHECK(oracle::max_diff(sum, f.values()) <= 1e-12 * oracle::max_abs(f.values()));
    }
  }
}

TEST_CASE("J_eps sweep on the Weierstrass function") {
  const double tau = 0.3;
  const int P = 8192;
  Grid g = Grid::line(P);
  auto w = GridFunction::sample(g, [&](const Point& x) { return Complex(oracle::weierstrass(x[0], tau, 12), 0.0); });
  std::vector<double> eps;
  for (int k = 2; k <= 8; ++k) eps.push_back(std::ldexp(1.0, -k));
  auto sw = j_epsilon_estimate_sweep(w, tau, MultiIndex(1), eps);
  for (std::size_t i = 0; i < eps.size(); ++i)
    CHECK(sw.j_norms[i] == doctest::Approx(oracle::weierstrass_j_derivative_sup(eps[i], tau, 12, P)).epsilon(1e-9));
  CHECK(std::abs(sw.j_slope + 0.7) <= 0.15);
  CHECK(sw.j_pass);
  CHECK(sw.pass());

  auto s0 = j_epsilon_estimate_sweep(w, tau, MultiIndex(0), eps);
  CHECK(s0.j_pass);
  CHECK(s0.remainder_slope >= tau - 0.15);
  CHECK(s0.remainder_pass);
  CHECK(s0.holder_pass);
  CHECK(s0.pass());
}

TEST_CASE("J_eps sweep on smooth and constant functions") {
  Grid g = Grid::line(512);
  std::vector<double> eps = {0.5, 0.25, 0.125, 0.0625};
  auto smooth = GridFunction::sample(g, [](const Point& x) { return Complex(std::exp(std::cos(x[0])), 0.0); });
  auto s = j_epsilon_estimate_sweep(smooth, 2.5, MultiIndex(0), eps);
  CHECK(std::isfinite(s.remainder_slope));
  CHECK(s.remainder_slope >= 2.5);
  CHECK(s.pass());
  auto c = GridFunction::sample(g, [](const Point&) { return Complex(4.0, 0.0); });
  for (int b = 1; b <= 3; ++b) {
    auto r = j_epsilon_estimate_sweep(c, 0.5, MultiIndex(b), eps);
    for (double v : r.j_norms) CHECK(v == 0.0);
    CHECK(r.pass());
  }
  CHECK_THROWS_AS(j_epsilon_estimate_sweep(c, 0.5, MultiIndex(1), {0.5, 0.25, 0.125}), ParameterError);
}
