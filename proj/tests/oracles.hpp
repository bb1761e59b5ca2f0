#pragma once

// Independent reference computations used by the unit tests. None of these
// route through the library's FFT or symbol machinery.

#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "pdo/grid.hpp"

namespace oracle {

using Complex = std::complex<double>;

// Direct O(P^2) evaluation of sum_k e^{-i x_k xi} u(x_k) h on a 1D grid.
Complex direct_fourier_1d(const pdo::Grid& g, const std::vector<Complex>& u, double xi);

// Random complex field with standard normal entries.
pdo::GridFunction random_function(const pdo::Grid& g, int components, std::mt19937_64& rng);

// Largest |a_i - b_i| over the value arrays.
double max_diff(const std::vector<Complex>& a, const std::vector<Complex>& b);
double max_abs(const std::vector<Complex>& a);

// Brute-force Holder quotient sup |f(x)-f(y)| / |x-y|^tau over all periodic
// pairs with separation <= window (1D samples on spacing h).
double brute_holder_quotient(const std::vector<double>& f, double h, double tau, double window);

// Weierstrass partial sum sum_{0<=j<J} 2^{-j s} cos(2^j x).
double weierstrass(double x, double s, int terms);

// Smooth step 1 on t <= 1, 0 on t >= 2 from f(s) = e^{-1/s}: f(2-t) / (f(2-t) + f(t-1)).
double exp_step(double t);

// sup over the P-point lattice of |d/dx phi(eps D) W| for the series above, built term by term:
// phi(eps D) cos(2^j x) = phi(eps 2^j) cos(2^j x).
double weierstrass_j_derivative_sup(double eps, double s, int terms, int P);

// Plain trapezoid for iint e^{-i y eta} f(y, eta) dy deta / (2 pi) on [-R, R]^2 with n points per
// axis; f must decay in both variables.
Complex direct_phase_integral_1d(const std::function<Complex(double, double)>& f, double R, int n);

// Direct O(P^3) quantization of a scalar 1D symbol: M[k][j] = (1/P) sum_m e^{i (x_k - x_j) xi_m} a(x_k, xi_m),
// frequencies xi_m = m / L for m in [-P/2, P/2).
std::vector<std::vector<Complex>> direct_quantize_1d(const std::function<Complex(double, double)>& a, const pdo::Grid& g);

// Trapezoid for int f(eta) e^{i x eta} deta / (2 pi) on [-R, R] with n intervals.
Complex inverse_transform_1d(const std::function<Complex(double)>& f, double x, double R, int n);

}  // namespace oracle
