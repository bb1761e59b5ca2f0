#pragma once

#include <string>
#include <vector>

#include "pdo/core.hpp"
#include "pdo/taylor.hpp"

namespace pdo {

// Smooth monotone step S with S = 1 on t <= 1 and S = 0 on t >= 2.
// exp_bump is C-infinity (built from e^{-1/t}); poly_bump is the quintic smoothstep (C^2).
enum class BumpProfile { exp_bump, poly_bump };

BumpProfile parse_bump_profile(const std::string& name);
const char* to_string(BumpProfile p);

double step(BumpProfile p, double t);
// S^(k)(t) for k = 0..order.
std::vector<double> step_derivatives(BumpProfile p, double t, int order);

// Series of S(|z| / scale) at z, order = total derivative order wanted.
Series radial_step_series(BumpProfile p, const Point& z, double scale, int order);

// Separable window prod_i S(|x_i| / r) and its partial derivatives.
double window(const Point& x, double r);
double window_derivative(const Point& x, double r, const MultiIndex& beta);

// Weierstrass-type sum sum_{0<=j<terms} 2^{-j s} cos(2^j x) and its k-th derivative.
double weierstrass(double x, double s, int terms, int k = 0);
// Sum of the coefficients 2^{-j s}; the sup of the series.
double weierstrass_mass(double s, int terms);

}  // namespace pdo
