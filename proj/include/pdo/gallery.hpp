#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdo/symbol.hpp"

namespace pdo {

// Parameters shared by the named gallery entries; each entry reads what it needs.
struct GalleryParams {
  int dim = 1;
  double m = 0.0;
  double tau = 0.3;
  double c = 0.5;
  int holder_int = 0;
  std::string g = "xi";
  std::string v = "gauss";
  std::vector<double> diag;
  std::optional<double> window;
  int terms = 12;
};

struct GalleryEntry {
  std::string name;
  std::string description;
  bool oracle_only = false;
};

// Stable, alphabetical.
const std::vector<GalleryEntry>& gallery_catalog();
Symbol gallery(const std::string& name, const GalleryParams& params = {});

// Default window radius (window support |x_i| < 2 r).
inline constexpr double kDefaultWindow = 1.2;
inline constexpr int kWeierstrassTerms = 12;

// <xi>^m.
Symbol bessel(double m, int dim = 1);
// (2 + c w(x) W(x)) <xi>^m with W a normalized Weierstrass sum of regularity
// C^{holder_int, tau}, w a smooth window of radius r.
Symbol rough_elliptic(double m, double tau, double c, int holder_int = 0, int dim = 1, double r = kDefaultWindow,
                      int terms = kWeierstrassTerms);
// g(xi) for g in {xi, ixi, gauss, bessel, one}; m is used by bessel.
Symbol multiplier(const std::string& g, int dim = 1, double m = 0.0);
// v(x) for v in {gauss, sin_windowed, weierstrass_windowed, const}.
Symbol multiplication(const std::string& v, int dim = 1, double tau = 0.3, int holder_int = 0, double c = 1.0,
                      double r = kDefaultWindow, int terms = kWeierstrassTerms);
// diag(entries); all entries scalar, same dimension.
Symbol matrix_diag(const std::vector<Symbol>& entries);
// sin(x_1) w(x) i xi_1.
Symbol transport(int dim = 1, double r = kDefaultWindow);
// x_1 w(x) + i xi_1, with a wide plateau window. Not in any symbol class; kernel-count calibration.
Symbol annihilation(int dim = 1, double r = 1.4);
// 1 - e^{-(|x|^2 + |xi|^2)}; vanishes at the origin.
Symbol vanishing_bump(int dim = 1);

// Normalized Weierstrass factor used by rough_elliptic: sum_j 2^{-j(k+tau)} cos(2^j x) / mass,
// averaged over axes in 2D. Derivatives of order <= holder_int.
double normalized_weierstrass(const Point& x, double tau, int holder_int, int terms, const MultiIndex& beta = {});

}  // namespace pdo
