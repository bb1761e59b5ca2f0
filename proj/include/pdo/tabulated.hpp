#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdo/grid.hpp"
#include "pdo/symbol.hpp"

namespace pdo {

// Unnormalized forward FFT of the lattice column d_xi^alpha a(x_k, xi); layout k * N^2 + (r * N + c).
using ColumnCoefficients = std::vector<Complex>;
using ColumnProvider = std::function<ColumnCoefficients(const Point& xi, const MultiIndex& alpha)>;

// x-derivatives of a tabulated symbol are spectral; beyond this order the lattice data carries no information.
inline constexpr int kTabulatedXOrder = 6;

struct TabulatedOptions {
  int max_xi = kUnbounded;
  int max_x = kTabulatedXOrder;
  std::optional<LimitEval> limit;
  std::size_t cache_limit = 4096;  // columns kept per cache
};

// Symbol backed by lattice columns in x. Values at lattice nodes come straight from the inverse FFT;
// other x use the trigonometric interpolant (the Nyquist mode as a cosine).
Symbol tabulated_symbol(const std::string& name, const Grid& grid, const SymbolClassSpec& spec, ColumnProvider provider,
                        const TabulatedOptions& options = {});

// Coefficients of the samples of d_xi^alpha a(., xi) on the lattice.
ColumnCoefficients sample_coefficients(const Symbol& a, const Grid& grid, const Point& xi, const MultiIndex& alpha);

// Lattice values of d_x^beta of the column with the given coefficients.
std::vector<Complex> column_values(const Grid& grid, int components, const ColumnCoefficients& coeffs,
                                   const MultiIndex& beta);

// (i xi)^beta on the FFT-ordered lattice; odd orders drop the Nyquist mode per axis.
Complex derivative_factor(const Grid& grid, std::size_t freq, const MultiIndex& beta);

}  // namespace pdo
