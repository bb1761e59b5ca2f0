#pragma once

#include <complex>

namespace pdo::fft {

// Unnormalized in-place DFTs on a dim-dimensional cube of side n (row-major).
// forward uses e^{-2 pi i jk/n}, backward e^{+2 pi i jk/n}.
void forward(std::complex<double>* data, int dim, int n);
void backward(std::complex<double>* data, int dim, int n);

}  // namespace pdo::fft
