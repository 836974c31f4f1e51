#pragma once

#include <vector>

#include "dilab/grid.hpp"

namespace dilab {

namespace fft {
/// Unnormalized in-place DFT, X_k = sum_j x_j exp(-2 pi i jk/N) per axis (row-major dims).
void forward(cplx* data, const std::vector<int>& dims);
/// Unnormalized in-place inverse DFT (positive exponent).
void backward(cplx* data, const std::vector<int>& dims);
}  // namespace fft

/// Frequency component xi_a for every Fourier index (FFT order, Nyquist kept).
RealVector frequency_component(const Grid& grid, int a);
/// |xi|^2 for every Fourier index.
RealVector frequency_norm_sq(const Grid& grid);
/// Area element of the frequency lattice, (1 / 2L)^d.
double frequency_cell(const Grid& grid);

/// Samples of f^(xi) = int exp(-2 pi i x.xi) f(x) dx at the lattice frequencies (FFT order).
ComplexVector fourier_transform(const ComplexField& f);
/// Inverse of fourier_transform on the same grid.
ComplexField inverse_fourier_transform(const GridPtr& grid, const ComplexVector& coefficients);
/// Applies a Fourier multiplier given per Fourier index (FFT order).
ComplexField apply_symbol(const ComplexField& f, const ComplexVector& symbol);
ComplexField apply_symbol(const ComplexField& f, const RealVector& symbol);
/// Symbol of d/dx_a, 2 pi i xi_a, with the Nyquist component set to zero.
ComplexVector derivative_symbol(const Grid& grid, int a);

}  // namespace dilab
