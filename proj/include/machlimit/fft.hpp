#pragma once

#include <complex>
#include <vector>

#include "machlimit/grid.hpp"

namespace machlimit {
namespace fft {

using cplx = std::complex<double>;

/// In-place forward DFT (physical -> spectral), normalized by 1/n^d so the
/// coefficients are the amplitudes in f(x) = sum_k c_k exp(i xi_k . x).
void forward(const Grid& grid, std::vector<cplx>& data);

/// In-place backward DFT (spectral -> physical), unnormalized.
void backward(const Grid& grid, std::vector<cplx>& data);

/// Same transforms on an explicit (d, n) shape; used for oversampled grids.
void forward_shape(int d, int n, std::vector<cplx>& data);
void backward_shape(int d, int n, std::vector<cplx>& data);

} // namespace fft
} // namespace machlimit
