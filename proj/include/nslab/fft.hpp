#pragma once

#include <complex>
#include <vector>

namespace nslab::fft {

using cvec = std::vector<std::complex<double>>;

/// In-place d-dimensional complex DFT on an n^dim cube.
/// Analysis convention: forward() yields coefficients
///   c(k) = (1/n^d) * sum_x f(x) e^{-i xi_k . x},
/// so backward() (plain synthesis, no scaling) inverts it exactly.
void forward(cvec& data, int dim, int n);
void backward(cvec& data, int dim, int n);

}  // namespace nslab::fft
