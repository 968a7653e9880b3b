#pragma once

#include <complex>
#include <vector>

namespace boxflow::fft {

using Complex = std::complex<double>;

// In-place 3-D c2c transforms on an n^3 cube (x3 fastest).  Plans are cached
// per size, created with FFTW_ESTIMATE so repeated runs pick the same
// algorithm and produce bit-identical output.
//
// forward: physical -> coefficients, includes the 1/n^3 normalization.
// inverse: coefficients -> physical, plain exponential sum.
void forward(std::vector<Complex>& a, int n);
void inverse(std::vector<Complex>& a, int n);

}  // namespace boxflow::fft
