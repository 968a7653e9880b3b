#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace boxflow::par {

// Process-wide switch between the OpenMP kernels and the serial reference
// implementations.  Reading BOXFLOW_SERIAL=1 from the environment at startup
// forces serial mode.
bool enabled();
void set_enabled(bool on);
int max_threads();

// Deterministic sum: the array is split into fixed-size chunks, each chunk is
// summed serially, and the chunk results are combined in index order.  The
// result is bitwise identical no matter how many threads run the chunks.
double det_sum(const double* data, std::size_t n);
std::complex<double> det_sum(const std::complex<double>* data, std::size_t n);

double det_max_abs(const double* data, std::size_t n);

// Deterministic sum of f(i) for i in [0, n).
template <class F>
double det_sum_indexed(std::size_t n, F&& f) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static) if (enabled() && nchunks > 1)
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Parallel loop over [0, n); the body must be free of cross-iteration state.
template <class F>
void for_each(std::size_t n, F&& f) {
#pragma omp parallel for schedule(static) if (enabled() && n > 1)
  for (long long i = 0; i < static_cast<long long>(n); ++i)
    f(static_cast<std::size_t>(i));
}

}  // namespace boxflow::par
