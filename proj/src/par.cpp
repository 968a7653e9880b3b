#include "boxflow/par.hpp"

#include <cstdlib>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace boxflow::par {

namespace {
bool initial_state() {
  const char* env = std::getenv("BOXFLOW_SERIAL");
  return !(env && std::strcmp(env, "1") == 0);
}
bool g_enabled = initial_state();
}  // namespace

bool enabled() { return g_enabled; }
void set_enabled(bool on) { g_enabled = on; }

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {
template <class T>
T det_sum_impl(const T* data, std::size_t n) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<T> partial(nchunks, T{});
#pragma omp parallel for schedule(static) if (g_enabled && nchunks > 1)
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    T s{};
    for (std::size_t i = lo; i < hi; ++i) s += data[i];
    partial[static_cast<std::size_t>(c)] = s;
  }
  T total{};
  for (const T& p : partial) total += p;
  return total;
}
}  // namespace

double det_sum(const double* data, std::size_t n) { return det_sum_impl(data, n); }

std::complex<double> det_sum(const std::complex<double>* data, std::size_t n) {
  return det_sum_impl(data, n);
}

double det_max_abs(const double* data, std::size_t n) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static) if (g_enabled && nchunks > 1)
  for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
    const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
    const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      const double a = data[i] < 0 ? -data[i] : data[i];
      if (a > s) s = a;
    }
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double p : partial)
    if (p > total) total = p;
  return total;
}

}  // namespace boxflow::par
