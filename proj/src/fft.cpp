#include "boxflow/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

#include "boxflow/par.hpp"

namespace boxflow::fft {

namespace {

std::mutex g_plan_mutex;

fftw_plan get_plan(int n, int sign) {
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto it = cache.find({n, sign});
  if (it != cache.end()) return it->second;
  std::vector<Complex> scratch(static_cast<std::size_t>(n) * n * n);
  auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
  // FFTW_UNALIGNED lets the plan run on any caller buffer.
  fftw_plan p = fftw_plan_dft_3d(n, n, n, ptr, ptr, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fftw plan creation failed");
  cache.emplace(std::make_pair(n, sign), p);
  return p;
}

}  // namespace

void forward(std::vector<Complex>& a, int n) {
  const std::size_t sz = static_cast<std::size_t>(n) * n * n;
  if (a.size() != sz) throw std::invalid_argument("fft::forward: size mismatch");
  fftw_plan p = get_plan(n, FFTW_FORWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(p, ptr, ptr);
  const double scale = 1.0 / static_cast<double>(sz);
  par::for_each(sz, [&](std::size_t i) { a[i] *= scale; });
}

void inverse(std::vector<Complex>& a, int n) {
  const std::size_t sz = static_cast<std::size_t>(n) * n * n;
  if (a.size() != sz) throw std::invalid_argument("fft::inverse: size mismatch");
  fftw_plan p = get_plan(n, FFTW_BACKWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(p, ptr, ptr);
}

}  // namespace boxflow::fft
