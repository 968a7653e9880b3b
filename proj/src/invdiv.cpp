#include "boxflow/invdiv.hpp"

#include <cmath>
#include <numbers>

#include "boxflow/ops.hpp"
#include "boxflow/par.hpp"

namespace boxflow::invdiv {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SpectralField div_tensor(const SpectralField& M) { return ops::div(M); }

SpectralField inv_div_sym(const SpectralField& v, double mean_tol) {
  if (v.rank() != 1) throw std::invalid_argument("inv_div_sym: rank-1 input expected");
  const Grid& g = v.grid();
  double m0 = 0.0;
  for (int c = 0; c < 3; ++c) m0 = std::max(m0, std::abs(v.comp(c)[0]));
  if (m0 > mean_tol * std::max(1.0, ops::norm_l2(v)))
    throw ops::NonZeroMean("inv_div_sym: input has nonzero mean");

  SpectralField out(g, 2, Symmetry::symmetric_tracefree);
  const int nyq = -g.n / 2;
  par::for_each(g.size(), [&](std::size_t idx) {
    const auto m = g.modes_at(idx);
    const double m2 = double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2];
    if (m2 == 0.0) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out.comp(i, j)[idx] = Complex{0.0, 0.0};
      return;
    }
    const double inv_lap = -1.0 / (kTwoPi * kTwoPi * m2);
    Complex D[3];
    for (int a = 0; a < 3; ++a)
      D[a] = (m[a] == nyq) ? Complex{0.0, 0.0} : Complex{0.0, kTwoPi * m[a]};
    Complex vl[3] = {v.comp(0)[idx], v.comp(1)[idx], v.comp(2)[idx]};
    // q = lap^-1 div v
    Complex q{0.0, 0.0};
    for (int a = 0; a < 3; ++a) q += D[a] * vl[a];
    q *= inv_lap;
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        Complex val = (D[k] * vl[l] + D[l] * vl[k]) * inv_lap;
        val -= 0.5 * ((k == l ? Complex{1.0, 0.0} : Complex{0.0, 0.0}) +
                      D[k] * D[l] * inv_lap) * q;
        out.comp(k, l)[idx] = val;
        out.comp(l, k)[idx] = val;
      }
  });
  return out;
}

SpectralField inv_div_anti(const SpectralField& u, double div_tol) {
  if (u.rank() != 1) throw std::invalid_argument("inv_div_anti: rank-1 input expected");
  const double unorm = ops::norm_l2(u);
  const double dnorm = ops::norm_l2(ops::div(u));
  if (dnorm > div_tol * std::max(1.0, unorm))
    throw ops::NotDivergenceFree("inv_div_anti: input is not divergence-free");
  double m0 = 0.0;
  for (int c = 0; c < 3; ++c) m0 = std::max(m0, std::abs(u.comp(c)[0]));
  if (m0 > div_tol * std::max(1.0, unorm))
    throw ops::NonZeroMean("inv_div_anti: input has nonzero mean");

  // (Ra u)^{ij} = eps_{ijk} w_k with w = lap^-1 curl u; the sign makes
  // d_j (Ra u)^{ji} = u_i under the row-summed divergence convention.
  SpectralField w = ops::inverse_laplacian(ops::curl(u));
  const Grid& g = u.grid();
  SpectralField out(g, 2, Symmetry::antisymmetric);
  par::for_each(g.size(), [&](std::size_t idx) {
    const Complex w1 = w.comp(0)[idx], w2 = w.comp(1)[idx], w3 = w.comp(2)[idx];
    out.comp(0, 0)[idx] = Complex{0.0, 0.0};
    out.comp(1, 1)[idx] = Complex{0.0, 0.0};
    out.comp(2, 2)[idx] = Complex{0.0, 0.0};
    out.comp(0, 1)[idx] = w3;
    out.comp(1, 0)[idx] = -w3;
    out.comp(0, 2)[idx] = -w2;
    out.comp(2, 0)[idx] = w2;
    out.comp(1, 2)[idx] = w1;
    out.comp(2, 1)[idx] = -w1;
  });
  return out;
}

}  // namespace boxflow::invdiv
