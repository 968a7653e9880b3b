#include "boxflow/ops.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "boxflow/par.hpp"

namespace boxflow::ops {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class F>
SpectralField map_modes(const SpectralField& f, F&& fn) {
  SpectralField out(f.grid(), f.rank(), f.symmetry());
  const Grid& g = f.grid();
  for (int c = 0; c < f.components(); ++c) {
    const auto& in = f.comp(c);
    auto& dst = out.comp(c);
    par::for_each(g.size(), [&](std::size_t i) {
      const auto m = g.modes_at(i);
      dst[i] = fn(m, in[i]);
    });
  }
  return out;
}

}  // namespace

SpectralField derivative(const SpectralField& f, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("derivative: axis in {1,2,3}");
  const int nyq = -f.grid().n / 2;
  return map_modes(f, [axis, nyq](const std::array<int, 3>& m, Complex v) {
    const int ma = m[axis - 1];
    if (ma == nyq) return Complex{0.0, 0.0};
    return Complex{0.0, kTwoPi * ma} * v;
  });
}

SpectralField remove_mean(const SpectralField& f) {
  SpectralField out = f;
  for (int c = 0; c < out.components(); ++c) out.comp(c)[0] = Complex{0.0, 0.0};
  return out;
}

Complex mean(const SpectralField& f, int comp) { return f.comp(comp)[0]; }

SpectralField laplacian(const SpectralField& f) {
  return map_modes(f, [](const std::array<int, 3>& m, Complex v) {
    const double m2 = double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2];
    return -kTwoPi * kTwoPi * m2 * v;
  });
}

SpectralField inverse_laplacian(const SpectralField& f, double tol) {
  double m0 = 0.0;
  for (int c = 0; c < f.components(); ++c) m0 = std::max(m0, std::abs(f.comp(c)[0]));
  const double scale = ops::norm_l2(f);
  if (m0 > tol * std::max(1.0, scale))
    throw NonZeroMean("inverse_laplacian: input has nonzero mean");
  return map_modes(f, [](const std::array<int, 3>& m, Complex v) {
    const double m2 = double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2];
    if (m2 == 0.0) return Complex{0.0, 0.0};
    return v / (-kTwoPi * kTwoPi * m2);
  });
}

SpectralField heat_semigroup(const SpectralField& f, double t) {
  if (t < 0.0) throw NegativeTime("heat_semigroup: t must be >= 0");
  return map_modes(f, [t](const std::array<int, 3>& m, Complex v) {
    const double m2 = double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2];
    return std::exp(-kTwoPi * kTwoPi * m2 * t) * v;
  });
}

SpectralField grad(const SpectralField& scalar) {
  if (scalar.rank() != 0) throw std::invalid_argument("grad: rank-0 input expected");
  SpectralField out(scalar.grid(), 1);
  for (int a = 1; a <= 3; ++a) out.comp(a - 1) = derivative(scalar, a).comp(0);
  return out;
}

SpectralField div(const SpectralField& v) {
  if (v.rank() == 1) {
    SpectralField out(v.grid(), 0);
    const Grid& g = v.grid();
    const int nyq = -g.n / 2;
    auto& dst = out.comp(0);
    par::for_each(g.size(), [&](std::size_t i) {
      const auto m = g.modes_at(i);
      Complex s{0.0, 0.0};
      for (int a = 0; a < 3; ++a) {
        if (m[a] == nyq) continue;
        s += Complex{0.0, kTwoPi * m[a]} * v.comp(a)[i];
      }
      dst[i] = s;
    });
    return out;
  }
  if (v.rank() == 2) {
    // (div M)_i = d_j M_{ji}
    SpectralField out(v.grid(), 1);
    const Grid& g = v.grid();
    const int nyq = -g.n / 2;
    for (int i = 0; i < 3; ++i) {
      auto& dst = out.comp(i);
      par::for_each(g.size(), [&](std::size_t k) {
        const auto m = g.modes_at(k);
        Complex s{0.0, 0.0};
        for (int j = 0; j < 3; ++j) {
          if (m[j] == nyq) continue;
          s += Complex{0.0, kTwoPi * m[j]} * v.comp(j, i)[k];
        }
        dst[k] = s;
      });
    }
    return out;
  }
  throw std::invalid_argument("div: rank-1 or rank-2 input expected");
}

SpectralField curl(const SpectralField& v) {
  if (v.rank() != 1) throw std::invalid_argument("curl: rank-1 input expected");
  const Grid& g = v.grid();
  const int nyq = -g.n / 2;
  SpectralField out(g, 1);
  par::for_each(g.size(), [&](std::size_t k) {
    const auto m = g.modes_at(k);
    Complex im[3];
    for (int a = 0; a < 3; ++a)
      im[a] = (m[a] == nyq) ? Complex{0, 0} : Complex{0.0, kTwoPi * m[a]};
    out.comp(0)[k] = im[1] * v.comp(2)[k] - im[2] * v.comp(1)[k];
    out.comp(1)[k] = im[2] * v.comp(0)[k] - im[0] * v.comp(2)[k];
    out.comp(2)[k] = im[0] * v.comp(1)[k] - im[1] * v.comp(0)[k];
  });
  return out;
}

SpectralField leray_project(const SpectralField& v) {
  if (v.rank() != 1) throw std::invalid_argument("leray_project: rank-1 input expected");
  const Grid& g = v.grid();
  SpectralField out(g, 1);
  par::for_each(g.size(), [&](std::size_t k) {
    const auto m = g.modes_at(k);
    const double m2 = double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2];
    if (m2 == 0.0) {
      for (int a = 0; a < 3; ++a) out.comp(a)[k] = v.comp(a)[k];
      return;
    }
    Complex mv{0.0, 0.0};
    for (int a = 0; a < 3; ++a) mv += double(m[a]) * v.comp(a)[k];
    mv /= m2;
    for (int a = 0; a < 3; ++a) out.comp(a)[k] = v.comp(a)[k] - double(m[a]) * mv;
  });
  return out;
}

namespace {

// Fourier transform of the unit-mass radial bump supported in |x| < eps,
// profile exp(-1/(1-u^2)) in u = |x|/eps.  Radial quadrature is cached per
// eps; psi_hat(0) = 1 exactly by construction.
struct MollifierTable {
  double eps;
  std::vector<double> nodes, weights;  // normalized: sum weights * sinc-free = 1
};

const MollifierTable& mollifier_table(double eps) {
  static std::vector<MollifierTable> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  for (const auto& t : cache)
    if (t.eps == eps) return t;
  MollifierTable t;
  t.eps = eps;
  const int N = 512;  // composite midpoint in radius
  t.nodes.resize(N);
  t.weights.resize(N);
  double mass = 0.0;
  for (int i = 0; i < N; ++i) {
    const double u = (i + 0.5) / N;  // radius fraction
    const double w = std::exp(-1.0 / (1.0 - u * u));
    const double r = u * eps;
    t.nodes[i] = r;
    t.weights[i] = w * r * r;  // 4*pi and du absorbed by normalization
    mass += t.weights[i];
  }
  for (auto& w : t.weights) w /= mass;
  cache.push_back(std::move(t));
  return cache.back();
}

double mollifier_hat(const MollifierTable& t, double mabs) {
  if (mabs == 0.0) return 1.0;
  double s = 0.0;
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const double arg = kTwoPi * mabs * t.nodes[i];
    const double sinc = arg == 0.0 ? 1.0 : std::sin(arg) / arg;
    s += t.weights[i] * sinc;
  }
  return s;
}

}  // namespace

SpectralField mollify(const SpectralField& f, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw BadEpsilon("mollify: eps must lie in (0, 1/2)");
  const auto& table = mollifier_table(eps);
  return map_modes(f, [&](const std::array<int, 3>& m, Complex v) {
    const double mabs =
        std::sqrt(double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2]);
    return mollifier_hat(table, mabs) * v;
  });
}

// ---- products ---------------------------------------------------------------

namespace {
int product_sample_n(const Grid& g) { return padded_n(g); }
}  // namespace

RealField mul(const RealField& s, const RealField& f) {
  if (s.rank() != 0) throw std::invalid_argument("mul: rank-0 first factor expected");
  if (s.sample_n() != f.sample_n()) throw std::invalid_argument("mul: sample grid mismatch");
  RealField out(f.base_grid(), f.sample_n(), f.rank());
  for (int c = 0; c < f.components(); ++c) {
    const auto& a = s.comp(0);
    const auto& b = f.comp(c);
    auto& dst = out.comp(c);
    par::for_each(dst.size(), [&](std::size_t i) { dst[i] = a[i] * b[i]; });
  }
  return out;
}

RealField dot(const RealField& v, const RealField& w) {
  if (v.rank() != 1 || w.rank() != 1) throw std::invalid_argument("dot: rank-1 inputs expected");
  if (v.sample_n() != w.sample_n()) throw std::invalid_argument("dot: sample grid mismatch");
  RealField out(v.base_grid(), v.sample_n(), 0);
  auto& dst = out.comp(0);
  par::for_each(dst.size(), [&](std::size_t i) {
    dst[i] = v.comp(0)[i] * w.comp(0)[i] + v.comp(1)[i] * w.comp(1)[i] +
             v.comp(2)[i] * w.comp(2)[i];
  });
  return out;
}

RealField outer(const RealField& v, const RealField& w) {
  if (v.rank() != 1 || w.rank() != 1) throw std::invalid_argument("outer: rank-1 inputs expected");
  if (v.sample_n() != w.sample_n()) throw std::invalid_argument("outer: sample grid mismatch");
  RealField out(v.base_grid(), v.sample_n(), 2);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto& dst = out.comp(i, j);
      const auto& a = v.comp(i);
      const auto& b = w.comp(j);
      par::for_each(dst.size(), [&](std::size_t k) { dst[k] = a[k] * b[k]; });
    }
  return out;
}

SpectralField mul(const SpectralField& s, const SpectralField& f) {
  const int np = product_sample_n(f.grid());
  return to_spectral(mul(to_real(s, np), to_real(f, np)));
}

SpectralField dot(const SpectralField& v, const SpectralField& w) {
  const int np = product_sample_n(v.grid());
  return to_spectral(dot(to_real(v, np), to_real(w, np)));
}

SpectralField outer(const SpectralField& v, const SpectralField& w) {
  const int np = product_sample_n(v.grid());
  return to_spectral(outer(to_real(v, np), to_real(w, np)));
}

// ---- tensor algebra ---------------------------------------------------------

SpectralField transpose(const SpectralField& t) {
  if (t.rank() != 2) throw std::invalid_argument("transpose: rank-2 input expected");
  SpectralField out(t.grid(), 2, t.symmetry());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.comp(i, j) = t.comp(j, i);
  return out;
}

SpectralField trace(const SpectralField& t) {
  if (t.rank() != 2) throw std::invalid_argument("trace: rank-2 input expected");
  SpectralField out(t.grid(), 0);
  auto& dst = out.comp(0);
  par::for_each(dst.size(), [&](std::size_t k) {
    dst[k] = t.comp(0, 0)[k] + t.comp(1, 1)[k] + t.comp(2, 2)[k];
  });
  return out;
}

SpectralField deviatoric(const SpectralField& t) {
  SpectralField tr = trace(t);
  SpectralField out = t;
  for (int i = 0; i < 3; ++i) {
    auto& d = out.comp(i, i);
    const auto& s = tr.comp(0);
    par::for_each(d.size(), [&](std::size_t k) { d[k] -= s[k] / 3.0; });
  }
  return out;
}

// ---- norms ------------------------------------------------------------------

double norm_lp(const RealField& f, double p) {
  const std::size_t sz = f.size();
  const int nc = f.components();
  auto mag2 = [&](std::size_t i) {
    double s = 0.0;
    for (int c = 0; c < nc; ++c) s += f.comp(c)[i] * f.comp(c)[i];
    return s;
  };
  if (p == std::numeric_limits<double>::infinity()) {
    std::vector<double> m(sz);
    par::for_each(sz, [&](std::size_t i) { m[i] = std::sqrt(mag2(i)); });
    return par::det_max_abs(m.data(), sz);
  }
  if (p == 1.0)
    return par::det_sum_indexed(sz, [&](std::size_t i) { return std::sqrt(mag2(i)); }) / double(sz);
  if (p == 2.0)
    return std::sqrt(par::det_sum_indexed(sz, [&](std::size_t i) { return mag2(i); }) / double(sz));
  return std::pow(
      par::det_sum_indexed(sz, [&](std::size_t i) { return std::pow(mag2(i), p / 2.0); }) /
          double(sz),
      1.0 / p);
}

double norm_lp(const SpectralField& f, double p, int sample_n) {
  if (!(p == 1.0 || p == 2.0 || p == std::numeric_limits<double>::infinity()))
    throw UnsupportedSpec("norm_lp: p must be 1, 2 or inf");
  return norm_lp(to_real(f, sample_n), p);
}

double norm_l2(const SpectralField& f) {
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const auto& a = f.comp(c);
    s += par::det_sum_indexed(a.size(), [&](std::size_t i) { return std::norm(a[i]); });
  }
  return std::sqrt(s);
}

double norm_hs(const SpectralField& f, const HsSpec& spec) {
  const Grid& g = f.grid();
  double total = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const auto& a = f.comp(c);
    total += par::det_sum_indexed(a.size(), [&](std::size_t i) {
      const auto m = g.modes_at(i);
      const double m2 = double(m[0]) * m[0] + double(m[1]) * m[1] + double(m[2]) * m[2];
      if (spec.homogeneous) {
        if (m2 == 0.0) return 0.0;
        return std::pow(kTwoPi * kTwoPi * m2, spec.s) * std::norm(a[i]);
      }
      return std::pow(1.0 + kTwoPi * kTwoPi * m2, spec.s) * std::norm(a[i]);
    });
  }
  return std::sqrt(total);
}

double norm_wn1(const SpectralField& f, int N) {
  if (N < 0) throw UnsupportedSpec("norm_wn1: N >= 0");
  // sum of ||D^alpha f||_L1 over all multi-indices |alpha| <= N; each
  // multi-index is generated once by extending only along axes <= the
  // first axis already touched.
  double total = norm_lp(f, 1.0);
  std::vector<std::pair<std::array<int, 3>, SpectralField>> layer;
  layer.emplace_back(std::array<int, 3>{0, 0, 0}, f);
  for (int order = 1; order <= N; ++order) {
    std::vector<std::pair<std::array<int, 3>, SpectralField>> next;
    for (const auto& [alpha, fld] : layer) {
      for (int a = 0; a < 3; ++a) {
        bool canonical = true;
        for (int b = a + 1; b < 3; ++b)
          if (alpha[b] > 0) canonical = false;
        if (!canonical) continue;
        auto na = alpha;
        na[a] += 1;
        SpectralField d = derivative(fld, a + 1);
        total += norm_lp(d, 1.0);
        next.emplace_back(na, std::move(d));
      }
    }
    layer = std::move(next);
  }
  return total;
}

double inner(const SpectralField& f, const SpectralField& g) {
  if (f.rank() != g.rank()) throw std::invalid_argument("inner: rank mismatch");
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const auto& a = f.comp(c);
    const auto& b = g.comp(c);
    s += par::det_sum_indexed(a.size(), [&](std::size_t i) {
      return a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
    });
  }
  return s;
}

double inner(const RealField& f, const RealField& g) {
  if (f.rank() != g.rank() || f.sample_n() != g.sample_n())
    throw std::invalid_argument("inner: shape mismatch");
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    const auto& a = f.comp(c);
    const auto& b = g.comp(c);
    s += par::det_sum_indexed(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
  }
  return s / double(f.size());
}

}  // namespace boxflow::ops
