#include "boxflow/field.hpp"

#include "boxflow/fft.hpp"
#include "boxflow/par.hpp"

namespace boxflow {

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  if (grid_ != o.grid_ || rank_ != o.rank_)
    throw std::invalid_argument("SpectralField::operator+=: shape mismatch");
  if (sym_ != o.sym_) sym_ = Symmetry::none;
  for (int c = 0; c < components(); ++c) {
    auto& a = comps_[c];
    const auto& b = o.comps_[c];
    par::for_each(a.size(), [&](std::size_t i) { a[i] += b[i]; });
  }
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  if (grid_ != o.grid_ || rank_ != o.rank_)
    throw std::invalid_argument("SpectralField::operator-=: shape mismatch");
  if (sym_ != o.sym_) sym_ = Symmetry::none;
  for (int c = 0; c < components(); ++c) {
    auto& a = comps_[c];
    const auto& b = o.comps_[c];
    par::for_each(a.size(), [&](std::size_t i) { a[i] -= b[i]; });
  }
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : comps_) par::for_each(c.size(), [&](std::size_t i) { c[i] *= s; });
  return *this;
}

RealField& RealField::operator+=(const RealField& o) {
  if (sample_n_ != o.sample_n_ || rank_ != o.rank_)
    throw std::invalid_argument("RealField::operator+=: shape mismatch");
  for (int c = 0; c < components(); ++c) {
    auto& a = comps_[c];
    const auto& b = o.comps_[c];
    par::for_each(a.size(), [&](std::size_t i) { a[i] += b[i]; });
  }
  return *this;
}

RealField& RealField::operator-=(const RealField& o) {
  if (sample_n_ != o.sample_n_ || rank_ != o.rank_)
    throw std::invalid_argument("RealField::operator-=: shape mismatch");
  for (int c = 0; c < components(); ++c) {
    auto& a = comps_[c];
    const auto& b = o.comps_[c];
    par::for_each(a.size(), [&](std::size_t i) { a[i] -= b[i]; });
  }
  return *this;
}

RealField& RealField::operator*=(double s) {
  for (auto& c : comps_) par::for_each(c.size(), [&](std::size_t i) { c[i] *= s; });
  return *this;
}

namespace {

// Scatter base-grid coefficients into a (possibly larger) cube, zero padding
// the new high modes; Nyquist content of the base grid is kept as-is when the
// sizes match and split is unnecessary because sample_n > n implies the base
// Nyquist -n/2 maps to a resolvable mode of the big cube.
void embed(const Grid& g, const std::vector<Complex>& in, int big_n, std::vector<Complex>& out) {
  const int n = g.n;
  out.assign(static_cast<std::size_t>(big_n) * big_n * big_n, Complex{0.0, 0.0});
  par::for_each(g.size(), [&](std::size_t flat) {
    const auto m = g.modes_at(flat);
    const std::size_t dst =
        (static_cast<std::size_t>(m[0] >= 0 ? m[0] : m[0] + big_n) * big_n +
         (m[1] >= 0 ? m[1] : m[1] + big_n)) * big_n +
        (m[2] >= 0 ? m[2] : m[2] + big_n);
    out[dst] = in[flat];
  });
}

void extract(const Grid& g, const std::vector<Complex>& big, int big_n, std::vector<Complex>& out) {
  out.assign(g.size(), Complex{0.0, 0.0});
  par::for_each(g.size(), [&](std::size_t flat) {
    const auto m = g.modes_at(flat);
    const std::size_t src =
        (static_cast<std::size_t>(m[0] >= 0 ? m[0] : m[0] + big_n) * big_n +
         (m[1] >= 0 ? m[1] : m[1] + big_n)) * big_n +
        (m[2] >= 0 ? m[2] : m[2] + big_n);
    out[flat] = big[src];
  });
}

}  // namespace

RealField to_real(const SpectralField& f, int sample_n) {
  const int n = f.grid().n;
  const int sn = sample_n > 0 ? sample_n : n;
  if (sn < n) throw std::invalid_argument("to_real: sample_n must be >= n");
  RealField r(f.grid(), sn, f.rank());
  std::vector<Complex> buf;
  for (int c = 0; c < f.components(); ++c) {
    if (sn == n) {
      buf = f.comp(c);
    } else {
      embed(f.grid(), f.comp(c), sn, buf);
    }
    fft::inverse(buf, sn);
    auto& dst = r.comp(c);
    par::for_each(dst.size(), [&](std::size_t i) { dst[i] = buf[i].real(); });
  }
  return r;
}

SpectralField to_spectral(const RealField& r, Symmetry sym) {
  const Grid& g = r.base_grid();
  SpectralField f(g, r.rank(), sym);
  const int sn = r.sample_n();
  std::vector<Complex> buf;
  for (int c = 0; c < f.components(); ++c) {
    const auto& src = r.comp(c);
    buf.assign(src.size(), Complex{});
    par::for_each(src.size(), [&](std::size_t i) { buf[i] = Complex{src[i], 0.0}; });
    fft::forward(buf, sn);
    if (sn == g.n) {
      f.comp(c) = buf;
    } else {
      extract(g, buf, sn, f.comp(c));
    }
  }
  return f;
}

RealField sample_real(const Grid& base, int sample_n, int rank,
                      const std::function<void(double, double, double, double*)>& f) {
  RealField r(base, sample_n, rank);
  const int sn = sample_n;
  const double h = 1.0 / sn;
  const int nc = r.components();
  par::for_each(r.size(), [&](std::size_t flat) {
    const int i3 = static_cast<int>(flat % sn);
    const int i2 = static_cast<int>((flat / sn) % sn);
    const int i1 = static_cast<int>(flat / (static_cast<std::size_t>(sn) * sn));
    double vals[9];
    f(i1 * h, i2 * h, i3 * h, vals);
    for (int c = 0; c < nc; ++c) r.comp(c)[flat] = vals[c];
  });
  return r;
}

SpectralField sample_spectral(const Grid& g, int rank,
                              const std::function<void(double, double, double, double*)>& f,
                              int sample_n, Symmetry sym) {
  const int sn = sample_n > 0 ? sample_n : g.n;
  return to_spectral(sample_real(g, sn, rank, f), sym);
}

double imag_residue(const SpectralField& f) {
  double worst = 0.0;
  std::vector<Complex> buf;
  for (int c = 0; c < f.components(); ++c) {
    buf = f.comp(c);
    fft::inverse(buf, f.grid().n);
    std::vector<double> im(buf.size());
    par::for_each(buf.size(), [&](std::size_t i) { im[i] = buf[i].imag(); });
    const double m = par::det_max_abs(im.data(), im.size());
    if (m > worst) worst = m;
  }
  return worst;
}

}  // namespace boxflow
