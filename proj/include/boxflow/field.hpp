#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "boxflow/grid.hpp"

namespace boxflow {

using Complex = std::complex<double>;

enum class Symmetry : std::uint8_t { none = 0, symmetric_tracefree = 1, antisymmetric = 2 };

// A periodic field on T^3 of tensor rank 0, 1 or 2 held as Fourier
// coefficients.  Real fields keep conjugate symmetry c(-m) = conj(c(m));
// every operator in ops.hpp preserves it.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(const Grid& g, int rank, Symmetry sym = Symmetry::none)
      : grid_(g), rank_(rank), sym_(sym) {
    if (rank < 0 || rank > 2) throw std::invalid_argument("SpectralField: rank in {0,1,2}");
    comps_.assign(component_count(rank), std::vector<Complex>(g.size(), Complex{0.0, 0.0}));
  }

  static int component_count(int rank) { return rank == 0 ? 1 : rank == 1 ? 3 : 9; }

  const Grid& grid() const { return grid_; }
  int rank() const { return rank_; }
  Symmetry symmetry() const { return sym_; }
  void set_symmetry(Symmetry s) { sym_ = s; }
  int components() const { return static_cast<int>(comps_.size()); }

  std::vector<Complex>& comp(int c) { return comps_.at(c); }
  const std::vector<Complex>& comp(int c) const { return comps_.at(c); }
  // rank-2 component (i,j), row-major
  std::vector<Complex>& comp(int i, int j) { return comps_.at(3 * i + j); }
  const std::vector<Complex>& comp(int i, int j) const { return comps_.at(3 * i + j); }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  Grid grid_;
  int rank_ = 0;
  Symmetry sym_ = Symmetry::none;
  std::vector<std::vector<Complex>> comps_;
};

// Real-space samples of a field, possibly on a finer (zero-padding) grid.
// Quadratic products of band-limited fields are alias-free when formed on a
// grid of at least 3n/2 points per axis.
class RealField {
 public:
  RealField() = default;
  RealField(const Grid& base, int sample_n, int rank)
      : base_(base), sample_n_(sample_n), rank_(rank) {
    comps_.assign(SpectralField::component_count(rank),
                  std::vector<double>(static_cast<std::size_t>(sample_n) * sample_n * sample_n, 0.0));
  }

  const Grid& base_grid() const { return base_; }
  int sample_n() const { return sample_n_; }
  int rank() const { return rank_; }
  int components() const { return static_cast<int>(comps_.size()); }
  std::size_t size() const {
    return static_cast<std::size_t>(sample_n_) * sample_n_ * sample_n_;
  }

  std::vector<double>& comp(int c) { return comps_.at(c); }
  const std::vector<double>& comp(int c) const { return comps_.at(c); }
  std::vector<double>& comp(int i, int j) { return comps_.at(3 * i + j); }
  const std::vector<double>& comp(int i, int j) const { return comps_.at(3 * i + j); }

  RealField& operator+=(const RealField& o);
  RealField& operator-=(const RealField& o);
  RealField& operator*=(double s);
  friend RealField operator+(RealField a, const RealField& b) { return a += b; }
  friend RealField operator-(RealField a, const RealField& b) { return a -= b; }
  friend RealField operator*(double s, RealField a) { return a *= s; }

 private:
  Grid base_;
  int sample_n_ = 0;
  int rank_ = 0;
  std::vector<std::vector<double>> comps_;
};

// Default padded sample size for alias-free quadratic products.
inline int padded_n(const Grid& g) { return 3 * g.n / 2; }

// spectral -> physical samples on sample_n points per axis (sample_n >= n).
RealField to_real(const SpectralField& f, int sample_n = 0);
// physical samples -> spectral coefficients on the base grid (modes above the
// base Nyquist are discarded).
SpectralField to_spectral(const RealField& r, Symmetry sym = Symmetry::none);

// Pointwise sampling of an analytic field; x components lie in [0,1).
RealField sample_real(const Grid& base, int sample_n, int rank,
                      const std::function<void(double, double, double, double*)>& f);
SpectralField sample_spectral(const Grid& g, int rank,
                              const std::function<void(double, double, double, double*)>& f,
                              int sample_n = 0, Symmetry sym = Symmetry::none);

// Largest |imag| over all physical-space samples; a sanity check that a field
// that should be real actually is.
double imag_residue(const SpectralField& f);

}  // namespace boxflow
