#pragma once

#include <string>

#include "boxflow/field.hpp"

namespace boxflow::ops {

// ---- errors ---------------------------------------------------------------
struct NonZeroMean : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeTime : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadEpsilon : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedSpec : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotDivergenceFree : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- spectral calculus ----------------------------------------------------
// d/dx_axis, axis in {1,2,3}: multiplies mode m by 2*pi*i*m_axis.  The
// unpaired Nyquist mode is zeroed to keep outputs real.
SpectralField derivative(const SpectralField& f, int axis);

SpectralField remove_mean(const SpectralField& f);
Complex mean(const SpectralField& f, int comp = 0);

SpectralField laplacian(const SpectralField& f);
// requires mean-free input (tolerance relative to the field size)
SpectralField inverse_laplacian(const SpectralField& f, double tol = 1e-10);
SpectralField heat_semigroup(const SpectralField& f, double t);

SpectralField grad(const SpectralField& scalar);
SpectralField div(const SpectralField& vec);
SpectralField curl(const SpectralField& vec);

// Leray projector Id - grad div / laplacian; the m = 0 mode passes through.
SpectralField leray_project(const SpectralField& vec);

// convolution with a unit-mass radial C^inf bump of support radius eps
SpectralField mollify(const SpectralField& f, double eps);

// ---- products (alias-free via 3/2 zero padding) ----------------------------
SpectralField mul(const SpectralField& scalar, const SpectralField& f);
SpectralField dot(const SpectralField& v, const SpectralField& w);
// (v outer w)_{ij} = v_i w_j
SpectralField outer(const SpectralField& v, const SpectralField& w);

// RealField pointwise helpers (same sample grid required)
RealField mul(const RealField& scalar, const RealField& f);
RealField dot(const RealField& v, const RealField& w);
RealField outer(const RealField& v, const RealField& w);

// ---- tensor algebra ---------------------------------------------------------
SpectralField transpose(const SpectralField& tensor);
SpectralField trace(const SpectralField& tensor);
// A - tr(A)/3 Id
SpectralField deviatoric(const SpectralField& tensor);

// ---- norms ------------------------------------------------------------------
// Lp (p in {1,2,inf}) of the pointwise Frobenius magnitude, by real-space
// quadrature on the sample grid (sample_n = 0 -> the field's own grid).
double norm_lp(const SpectralField& f, double p, int sample_n = 0);
double norm_l2(const SpectralField& f);  // via Parseval; exact for band-limited
struct HsSpec {
  double s = 0.0;
  bool homogeneous = true;
};
double norm_hs(const SpectralField& f, const HsSpec& spec);
double norm_wn1(const SpectralField& f, int N);

double norm_lp(const RealField& f, double p);

// integral of f*g over T^3 (Parseval mode sum)
double inner(const SpectralField& f, const SpectralField& g);
double inner(const RealField& f, const RealField& g);

}  // namespace boxflow::ops
