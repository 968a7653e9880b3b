#pragma once

#include "boxflow/field.hpp"

namespace boxflow::invdiv {

// (div M)_i = d_j M_{ji}
SpectralField div_tensor(const SpectralField& M);

// Symmetric trace-free right inverse of the divergence:
//   (Rv)^{kl} = d_k lap^-1 v^l + d_l lap^-1 v^k
//             - 1/2 (delta_kl + d_k d_l lap^-1) div lap^-1 v.
// Requires mean-free input; div(Rv) = v in exact spectral arithmetic.
SpectralField inv_div_sym(const SpectralField& v, double mean_tol = 1e-10);

// Antisymmetric right inverse on divergence-free fields:
//   (Ra u)^{ij} = eps_{ijk} (-lap)^-1 (curl u)_k.
SpectralField inv_div_anti(const SpectralField& u, double div_tol = 1e-10);

}  // namespace boxflow::invdiv
