#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "boxflow/field.hpp"

namespace boxflow::geometry {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct OutsideBall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct GapVanishes : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Orthonormal rational frame attached to an oscillation direction.  denom is
// the smallest positive integer with denom*k, denom*kbar, denom*kbarbar all
// integer vectors.
struct DirectionTriple {
  Vec3 k, kbar, kbarbar;
  int denom;
};

struct DirectionSet {
  char label;  // 'b', 'v' or 's'
  std::vector<DirectionTriple> triples;
  double epsilon;  // certified decomposition ball radius (Frobenius)
};

struct DirectionSets {
  DirectionSet b, v, s;
  long n_lambda;  // clears every denominator across all three sets
};

// The three direction families with re-orthonormalized companions; all
// certification (base coefficients, ball radii) happens once at load.
const DirectionSets& load_direction_sets();

// Skew decomposition: M = sum_k a_k (kbar x kbarbar - kbarbar x kbar) with all
// a_k > 0 for ||M||_F <= eps_b.  The map M -> a is affine: a = a0 + L axial(M).
std::array<double, 5> decompose_skew(const Mat3& M);
Mat3 recompose_skew(const std::array<double, 5>& a);
const std::array<double, 5>& skew_base_coefficients();

// Symmetric decomposition: R = sum_k a_k kbar x kbar, unique 6x6 linear solve;
// a_k > 0 for ||R - Id||_F <= eps_v.
std::array<double, 6> decompose_sym(const Mat3& R);
Mat3 recompose_sym(const std::array<double, 6>& a);
double sym_basis_condition_number();

// smooth regularizer: 1 on [0,2], identity on [4,inf), quintic bridge
double chi_regularizer(double z);
double chi_regularizer_derivative(double z);

// <A> = sqrt(1 + ||A||_F^2), used inside the chi arguments
double angle_bracket_frobenius(const Mat3& A);

// Pointwise coefficient fields on a sample grid.
//   skew: a_{b,k}(x) = eta(x) sqrt(rho(x)) sqrt(c_k(M(x)/rho(x)))
//   sym:  a_{v,k}(x) = eta(x) sqrt(rho(x)) sqrt(c_k(Id - R(x)/rho(x)))
// Wherever eta vanishes the coefficients are zero and no ball check applies.
std::vector<RealField> coefficient_fields_skew(const RealField& M, const RealField& rho,
                                               const RealField& eta);
std::vector<RealField> coefficient_fields_sym(const RealField& R, const RealField& rho,
                                              const RealField& eta);

// Monte-Carlo ray search for the positivity radius of the symmetric
// decomposition; deterministic seed, reported by tests and the ledger.
double certify_eps_v_by_rays(int nrays);

Mat3 skew_generator(const DirectionTriple& t);  // kbar x kbarbar - kbarbar x kbar
Mat3 sym_generator(const DirectionTriple& t);   // kbar x kbar

}  // namespace boxflow::geometry
