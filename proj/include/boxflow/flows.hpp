#pragma once

#include <array>
#include <vector>

#include "boxflow/field.hpp"
#include "boxflow/geometry.hpp"
#include "boxflow/profiles.hpp"

namespace boxflow::flows {

struct UnderResolved : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PlacementFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonIntegerWavevector : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewSamples : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ProfileKind { bump, bandlimited };

// Oscillation parameter bundle.  All phases use the per-triple integer frame
// K = denom * k, so sigma * K and lambda * K are integer wavevectors; the
// traveling factor carries phase sigma * denom * (kbar.x + mu t).
struct FlowParams {
  long lambda = 16;
  long sigma = 1;
  double mu = 4.0;
  int r_inv = 2;
  int rbar_inv = 2;
  int rbarbar_inv = 2;
  double support_width = 0.125;
  ProfileKind profile = ProfileKind::bump;
  int profile_modes = 2;  // band-limited realization only
  bool enforce_resolution = true;
};

using Vec3 = geometry::Vec3;

// One intermittent box flow attached to a direction triple: three stretched
// profiles composed with the orthonormal integer phases, the fast plane-wave
// oscillation psi_k and its curl potentials.
class BoxFlow {
 public:
  BoxFlow(const geometry::DirectionTriple& triple, const FlowParams& params,
          const Vec3& shift);

  const geometry::DirectionTriple& triple() const { return triple_; }
  const FlowParams& params() const { return params_; }
  const Vec3& shift() const { return shift_; }
  double handedness() const { return handed_; }

  // phase variables (arguments of the 1-periodic profiles)
  double phase1(double x1, double x2, double x3) const;            // along k
  double phase2(double x1, double x2, double x3, double t) const;  // along kbar, travels
  double phase3(double x1, double x2, double x3) const;            // along kbarbar

  const profiles::Profile& prof1() const { return *p1_; }
  const profiles::Profile& prof2() const { return *p2_; }
  const profiles::Profile& prof3() const { return *p3_; }

  // phi_k phi_kbar phi_kbarbar at (x, t); unit L^2 at every t
  double product(double x1, double x2, double x3, double t) const;
  double product_sq(double x1, double x2, double x3, double t) const;
  // d/dt of the squared product (only the traveling factor depends on t)
  double product_sq_dt(double x1, double x2, double x3, double t) const;
  // (d_t^-1 P_{>0} phi_kbar^2)(x,t): bounded by 2 pointwise
  double traveling_sq_antiderivative(double x1, double x2, double x3, double t) const;

  // fast oscillation psi_k(x) = sqrt(2) cos(2 pi lambda K.x), |psi_k|_L2 = 1
  double psi(double x1, double x2, double x3) const;
  double Psi(double x1, double x2, double x3) const;  // psi = lap Psi / (lambda N)^2
  // potentials: psi_k kbar = curl(F_kbar)/lambda, psi_k kbarbar = curl(F_kbarbar)/lambda
  void F_kbar(double x1, double x2, double x3, double* out) const;
  void F_kbarbar(double x1, double x2, double x3, double* out) const;

  // largest 1-D phase feature frequency the grid has to resolve
  double max_frequency() const;
  // true at points where all three factors vanish identically
  bool in_support(double x1, double x2, double x3, double t) const;

 private:
  geometry::DirectionTriple triple_;
  FlowParams params_;
  Vec3 shift_;
  double handed_;
  std::array<double, 3> K_, Kbar_, Kbarbar_;  // integer frame vectors
  double theta1_, theta2_, theta3_;           // phase offsets from the shift
  profiles::ProfilePtr p1_, p2_, p3_;
};

// A family of box flows over a list of triples with shifts that keep the
// space-time supports pairwise disjoint (bump profiles only).
struct BoxFlowFamily {
  std::vector<BoxFlow> flows;
};

// Exact certificate that two box-flow supports never meet at any (x, t): the
// six window phases are integer linear forms on the space-time torus, so the
// test is an integer-translate membership query on the kernel zonotope.
// Requires mu * sigma * denom integral for both flows.  At desk-scale window
// sizes this can be genuinely unachievable for cross-frame pairs; the
// fixed-time variant below is then the usable notion.
bool supports_disjoint(const BoxFlow& a, const BoxFlow& b);
bool supports_disjoint_at(const BoxFlow& a, const BoxFlow& b, double t);

// Greedy shift search over a deterministic candidate lattice.  A candidate is
// accepted when every pair is certified disjoint at each certification time
// (for all t simultaneously when cert_times is empty).
std::vector<Vec3> compute_shifts(const std::vector<geometry::DirectionTriple>& triples,
                                 const FlowParams& params,
                                 const std::vector<double>& cert_times = {0.0},
                                 long backtrack_limit = 100000);

BoxFlowFamily build_family(const std::vector<geometry::DirectionTriple>& triples,
                           const FlowParams& params,
                           const std::vector<double>& cert_times = {0.0});

// Scaling reports at the paper exponents (1-D factor form).
struct ScalingReport {
  std::vector<long> lambdas;
  std::vector<double> values;   // per-lambda norm or support measure
  double fitted_exponent;       // least-squares slope of log value vs log lambda
  double theory_exponent;
};

// ||phi_{k,kbar,kbarbar}||_{L^p} over lambda: theory (14/16)(1-2/p)+(5/16)(1/2-1/p)
ScalingReport lp_norm_report(const std::vector<long>& lambdas, double p,
                             double support_width = 0.125);
// support measure over lambda: theory -33/16
ScalingReport support_measure_report(const std::vector<long>& lambdas,
                                     double support_width = 0.125);

}  // namespace boxflow::flows
