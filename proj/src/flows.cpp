#include "boxflow/flows.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <tuple>
#include <numbers>
#include <numeric>

namespace boxflow::flows {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross3(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::array<double, 3> integer_frame(const Vec3& v, int denom) {
  std::array<double, 3> K;
  for (int i = 0; i < 3; ++i) {
    const double y = v[i] * denom;
    const double r = std::round(y);
    if (std::abs(y - r) > 1e-9)
      throw NonIntegerWavevector("integer_frame: denom does not clear the direction");
    K[i] = r;
  }
  return K;
}

profiles::ProfilePtr make_profile(const profiles::BaseBump& base, int r_inv,
                                  const FlowParams& p) {
  struct Key {
    double width;
    int r_inv, kind, modes;
    bool operator<(const Key& o) const {
      return std::tie(width, r_inv, kind, modes) < std::tie(o.width, o.r_inv, o.kind, o.modes);
    }
  };
  static std::map<Key, profiles::ProfilePtr> cache;
  static std::mutex mtx;
  const Key key{base.width(), r_inv, int(p.profile), p.profile_modes};
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  profiles::ProfilePtr prof = p.profile == ProfileKind::bump
                                  ? profiles::stretched_bump(base, r_inv)
                                  : profiles::bandlimited_stretch(base, r_inv, p.profile_modes);
  cache.emplace(key, prof);
  return prof;
}

}  // namespace

BoxFlow::BoxFlow(const geometry::DirectionTriple& triple, const FlowParams& params,
                 const Vec3& shift)
    : triple_(triple), params_(params), shift_(shift) {
  if (params.sigma < 1 || params.lambda < 1)
    throw std::invalid_argument("BoxFlow: sigma and lambda must be positive integers");
  if (params.r_inv < 1 || params.rbar_inv < 1 || params.rbarbar_inv < 1)
    throw profiles::NotInteger("BoxFlow: concentration scales must be reciprocal integers");
  K_ = integer_frame(triple.k, triple.denom);
  Kbar_ = integer_frame(triple.kbar, triple.denom);
  Kbarbar_ = integer_frame(triple.kbarbar, triple.denom);
  handed_ = dot3(cross3(triple.k, triple.kbar), triple.kbarbar) > 0 ? 1.0 : -1.0;

  profiles::BaseBump base(params.support_width);
  p1_ = make_profile(base, params.r_inv, params);
  p2_ = make_profile(base, params.rbar_inv, params);
  p3_ = make_profile(base, params.rbarbar_inv, params);

  const double sg = double(params.sigma);
  theta1_ = sg * (K_[0] * shift[0] + K_[1] * shift[1] + K_[2] * shift[2]);
  theta2_ = sg * (Kbar_[0] * shift[0] + Kbar_[1] * shift[1] + Kbar_[2] * shift[2]);
  theta3_ = sg * (Kbarbar_[0] * shift[0] + Kbarbar_[1] * shift[1] + Kbarbar_[2] * shift[2]);
}

double BoxFlow::phase1(double x1, double x2, double x3) const {
  return params_.sigma * (K_[0] * x1 + K_[1] * x2 + K_[2] * x3) - theta1_;
}

double BoxFlow::phase2(double x1, double x2, double x3, double t) const {
  return params_.sigma * (Kbar_[0] * x1 + Kbar_[1] * x2 + Kbar_[2] * x3 +
                          triple_.denom * params_.mu * t) -
         theta2_;
}

double BoxFlow::phase3(double x1, double x2, double x3) const {
  return params_.sigma * (Kbarbar_[0] * x1 + Kbarbar_[1] * x2 + Kbarbar_[2] * x3) - theta3_;
}

double BoxFlow::product(double x1, double x2, double x3, double t) const {
  const double f1 = p1_->value(phase1(x1, x2, x3));
  if (f1 == 0.0) return 0.0;
  const double f2 = p2_->value(phase2(x1, x2, x3, t));
  if (f2 == 0.0) return 0.0;
  return f1 * f2 * p3_->value(phase3(x1, x2, x3));
}

double BoxFlow::product_sq(double x1, double x2, double x3, double t) const {
  const double v = product(x1, x2, x3, t);
  return v * v;
}

double BoxFlow::product_sq_dt(double x1, double x2, double x3, double t) const {
  const double f1 = p1_->value(phase1(x1, x2, x3));
  if (f1 == 0.0) return 0.0;
  const double f3 = p3_->value(phase3(x1, x2, x3));
  if (f3 == 0.0) return 0.0;
  const double y2 = phase2(x1, x2, x3, t);
  const double f2 = p2_->value(y2);
  const double f2p = p2_->derivative(y2);
  const double rate = params_.sigma * triple_.denom * params_.mu;  // d(phase2)/dt
  return f1 * f1 * f3 * f3 * 2.0 * f2 * f2p * rate;
}

double BoxFlow::traveling_sq_antiderivative(double x1, double x2, double x3, double t) const {
  return p2_->sq_antiderivative(phase2(x1, x2, x3, t));
}

double BoxFlow::psi(double x1, double x2, double x3) const {
  const double y = params_.lambda * (K_[0] * x1 + K_[1] * x2 + K_[2] * x3);
  return std::sqrt(2.0) * std::cos(kTwoPi * y);
}

double BoxFlow::Psi(double x1, double x2, double x3) const {
  const double y = params_.lambda * (K_[0] * x1 + K_[1] * x2 + K_[2] * x3);
  return -std::sqrt(2.0) * std::cos(kTwoPi * y) / (kTwoPi * kTwoPi);
}

void BoxFlow::F_kbar(double x1, double x2, double x3, double* out) const {
  // psi_k kbar = curl(F_kbar)/lambda with F_kbar = -h Psi'(lambda K.x) kbarbar / N
  const double y = params_.lambda * (K_[0] * x1 + K_[1] * x2 + K_[2] * x3);
  const double Psip = std::sqrt(2.0) * std::sin(kTwoPi * y) / kTwoPi;
  const double c = -handed_ * Psip / triple_.denom;
  for (int i = 0; i < 3; ++i) out[i] = c * triple_.kbarbar[i];
}

void BoxFlow::F_kbarbar(double x1, double x2, double x3, double* out) const {
  const double y = params_.lambda * (K_[0] * x1 + K_[1] * x2 + K_[2] * x3);
  const double Psip = std::sqrt(2.0) * std::sin(kTwoPi * y) / kTwoPi;
  const double c = handed_ * Psip / triple_.denom;
  for (int i = 0; i < 3; ++i) out[i] = c * triple_.kbar[i];
}

double BoxFlow::max_frequency() const {
  double kmax = 0.0;
  for (int i = 0; i < 3; ++i) {
    kmax = std::max(kmax, std::abs(K_[i]));
    kmax = std::max(kmax, std::abs(Kbar_[i]));
    kmax = std::max(kmax, std::abs(Kbarbar_[i]));
  }
  const int rmax = std::max({params_.r_inv, params_.rbar_inv, params_.rbarbar_inv});
  double osc = double(params_.sigma) * kmax * rmax;
  if (params_.profile == ProfileKind::bandlimited)
    osc = double(params_.sigma) * kmax * p1_->max_mode();
  return std::max(osc, double(params_.lambda) * kmax);
}

bool BoxFlow::in_support(double x1, double x2, double x3, double t) const {
  return product(x1, x2, x3, t) != 0.0;
}

namespace {

// Disjointness of two box-flow supports is a statement about six integer
// linear phases on the (x, t) 4-torus: y_i = row_i . (x,t) - tau_i must not
// lie in all six windows [0, s_i) simultaneously.  The image of the phase map
// is exactly the subtorus annihilated by the integer left kernel of the 6x4
// phase matrix, so the test reduces to hitting the kernel congruences inside
// the window box: an integer-translate membership test on a low-dimensional
// zonotope.  Requires integer mu so the time column is integral.

struct PhaseRow {
  long v[4];
  double tau;
  double s;
};

// exact integer left kernel: unimodular row reduction U A = H brings A to
// row-echelon form with gcd pivots; the U-rows matching zero H-rows are a
// basis of the full kernel lattice (not merely a finite-index sublattice,
// which would make the congruence tests below spuriously accept)
std::vector<std::vector<long>> integer_left_kernel(const std::vector<PhaseRow>& rows) {
  const int R = static_cast<int>(rows.size());
  std::vector<std::vector<long long>> H(R, std::vector<long long>(4, 0));
  std::vector<std::vector<long long>> U(R, std::vector<long long>(R, 0));
  for (int i = 0; i < R; ++i) {
    for (int j = 0; j < 4; ++j) H[i][j] = rows[i].v[j];
    U[i][i] = 1;
  }
  int rank = 0;
  for (int col = 0; col < 4 && rank < R; ++col) {
    // Euclidean elimination: repeatedly reduce by the smallest nonzero entry
    while (true) {
      int piv = -1;
      long long best = 0;
      for (int r = rank; r < R; ++r)
        if (H[r][col] != 0 && (piv < 0 || std::abs(H[r][col]) < best)) {
          piv = r;
          best = std::abs(H[r][col]);
        }
      if (piv < 0) break;
      std::swap(H[rank], H[piv]);
      std::swap(U[rank], U[piv]);
      bool clean = true;
      for (int r = rank + 1; r < R; ++r) {
        if (H[r][col] == 0) continue;
        const long long q = H[r][col] / H[rank][col];
        for (int j = 0; j < 4; ++j) H[r][j] -= q * H[rank][j];
        for (int j = 0; j < R; ++j) U[r][j] -= q * U[rank][j];
        if (H[r][col] != 0) clean = false;
      }
      if (clean) {
        ++rank;
        break;
      }
    }
  }
  std::vector<std::vector<long>> kernel;
  for (int r = rank; r < R; ++r) {
    bool zero = true;
    for (int j = 0; j < 4; ++j)
      if (H[r][j] != 0) zero = false;
    if (!zero) continue;
    std::vector<long> ni(R);
    for (int j = 0; j < R; ++j) ni[j] = static_cast<long>(U[r][j]);
    kernel.push_back(std::move(ni));
  }
  return kernel;
}

// membership of p in the zonotope sum of segments g_i*[0,1] (dim 1..3), with
// an inflation margin; zonotopes are slab intersections over facet normals
bool zonotope_hit(const std::vector<std::vector<double>>& gen, const std::vector<double>& p,
                  double margin) {
  const int d = static_cast<int>(p.size());
  std::vector<double> q(p);
  for (const auto& g : gen)
    for (int i = 0; i < d; ++i) q[i] -= g[i] / 2;
  std::vector<std::vector<double>> normals;
  if (d == 1) {
    normals.push_back({1.0});
  } else if (d == 2) {
    for (const auto& g : gen) normals.push_back({-g[1], g[0]});
  } else {
    for (std::size_t a = 0; a < gen.size(); ++a)
      for (std::size_t b = a + 1; b < gen.size(); ++b)
        normals.push_back({gen[a][1] * gen[b][2] - gen[a][2] * gen[b][1],
                           gen[a][2] * gen[b][0] - gen[a][0] * gen[b][2],
                           gen[a][0] * gen[b][1] - gen[a][1] * gen[b][0]});
  }
  for (const auto& u : normals) {
    double nn = 0.0;
    for (int i = 0; i < d; ++i) nn += u[i] * u[i];
    if (nn < 1e-20) continue;
    double lhs = 0.0, support = 0.0;
    for (int i = 0; i < d; ++i) lhs += u[i] * q[i];
    for (const auto& g : gen) {
      double ug = 0.0;
      for (int i = 0; i < d; ++i) ug += u[i] * g[i];
      support += std::abs(ug) / 2;
    }
    if (std::abs(lhs) > support + margin * std::sqrt(nn)) return false;
  }
  return true;
}

bool supports_intersect(const std::vector<PhaseRow>& rows, double margin) {
  auto kernel = integer_left_kernel(rows);
  if (kernel.empty()) return true;
  const int K = static_cast<int>(kernel.size());
  if (K > 3) return true;  // cannot certify; treat as intersecting
  const int R = static_cast<int>(rows.size());
  std::vector<double> c(K, 0.0), ext(K, 0.0);
  std::vector<std::vector<double>> gen(R, std::vector<double>(K, 0.0));
  double msc = 0.0;
  for (int k = 0; k < K; ++k)
    for (int i = 0; i < R; ++i) {
      c[k] -= kernel[k][i] * rows[i].tau;
      gen[i][k] = kernel[k][i] * rows[i].s;
      ext[k] += std::abs(gen[i][k]);
      msc += std::abs(double(kernel[k][i]));
    }
  // enumerate integer translates inside the zonotope extent
  std::vector<long> lo(K), hi(K);
  for (int k = 0; k < K; ++k) {
    lo[k] = long(std::floor(-ext[k] - 1 - c[k]));
    hi[k] = long(std::ceil(ext[k] + 1 - c[k]));
  }
  std::vector<long> z(K, 0);
  std::function<bool(int)> rec = [&](int k) -> bool {
    if (k == K) {
      std::vector<double> p(K);
      for (int i = 0; i < K; ++i) p[i] = c[i] + z[i];
      return zonotope_hit(gen, p, margin * msc);
    }
    for (z[k] = lo[k]; z[k] <= hi[k]; ++z[k])
      if (rec(k + 1)) return true;
    return false;
  };
  return rec(0);
}

// rows for the space-time test (4 columns) or a fixed-time slice (time folded
// into the offsets, 4th column zero)
std::vector<PhaseRow> flow_rows(const BoxFlow& f, bool spacetime, double t) {
  const auto& tr = f.triple();
  const long sg = f.params().sigma;
  const double mu = f.params().mu;
  long tcoeff = 0;
  if (spacetime) {
    tcoeff = std::llround(sg * tr.denom * mu);
    if (std::abs(sg * tr.denom * mu - double(tcoeff)) > 1e-9)
      throw PlacementFailed("supports_disjoint: mu*sigma*denom must be integral");
  }
  std::vector<PhaseRow> rows(3);
  const Vec3* dirs[3] = {&tr.k, &tr.kbar, &tr.kbarbar};
  const double sup[3] = {f.prof1().support_measure(), f.prof2().support_measure(),
                         f.prof3().support_measure()};
  for (int r = 0; r < 3; ++r) {
    for (int i = 0; i < 3; ++i) rows[r].v[i] = sg * std::llround((*dirs[r])[i] * tr.denom);
    rows[r].v[3] = (r == 1) ? tcoeff : 0;
    const auto& sh = f.shift();
    rows[r].tau = rows[r].v[0] * sh[0] + rows[r].v[1] * sh[1] + rows[r].v[2] * sh[2];
    if (!spacetime && r == 1) rows[r].tau -= sg * tr.denom * mu * t;
    rows[r].s = sup[r];
  }
  return rows;
}

}  // namespace

bool supports_disjoint(const BoxFlow& A, const BoxFlow& B) {
  std::vector<PhaseRow> rows = flow_rows(A, true, 0.0);
  for (auto& r : flow_rows(B, true, 0.0)) rows.push_back(r);
  return !supports_intersect(rows, 1e-7);
}

bool supports_disjoint_at(const BoxFlow& A, const BoxFlow& B, double t) {
  std::vector<PhaseRow> rows = flow_rows(A, false, t);
  for (auto& r : flow_rows(B, false, t)) rows.push_back(r);
  return !supports_intersect(rows, 1e-7);
}

std::vector<Vec3> compute_shifts(const std::vector<geometry::DirectionTriple>& triples,
                                 const FlowParams& params,
                                 const std::vector<double>& cert_times, long backtrack_limit) {
  if (params.profile != ProfileKind::bump)
    return std::vector<Vec3>(triples.size(), Vec3{0, 0, 0});

  {
    profiles::BaseBump base(params.support_width);
    auto pr1 = profiles::stretched_bump(base, params.r_inv);
    auto pr3 = profiles::stretched_bump(base, params.rbarbar_inv);
    const double total =
        double(triples.size()) * pr1->support_measure() * pr3->support_measure();
    if (total > 0.5)
      throw PlacementFailed("compute_shifts: support tubes occupy too much of the torus");
  }

  std::vector<Vec3> shifts;
  std::vector<BoxFlow> placed;
  long tried = 0;
  for (const auto& t : triples) {
    bool ok = false;
    const int L = 17;  // deterministic candidate lattice of phase offsets
    for (int c1 = 0; c1 < L && !ok; ++c1)
      for (int c2 = 0; c2 < L && !ok; ++c2)
        for (int c3 = 0; c3 < L && !ok; ++c3) {
          if (++tried > backtrack_limit)
            throw PlacementFailed("compute_shifts: candidate budget exhausted");
          const double th1 = (c1 + 0.37) / L;
          const double th2 = (c2 + 0.23) / L;
          const double th3 = (c3 + 0.61) / L;
          const double sg = double(params.sigma) * t.denom;
          Vec3 shift;
          for (int c = 0; c < 3; ++c)
            shift[c] = (th1 / sg) * t.k[c] + (th2 / sg) * t.kbar[c] + (th3 / sg) * t.kbarbar[c];
          BoxFlow cand(t, params, shift);
          bool clash = false;
          for (const auto& other : placed) {
            if (cert_times.empty()) {
              if (!supports_disjoint(cand, other)) clash = true;
            } else {
              for (double ct : cert_times)
                if (!supports_disjoint_at(cand, other, ct)) {
                  clash = true;
                  break;
                }
            }
            if (clash) break;
          }
          if (!clash) {
            shifts.push_back(shift);
            placed.push_back(std::move(cand));
            ok = true;
          }
        }
    if (!ok) throw PlacementFailed("compute_shifts: no disjoint placement found");
  }
  return shifts;
}

BoxFlowFamily build_family(const std::vector<geometry::DirectionTriple>& triples,
                           const FlowParams& params, const std::vector<double>& cert_times) {
  BoxFlowFamily fam;
  auto shifts = compute_shifts(triples, params, cert_times);
  for (std::size_t i = 0; i < triples.size(); ++i)
    fam.flows.emplace_back(triples[i], params, shifts[i]);
  return fam;
}

namespace {
struct PaperScales {
  int r_inv, rbar_inv, rbarbar_inv;
};
PaperScales paper_scales(long lambda) {
  const double l = double(lambda);
  return {int(std::max(1.0, std::round(std::pow(l, 14.0 / 16.0)))),
          int(std::max(1.0, std::round(std::pow(l, 14.0 / 16.0)))),
          int(std::max(1.0, std::round(std::pow(l, 5.0 / 16.0))))};
}

double fit_slope(const std::vector<long>& xs, const std::vector<double>& ys) {
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(double(xs[i]));
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}
}  // namespace

ScalingReport lp_norm_report(const std::vector<long>& lambdas, double p, double support_width) {
  if (lambdas.size() < 4) throw TooFewSamples("lp_norm_report: need at least 4 lambda values");
  profiles::BaseBump base(support_width);
  ScalingReport rep;
  rep.lambdas = lambdas;
  for (long l : lambdas) {
    const auto sc = paper_scales(l);
    auto p1 = profiles::stretched_bump(base, sc.r_inv);
    auto p2 = profiles::stretched_bump(base, sc.rbar_inv);
    auto p3 = profiles::stretched_bump(base, sc.rbarbar_inv);
    // the three phases are jointly equidistributed over orthogonal rational
    // frames, so norms of the product factor exactly
    rep.values.push_back(p1->lp_norm(p) * p2->lp_norm(p) * p3->lp_norm(p));
  }
  rep.fitted_exponent = fit_slope(rep.lambdas, rep.values);
  const double ip = p == std::numeric_limits<double>::infinity() ? 0.0 : 1.0 / p;
  rep.theory_exponent = (14.0 / 16.0) * (1.0 - 2.0 * ip) + (5.0 / 16.0) * (0.5 - ip);
  return rep;
}

ScalingReport support_measure_report(const std::vector<long>& lambdas, double support_width) {
  if (lambdas.size() < 4)
    throw TooFewSamples("support_measure_report: need at least 4 lambda values");
  profiles::BaseBump base(support_width);
  ScalingReport rep;
  rep.lambdas = lambdas;
  for (long l : lambdas) {
    const auto sc = paper_scales(l);
    auto p1 = profiles::stretched_bump(base, sc.r_inv);
    auto p2 = profiles::stretched_bump(base, sc.rbar_inv);
    auto p3 = profiles::stretched_bump(base, sc.rbarbar_inv);
    rep.values.push_back(p1->support_measure() * p2->support_measure() * p3->support_measure());
  }
  rep.fitted_exponent = fit_slope(rep.lambdas, rep.values);
  rep.theory_exponent = -33.0 / 16.0;
  return rep;
}

}  // namespace boxflow::flows
