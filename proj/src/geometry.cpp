#include "boxflow/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <random>

#include "boxflow/par.hpp"

namespace boxflow::geometry {

namespace {

Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

// axial vector of a skew matrix: M = [[0,-a3,a2],[a3,0,-a1],[-a2,a1,0]]
Eigen::Vector3d axial(const Mat3& M) { return {-M[1][2], M[0][2], -M[0][1]}; }

struct GeometryData {
  DirectionSets sets;
  // skew side: affine decomposition a(M) = a0 + L axial(M)
  Eigen::Matrix<double, 3, 5> A;  // columns = axial(S_k)
  Eigen::Matrix<double, 5, 3> L;  // minimum-norm right inverse of A
  std::array<double, 5> a0;
  // symmetric side: 6x6 basis matrix in (11,22,33,12,13,23) coordinates
  Eigen::Matrix<double, 6, 6> B, Binv;
  double cond_B;
};

Eigen::Matrix<double, 6, 1> sym_vec(const Mat3& R) {
  Eigen::Matrix<double, 6, 1> v;
  v << R[0][0], R[1][1], R[2][2], R[0][1], R[0][2], R[1][2];
  return v;
}

// Minimum-norm point of {A c = 0, c_i >= lb}.  The feasible set lives on the
// 2-dim nullspace of A, so enumerating active sets of the five bound
// constraints solves the QP exactly.
std::array<double, 5> solve_base_coefficients(const Eigen::Matrix<double, 3, 5>& A, double lb) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  Eigen::MatrixXd V = svd.matrixV();
  Eigen::Matrix<double, 5, 2> N = V.rightCols(2);

  const double tol = 1e-12;
  double best_norm = std::numeric_limits<double>::infinity();
  Eigen::Vector2d best_y;
  bool found = false;

  auto consider = [&](const Eigen::Vector2d& y) {
    Eigen::Matrix<double, 5, 1> c = N * y;
    for (int i = 0; i < 5; ++i)
      if (c[i] < lb - tol) return;
    const double nn = y.squaredNorm();
    if (nn < best_norm) {
      best_norm = nn;
      best_y = y;
      found = true;
    }
  };

  for (int i = 0; i < 5; ++i) {
    Eigen::Vector2d ni = N.row(i).transpose();
    if (ni.squaredNorm() < tol) continue;
    consider(ni * (lb / ni.squaredNorm()));
  }
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      Eigen::Matrix2d M;
      M.row(0) = N.row(i);
      M.row(1) = N.row(j);
      if (std::abs(M.determinant()) < tol) continue;
      Eigen::Vector2d rhs(lb, lb);
      consider(M.colPivHouseholderQr().solve(rhs));
    }
  if (!found) throw std::runtime_error("skew base coefficients: no positive solution");
  Eigen::Matrix<double, 5, 1> c = N * best_y;
  std::array<double, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = c[i];
  return out;
}

GeometryData build() {
  GeometryData d;
  const Vec3 e1{1, 0, 0}, e2{0, 1, 0}, e3{0, 0, 1};

  // Companions are re-orthonormalized inside the coordinate plane of k.  The
  // frame handedness of the last Lambda_b triple is flipped relative to
  // kbarbar = k x kbar: with that choice the five skew generators admit a
  // strictly positive representation of zero, which the base coefficients
  // below certify at load time.
  DirectionSet b;
  b.label = 'b';
  b.triples = {
      {e1, e2, e3, 1},
      {e2, e3, e1, 1},
      {e3, e1, e2, 1},
      {{0, -0.8, -0.6}, {0, -0.6, 0.8}, {-1, 0, 0}, 5},
      {{0.6, 0.8, 0}, {0.8, -0.6, 0}, {0, 0, 1}, 5},
  };

  DirectionSet v;
  v.label = 'v';
  const double c5 = 5.0 / 13.0, c12 = 12.0 / 13.0;
  v.triples = {
      {{c12, c5, 0}, {-c5, c12, 0}, e3, 13},
      {{c12, -c5, 0}, {c5, c12, 0}, e3, 13},
      {{c5, 0, c12}, {-c12, 0, c5}, scale(e2, -1), 13},
      {{c5, 0, -c12}, {c12, 0, c5}, scale(e2, -1), 13},
      {{0, c12, c5}, {0, -c5, c12}, e1, 13},
      {{0, c12, -c5}, {0, c5, c12}, e1, 13},
  };

  DirectionSet s;
  s.label = 's';
  const double c9 = 9.0 / 41.0, c40 = 40.0 / 41.0;
  s.triples = {{{c9, c40, 0}, {c40, -c9, 0}, e3, 41}};

  long n_lambda = 1;
  for (const auto* set : {&b, &v, &s})
    for (const auto& t : set->triples) n_lambda = std::lcm(n_lambda, long(t.denom));

  d.sets.b = b;
  d.sets.v = v;
  d.sets.s = s;
  d.sets.n_lambda = n_lambda;

  for (int i = 0; i < 5; ++i) d.A.col(i) = axial(skew_generator(b.triples[i]));
  d.L = d.A.transpose() * (d.A * d.A.transpose()).inverse();
  d.a0 = solve_base_coefficients(d.A, 0.1);

  // certified eps_b: every coefficient stays >= min(a0)/2 on the ball
  double a0min = d.a0[0];
  for (double x : d.a0) a0min = std::min(a0min, x);
  double eps_b = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 5; ++i) {
    const double margin = d.a0[i] - 0.5 * a0min;
    const double rate = d.L.row(i).norm();  // |axial(M)| = ||M||_F / sqrt(2)
    if (rate > 0) eps_b = std::min(eps_b, std::sqrt(2.0) * margin / rate);
  }
  d.sets.b.epsilon = eps_b;

  for (int i = 0; i < 6; ++i) d.B.col(i) = sym_vec(sym_generator(v.triples[i]));
  d.Binv = d.B.inverse();
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(d.B);
  d.cond_B = svd.singularValues()(0) / svd.singularValues()(5);

  // certified eps_v: |(Binv vec(S))_i| <= ||w_i|| ||S||_F with the shear
  // entries of row i halved in weight (vec carries each shear once)
  Eigen::Matrix<double, 6, 1> aId = d.Binv * sym_vec({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
  double eps_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 6; ++i) {
    Eigen::Matrix<double, 6, 1> r = d.Binv.row(i).transpose();
    for (int j = 3; j < 6; ++j) r[j] /= std::sqrt(2.0);
    if (r.norm() > 0) eps_v = std::min(eps_v, aId[i] / r.norm());
  }
  d.sets.v.epsilon = eps_v;
  d.sets.s.epsilon = 0.0;  // no decomposition attached to Lambda_s
  return d;
}

const GeometryData& data() {
  static GeometryData d = build();
  return d;
}

}  // namespace

Mat3 skew_generator(const DirectionTriple& t) {
  Mat3 M{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      M[i][j] = t.kbar[i] * t.kbarbar[j] - t.kbarbar[i] * t.kbar[j];
  return M;
}

Mat3 sym_generator(const DirectionTriple& t) {
  Mat3 M{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M[i][j] = t.kbar[i] * t.kbar[j];
  return M;
}

const DirectionSets& load_direction_sets() { return data().sets; }

const std::array<double, 5>& skew_base_coefficients() { return data().a0; }

std::array<double, 5> decompose_skew(const Mat3& M) {
  const auto& d = data();
  double fro2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fro2 += M[i][j] * M[i][j];
  if (std::sqrt(fro2) > d.sets.b.epsilon)
    throw OutsideBall("decompose_skew: ||M||_F exceeds eps_b");
  Eigen::Matrix<double, 5, 1> c =
      Eigen::Map<const Eigen::Matrix<double, 5, 1>>(d.a0.data()) + d.L * axial(M);
  std::array<double, 5> out;
  for (int i = 0; i < 5; ++i) out[i] = c[i];
  return out;
}

Mat3 recompose_skew(const std::array<double, 5>& a) {
  const auto& b = data().sets.b;
  Mat3 M{};
  for (int k = 0; k < 5; ++k) {
    const Mat3 S = skew_generator(b.triples[k]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M[i][j] += a[k] * S[i][j];
  }
  return M;
}

std::array<double, 6> decompose_sym(const Mat3& R) {
  const auto& d = data();
  double fro2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double dv = R[i][j] - (i == j ? 1.0 : 0.0);
      fro2 += dv * dv;
    }
  if (std::sqrt(fro2) > d.sets.v.epsilon)
    throw OutsideBall("decompose_sym: ||R - Id||_F exceeds eps_v");
  Eigen::Matrix<double, 6, 1> c = d.Binv * sym_vec(R);
  std::array<double, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = c[i];
  return out;
}

Mat3 recompose_sym(const std::array<double, 6>& a) {
  const auto& v = data().sets.v;
  Mat3 M{};
  for (int k = 0; k < 6; ++k) {
    const Mat3 S = sym_generator(v.triples[k]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M[i][j] += a[k] * S[i][j];
  }
  return M;
}

double sym_basis_condition_number() { return data().cond_B; }

double chi_regularizer(double z) {
  if (z < 0.0) throw NegativeInput("chi_regularizer: z must be >= 0");
  if (z <= 2.0) return 1.0;
  if (z >= 4.0) return z;
  const double s = (z - 2.0) / 2.0;
  return 1.0 + s * s * s * (22.0 + s * (-31.0 + 12.0 * s));
}

double chi_regularizer_derivative(double z) {
  if (z < 0.0) throw NegativeInput("chi_regularizer_derivative: z must be >= 0");
  if (z <= 2.0) return 0.0;
  if (z >= 4.0) return 1.0;
  const double s = (z - 2.0) / 2.0;
  return 0.5 * s * s * (66.0 + s * (-124.0 + 60.0 * s));
}

double angle_bracket_frobenius(const Mat3& A) {
  double fro2 = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) fro2 += A[i][j] * A[i][j];
  return std::sqrt(1.0 + fro2);
}

namespace {
Mat3 mat_at(const RealField& f, std::size_t idx) {
  Mat3 M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M[i][j] = f.comp(i, j)[idx];
  return M;
}
}  // namespace

std::vector<RealField> coefficient_fields_skew(const RealField& M, const RealField& rho,
                                               const RealField& eta) {
  if (M.rank() != 2 || rho.rank() != 0 || eta.rank() != 0)
    throw std::invalid_argument("coefficient_fields_skew: rank mismatch");
  const auto& d = data();
  std::vector<RealField> out(5, RealField(M.base_grid(), M.sample_n(), 0));
  std::vector<signed char> bad(M.size(), 0);
  par::for_each(M.size(), [&](std::size_t idx) {
    const double e = eta.comp(0)[idx];
    if (e == 0.0) return;
    const double r = rho.comp(0)[idx];
    if (!(r > 0.0)) {
      bad[idx] = 1;
      return;
    }
    Mat3 Ms = mat_at(M, idx);
    double fro2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Ms[i][j] /= r;
        fro2 += Ms[i][j] * Ms[i][j];
      }
    if (std::sqrt(fro2) > d.sets.b.epsilon) {
      bad[idx] = 2;
      return;
    }
    Eigen::Matrix<double, 5, 1> c =
        Eigen::Map<const Eigen::Matrix<double, 5, 1>>(d.a0.data()) + d.L * axial(Ms);
    const double sr = std::sqrt(r);
    for (int k = 0; k < 5; ++k) out[k].comp(0)[idx] = e * sr * std::sqrt(c[k]);
  });
  for (std::size_t i = 0; i < M.size(); ++i) {
    if (bad[i] == 1) throw GapVanishes("coefficient_fields_skew: rho <= 0 on support of eta");
    if (bad[i] == 2) throw OutsideBall("coefficient_fields_skew: M/rho outside eps_b ball");
  }
  return out;
}

std::vector<RealField> coefficient_fields_sym(const RealField& R, const RealField& rho,
                                              const RealField& eta) {
  if (R.rank() != 2 || rho.rank() != 0 || eta.rank() != 0)
    throw std::invalid_argument("coefficient_fields_sym: rank mismatch");
  const auto& d = data();
  std::vector<RealField> out(6, RealField(R.base_grid(), R.sample_n(), 0));
  std::vector<signed char> bad(R.size(), 0);
  par::for_each(R.size(), [&](std::size_t idx) {
    const double e = eta.comp(0)[idx];
    if (e == 0.0) return;
    const double r = rho.comp(0)[idx];
    if (!(r > 0.0)) {
      bad[idx] = 1;
      return;
    }
    Mat3 arg;
    double fro2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        arg[i][j] = (i == j ? 1.0 : 0.0) - R.comp(i, j)[idx] / r;
        const double dv = arg[i][j] - (i == j ? 1.0 : 0.0);
        fro2 += dv * dv;
      }
    if (std::sqrt(fro2) > d.sets.v.epsilon) {
      bad[idx] = 2;
      return;
    }
    Eigen::Matrix<double, 6, 1> c = d.Binv * sym_vec(arg);
    const double sr = std::sqrt(r);
    for (int k = 0; k < 6; ++k) out[k].comp(0)[idx] = e * sr * std::sqrt(std::max(c[k], 0.0));
  });
  for (std::size_t i = 0; i < R.size(); ++i) {
    if (bad[i] == 1) throw GapVanishes("coefficient_fields_sym: rho <= 0 on support of eta");
    if (bad[i] == 2) throw OutsideBall("coefficient_fields_sym: R/rho outside eps_v ball");
  }
  return out;
}

double certify_eps_v_by_rays(int nrays) {
  const auto& d = data();
  Eigen::Matrix<double, 6, 1> aId = d.Binv * sym_vec({{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
  std::mt19937_64 rng(20240501);
  std::normal_distribution<double> dist(0.0, 1.0);
  double eps = std::numeric_limits<double>::infinity();
  for (int r = 0; r < nrays; ++r) {
    Mat3 S{};
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        const double v = dist(rng);
        S[i][j] = v;
        S[j][i] = v;
      }
    double fro2 = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) fro2 += S[i][j] * S[i][j];
    const double fro = std::sqrt(fro2);
    Eigen::Matrix<double, 6, 1> rate = d.Binv * sym_vec(S) / fro;
    for (int i = 0; i < 6; ++i)
      if (rate[i] < 0.0) eps = std::min(eps, -aId[i] / rate[i]);
  }
  return eps;
}

}  // namespace boxflow::geometry
