#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "boxflow/field.hpp"
#include "boxflow/ops.hpp"

using namespace boxflow;
namespace o = boxflow::ops;

namespace {

constexpr double kPi = std::numbers::pi;

// random band-limited real scalar field, modes |m|_inf <= mmax
SpectralField random_scalar(const Grid& g, int mmax, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  SpectralField f(g, 0);
  for (int a = -mmax; a <= mmax; ++a)
    for (int b = -mmax; b <= mmax; ++b)
      for (int c = -mmax; c <= mmax; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        // fill each conjugate pair once
        if (a < 0 || (a == 0 && (b < 0 || (b == 0 && c < 0)))) continue;
        const Complex z{dist(rng), dist(rng)};
        const std::size_t ip = g.flat(g.index_of_mode(a), g.index_of_mode(b), g.index_of_mode(c));
        const std::size_t in = g.flat(g.index_of_mode(-a), g.index_of_mode(-b), g.index_of_mode(-c));
        f.comp(0)[ip] = z;
        f.comp(0)[in] = std::conj(z);
      }
  return f;
}

SpectralField random_vector(const Grid& g, int mmax, unsigned seed) {
  SpectralField f(g, 1);
  for (int c = 0; c < 3; ++c) f.comp(c) = random_scalar(g, mmax, seed + 97 * c).comp(0);
  return f;
}

double rel(double err, double scale) { return err / (scale > 0 ? scale : 1.0); }

}  // namespace

TEST_CASE("round trip real->spectral->real") {
  Grid g(32);
  SpectralField f = random_scalar(g, 9, 1);
  RealField r = to_real(f);
  SpectralField back = to_spectral(r);
  double err = o::norm_l2(back - f);
  CHECK(rel(err, o::norm_l2(f)) < 1e-13);
  CHECK(imag_residue(f) < 1e-13 * o::norm_l2(f));
}

TEST_CASE("derivative of single mode") {
  Grid g(16);
  auto f = sample_spectral(g, 0, [](double x1, double, double, double* v) {
    v[0] = std::sin(2 * kPi * x1);
  });
  auto d = o::derivative(f, 1);
  auto expect = sample_spectral(g, 0, [](double x1, double, double, double* v) {
    v[0] = 2 * kPi * std::cos(2 * kPi * x1);
  });
  CHECK(o::norm_l2(d - expect) < 1e-12 * o::norm_l2(expect));

  SpectralField c(g, 0);
  c.comp(0)[0] = Complex{3.5, 0.0};
  CHECK(o::norm_l2(o::derivative(c, 2)) == doctest::Approx(0.0));
}

TEST_CASE("product rule for dealiased products") {
  Grid g(32);
  // band-limit so the quadratic product stays below the Nyquist plane
  SpectralField f = random_scalar(g, 7, 2);
  SpectralField h = random_scalar(g, 7, 3);
  // d1(f h) = f d1h + h d1f ; the product is quadratic so the padded route
  // is alias-free and the rule holds to roundoff
  SpectralField lhs = o::derivative(o::mul(f, h), 1);
  SpectralField rhs = o::mul(f, o::derivative(h, 1)) + o::mul(h, o::derivative(f, 1));
  CHECK(rel(o::norm_l2(lhs - rhs), o::norm_l2(lhs)) < 1e-10);
}

TEST_CASE("remove_mean") {
  Grid g(16);
  auto f = sample_spectral(g, 0, [](double, double x2, double, double* v) {
    v[0] = 1.0 + std::sin(2 * kPi * x2);
  });
  auto r = o::remove_mean(f);
  CHECK(std::abs(o::mean(r)) <= 1e-14);
  auto expect = sample_spectral(g, 0, [](double, double x2, double, double* v) {
    v[0] = std::sin(2 * kPi * x2);
  });
  CHECK(o::norm_l2(r - expect) < 1e-13);
  // idempotence
  CHECK(o::norm_l2(o::remove_mean(r) - r) == doctest::Approx(0.0));
}

TEST_CASE("leray projection") {
  Grid g(32);
  SUBCASE("gradient fields are annihilated") {
    auto f = sample_spectral(g, 0, [](double x1, double, double, double* v) {
      v[0] = std::sin(2 * kPi * x1);
    });
    auto gr = o::grad(f);
    CHECK(o::norm_l2(o::leray_project(gr)) < 1e-13 * o::norm_l2(gr));
  }
  SUBCASE("curl fields pass through") {
    auto w = sample_spectral(g, 1, [](double x1, double, double, double* v) {
      v[0] = 0.0; v[1] = 0.0; v[2] = std::sin(2 * kPi * x1);
    });
    auto c = o::curl(w);
    CHECK(o::norm_l2(o::leray_project(c) - c) < 1e-13 * o::norm_l2(c));
  }
  SUBCASE("projects onto divergence-free fields, idempotent, orthogonal") {
    SpectralField v = random_vector(g, 9, 5);
    SpectralField pv = o::leray_project(v);
    CHECK(o::norm_l2(o::div(pv)) < 1e-12 * o::norm_l2(v));
    CHECK(o::norm_l2(o::leray_project(pv) - pv) < 1e-13 * o::norm_l2(v));
    const double cross = o::inner(pv, v - pv);
    CHECK(std::abs(cross) < 1e-12 * o::norm_l2(v) * o::norm_l2(v));
  }
}

TEST_CASE("inverse laplacian") {
  Grid g(16);
  auto f = sample_spectral(g, 0, [](double x1, double, double, double* v) {
    v[0] = std::sin(2 * kPi * x1);
  });
  auto il = o::inverse_laplacian(f);
  auto expect = sample_spectral(g, 0, [](double x1, double, double, double* v) {
    v[0] = -std::sin(2 * kPi * x1) / (4 * kPi * kPi);
  });
  CHECK(o::norm_l2(il - expect) < 1e-13 * o::norm_l2(expect));

  SpectralField z(g, 0);
  CHECK(o::norm_l2(o::inverse_laplacian(z)) == doctest::Approx(0.0));

  SpectralField r = random_scalar(g, 5, 7);
  CHECK(o::norm_l2(o::laplacian(o::inverse_laplacian(r)) - r) < 1e-12 * o::norm_l2(r));

  SpectralField bad(g, 0);
  bad.comp(0)[0] = Complex{1.0, 0.0};
  CHECK_THROWS_AS((void)o::inverse_laplacian(bad), o::NonZeroMean);
}

TEST_CASE("heat semigroup") {
  Grid g(16);
  auto f = sample_spectral(g, 0, [](double x1, double, double, double* v) {
    v[0] = std::sin(2 * kPi * x1);
  });
  const double t = 0.01;
  auto ht = o::heat_semigroup(f, t);
  auto expect = std::exp(-4 * kPi * kPi * t) * f;
  CHECK(o::norm_l2(ht - expect) < 1e-13 * o::norm_l2(f));
  CHECK(o::norm_l2(o::heat_semigroup(f, 0.0) - f) == doctest::Approx(0.0));

  SpectralField r = random_scalar(g, 6, 11);
  auto a = o::heat_semigroup(o::heat_semigroup(r, 0.003), 0.004);
  auto b = o::heat_semigroup(r, 0.007);
  CHECK(o::norm_l2(a - b) < 1e-13 * o::norm_l2(r));
  CHECK_THROWS_AS((void)o::heat_semigroup(r, -1.0), o::NegativeTime);
}

TEST_CASE("derivative commutes with heat semigroup") {
  Grid g(32);
  SpectralField r = random_scalar(g, 8, 13);
  auto a = o::derivative(o::heat_semigroup(r, 0.002), 2);
  auto b = o::heat_semigroup(o::derivative(r, 2), 0.002);
  CHECK(o::norm_l2(a - b) < 1e-12 * o::norm_l2(a));
}

TEST_CASE("mollifier") {
  Grid g(32);
  SUBCASE("constants unchanged") {
    SpectralField c(g, 0);
    c.comp(0)[0] = Complex{2.0, 0.0};
    auto m = o::mollify(c, 0.1);
    CHECK(o::norm_l2(m - c) < 1e-14);
  }
  SUBCASE("mean preserved") {
    SpectralField r = random_scalar(g, 8, 17);
    r.comp(0)[0] = Complex{0.7, 0.0};
    auto m = o::mollify(r, 0.07);
    CHECK(std::abs(o::mean(m) - o::mean(r)) <= 1e-14);
  }
  SUBCASE("commutes with derivative") {
    SpectralField r = random_scalar(g, 8, 19);
    auto a = o::derivative(o::mollify(r, 0.05), 3);
    auto b = o::mollify(o::derivative(r, 3), 0.05);
    CHECK(o::norm_l2(a - b) < 1e-13 * o::norm_l2(a));
  }
  SUBCASE("first-order accuracy in eps, fitted constant reported") {
    SpectralField r = random_scalar(g, 6, 23);
    const double h1 = o::norm_hs(r, {1.0, true});
    double worst_c = 0.0;
    for (double eps : {0.02, 0.04, 0.08}) {
      const double err = o::norm_l2(o::mollify(r, eps) - r);
      worst_c = std::max(worst_c, err / (eps * h1));
    }
    MESSAGE("mollifier L2 error constant C = ", worst_c);
    CHECK(worst_c < 10.0);
  }
  SUBCASE("rejects bad epsilon") {
    SpectralField r = random_scalar(g, 4, 29);
    CHECK_THROWS_AS((void)o::mollify(r, 0.0), o::BadEpsilon);
    CHECK_THROWS_AS((void)o::mollify(r, 0.5), o::BadEpsilon);
  }
}

TEST_CASE("norms") {
  Grid g(32);
  auto f = sample_spectral(g, 0, [](double x1, double, double, double* v) {
    v[0] = std::sin(2 * kPi * x1);
  });
  CHECK(o::norm_lp(f, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(o::norm_l2(f) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(o::norm_hs(f, {1.0, true}) == doctest::Approx(2 * kPi / std::sqrt(2.0)).epsilon(1e-12));

  SpectralField r = random_scalar(g, 9, 31);
  CHECK(rel(std::abs(o::norm_lp(r, 2.0) - o::norm_l2(r)), o::norm_l2(r)) < 1e-13);

  // W^{N,1} agrees with the L1 sum of spectral derivatives assembled by hand
  SpectralField s = random_scalar(g, 5, 37);
  double byhand = o::norm_lp(s, 1.0);
  for (int a = 1; a <= 3; ++a) byhand += o::norm_lp(o::derivative(s, a), 1.0);
  CHECK(o::norm_wn1(s, 1) == doctest::Approx(byhand).epsilon(1e-12));

  CHECK_THROWS_AS((void)o::norm_lp(s, 3.0), o::UnsupportedSpec);
}

TEST_CASE("operations preserve realness") {
  Grid g(16);
  SpectralField r = random_scalar(g, 5, 41);
  const double scale = o::norm_l2(r);
  CHECK(imag_residue(o::derivative(r, 1)) < 1e-12 * scale);
  CHECK(imag_residue(o::heat_semigroup(r, 0.01)) < 1e-13 * scale);
  CHECK(imag_residue(o::mollify(r, 0.1)) < 1e-13 * scale);
  SpectralField v = random_vector(g, 5, 43);
  CHECK(imag_residue(o::leray_project(v)) < 1e-12 * o::norm_l2(v));
}
