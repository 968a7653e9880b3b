#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "boxflow/field.hpp"
#include "boxflow/flows.hpp"
#include "boxflow/geometry.hpp"
#include "boxflow/ops.hpp"
#include "boxflow/profiles.hpp"

using namespace boxflow;
namespace fl = boxflow::flows;
namespace geo = boxflow::geometry;
namespace pr = boxflow::profiles;

namespace {
constexpr double kPi = std::numbers::pi;

double quad_1d(const std::function<double(double)>& f, int n = 65536) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += f(double(i) / n);
  return s / n;
}
}  // namespace

TEST_CASE("base profile") {
  pr::BaseBump base(0.125);
  SUBCASE("second derivative has zero mean and the bump's support") {
    CHECK(std::abs(base.phi_mean()) < 1e-12);
    CHECK(base.Phi_dd(-0.01) == 0.0);
    CHECK(base.Phi_dd(0.126) == 0.0);
    CHECK(base.Phi(0.0625) > 0.0);
  }
  SUBCASE("closed-form second derivative matches finite differences") {
    const double h = 1e-5;
    double worst = 0.0;
    for (int i = 1; i < 40; ++i) {
      const double z = 0.125 * i / 40.0;
      const double fd = (base.Phi(z + h) - 2 * base.Phi(z) + base.Phi(z - h)) / (h * h);
      worst = std::max(worst, std::abs(fd - base.Phi_dd(z)));
    }
    CHECK(worst < 1e-8);
  }
  SUBCASE("third derivative consistent with second") {
    const double h = 1e-6;
    double worst = 0.0;
    for (int i = 1; i < 40; ++i) {
      const double z = 0.125 * i / 40.0;
      const double fd = (base.Phi_dd(z + h) - base.Phi_dd(z - h)) / (2 * h);
      worst = std::max(worst, std::abs(fd - base.Phi_ddd(z)) / std::max(1.0, std::abs(fd)));
    }
    CHECK(worst < 1e-3);
  }
}

TEST_CASE("stretched profiles") {
  pr::BaseBump base(0.125);
  SUBCASE("unit L2, zero mean, support scales like r") {
    for (int rinv : {1, 4, 8, 16}) {
      auto p = pr::stretched_bump(base, rinv);
      const double l2 = quad_1d([&](double y) { return p->value(y) * p->value(y); });
      const double mean = quad_1d([&](double y) { return p->value(y); });
      CHECK(std::abs(l2 - 1.0) < 1e-6);
      CHECK(std::abs(mean) < 1e-8);
      CHECK(p->support_measure() == doctest::Approx(0.125 / rinv));
    }
  }
  SUBCASE("square antiderivative: 1-periodic, bounded by 2, correct derivative") {
    auto p = pr::stretched_bump(base, 8);
    CHECK(std::abs(p->sq_antiderivative(0.0)) < 1e-12);
    CHECK(std::abs(p->sq_antiderivative(1.0)) < 1e-10);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
      const double y = i / 1000.0;
      worst = std::max(worst, std::abs(p->sq_antiderivative(y)));
    }
    CHECK(worst <= 2.0);
    // derivative of Q is value^2 - 1 (checked by finite differences)
    const double h = 1e-7;
    double dworst = 0.0;
    for (double y : {0.003, 0.011, 0.3, 0.7}) {
      const double fd = (p->sq_antiderivative(y + h) - p->sq_antiderivative(y - h)) / (2 * h);
      dworst = std::max(dworst, std::abs(fd - (p->value(y) * p->value(y) - 1.0)));
    }
    CHECK(dworst < 1e-5);
  }
  SUBCASE("closed-form Lp norms match quadrature") {
    auto p = pr::stretched_bump(base, 4);
    for (double q : {1.0, 2.0}) {
      const double quad =
          std::pow(quad_1d([&](double y) { return std::pow(std::abs(p->value(y)), q); }), 1.0 / q);
      CHECK(p->lp_norm(q) == doctest::Approx(quad).epsilon(1e-5));
    }
    CHECK(p->lp_norm(2.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("band-limited variant keeps mean/L2 and is spectrally finite") {
    auto p = pr::bandlimited_stretch(base, 2, 3);
    CHECK(p->max_mode() == 3);
    const double l2 = quad_1d([&](double y) { return p->value(y) * p->value(y); });
    CHECK(std::abs(l2 - 1.0) < 1e-10);
    const double mean = quad_1d([&](double y) { return p->value(y); });
    CHECK(std::abs(mean) < 1e-12);
    // Q' = value^2 - 1 analytically
    const double h = 1e-6;
    for (double y : {0.13, 0.57}) {
      const double fd = (p->sq_antiderivative(y + h) - p->sq_antiderivative(y - h)) / (2 * h);
      CHECK(std::abs(fd - (p->value(y) * p->value(y) - 1.0)) < 1e-6);
    }
  }
  SUBCASE("rejects non-integer stretching") {
    CHECK_THROWS_AS((void)pr::stretched_bump(base, 0), pr::NotInteger);
  }
}

TEST_CASE("box flow construction") {
  const auto& sets = geo::load_direction_sets();
  fl::FlowParams prm;
  prm.lambda = 4;
  prm.sigma = 1;
  prm.mu = 2.0;
  prm.r_inv = 4;
  prm.rbar_inv = 4;
  prm.rbarbar_inv = 2;

  SUBCASE("unit L2 norm of the product") {
    // bump backend: the product norm factorizes over the orthogonal phases,
    // each factor normalized on a fine 1-D grid
    fl::BoxFlow f(sets.b.triples[0], prm, {0, 0, 0});
    double prod = 1.0;
    for (const auto* p : {&f.prof1(), &f.prof2(), &f.prof3()}) {
      const double l2 = quad_1d([&](double y) { return p->value(y) * p->value(y); });
      prod *= std::sqrt(l2);
    }
    CHECK(prod == doctest::Approx(1.0).epsilon(1e-5));

    // band-limited backend on a resolving grid: exact spectral quadrature
    fl::FlowParams bl = prm;
    bl.profile = fl::ProfileKind::bandlimited;
    bl.profile_modes = 4;
    fl::BoxFlow fb(sets.b.triples[0], bl, {0, 0, 0});
    Grid g(32);
    auto fld = sample_spectral(g, 0, [&](double a, double b, double c, double* out) {
      out[0] = fb.product(a, b, c, 0.0);
    });
    CHECK(ops::norm_l2(fld) == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("time translation matches the 1-D phase factor") {
    fl::BoxFlow f(sets.b.triples[1], prm, {0.1, 0.2, 0.3});
    const double t = 0.37;
    // phase2(x, t) = phase2(x + mu t kbar, 0)
    const auto& kb = sets.b.triples[1].kbar;
    for (double x1 : {0.2, 0.8})
      for (double x2 : {0.1, 0.6}) {
        const double x3 = 0.45;
        const double a = f.phase2(x1, x2, x3, t);
        const double b =
            f.phase2(x1 + prm.mu * t * kb[0], x2 + prm.mu * t * kb[1], x3 + prm.mu * t * kb[2], 0.0);
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
      }
  }

  SUBCASE("psi potentials reproduce psi kbar and psi kbarbar through the curl") {
    // resolved configuration: lambda * N * |k|_inf < n/2
    Grid g(64);
    for (const auto& T : {sets.b.triples[0], sets.b.triples[3]}) {
      fl::FlowParams q = prm;
      q.lambda = (T.denom == 1) ? 8 : 2;
      fl::BoxFlow f(T, q, {0, 0, 0});
      auto psi_kbar = sample_spectral(g, 1, [&](double a, double b, double c, double* out) {
        const double p = f.psi(a, b, c);
        for (int i = 0; i < 3; ++i) out[i] = p * T.kbar[i];
      });
      auto F = sample_spectral(g, 1, [&](double a, double b, double c, double* out) {
        f.F_kbar(a, b, c, out);
      });
      auto lhs = (1.0 / double(q.lambda)) * ops::curl(F);
      CHECK(ops::norm_l2(lhs - psi_kbar) < 1e-12 * ops::norm_l2(psi_kbar));
      CHECK(ops::norm_l2(ops::div(psi_kbar)) < 1e-12 * ops::norm_l2(psi_kbar));

      auto psi_kbb = sample_spectral(g, 1, [&](double a, double b, double c, double* out) {
        const double p = f.psi(a, b, c);
        for (int i = 0; i < 3; ++i) out[i] = p * T.kbarbar[i];
      });
      auto F2 = sample_spectral(g, 1, [&](double a, double b, double c, double* out) {
        f.F_kbarbar(a, b, c, out);
      });
      auto lhs2 = (1.0 / double(q.lambda)) * ops::curl(F2);
      CHECK(ops::norm_l2(lhs2 - psi_kbb) < 1e-12 * ops::norm_l2(psi_kbb));
      // ||psi_k||_L2 = 1
      auto psis = sample_spectral(g, 0, [&](double a, double b, double c, double* out) {
        out[0] = f.psi(a, b, c);
      });
      CHECK(ops::norm_l2(psis) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  SUBCASE("transport identity of the traveling factor") {
    // d_t[phi_kbar^2] phi_k^2 phi_kbarbar^2 = mu kbar.grad(product^2) pointwise
    fl::BoxFlow f(sets.b.triples[0], prm, {0.05, 0.15, 0.25});
    const auto& T = sets.b.triples[0];
    const double t = 0.123;
    const double h = 1e-7;
    double worst = 0.0;
    for (double x1 : {0.11, 0.52})
      for (double x2 : {0.33, 0.77})
        for (double x3 : {0.21, 0.64}) {
          const double lhs = f.product_sq_dt(x1, x2, x3, t);
          const double plus =
              f.product_sq(x1 + h * T.kbar[0], x2 + h * T.kbar[1], x3 + h * T.kbar[2], t);
          const double minus =
              f.product_sq(x1 - h * T.kbar[0], x2 - h * T.kbar[1], x3 - h * T.kbar[2], t);
          const double rhs = prm.mu * (plus - minus) / (2 * h);
          worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
        }
    CHECK(worst < 1e-4);
  }

  SUBCASE("antiderivative of the traveling square is bounded by 2") {
    fl::BoxFlow f(sets.b.triples[2], prm, {0, 0, 0});
    double worst = 0.0;
    for (int i = 0; i < 2000; ++i)
      worst = std::max(worst, std::abs(f.traveling_sq_antiderivative(i / 2000.0, 0.3, 0.9, 0.02)));
    CHECK(worst <= 2.0);
  }
}

TEST_CASE("shift search certifies disjoint supports") {
  const auto& sets = geo::load_direction_sets();
  std::vector<geo::DirectionTriple> all;
  for (const auto& t : sets.b.triples) all.push_back(t);
  for (const auto& t : sets.v.triples) all.push_back(t);
  all.push_back(sets.s.triples[0]);

  fl::FlowParams prm;
  prm.sigma = 2;
  prm.r_inv = 16;
  prm.rbar_inv = 16;
  prm.rbarbar_inv = 4;
  prm.lambda = 16;

  const std::vector<double> cert_times = {0.0, 0.31};
  auto family = fl::build_family(all, prm, cert_times);
  REQUIRE(family.flows.size() == 12);

  // pointwise products at working resolution vanish for distinct directions
  // at every certified time
  const int n = 96;
  for (double t : cert_times) {
    std::vector<std::vector<double>> vals(family.flows.size());
    for (std::size_t f = 0; f < family.flows.size(); ++f) {
      vals[f].resize(std::size_t(n) * n * n);
      std::size_t idx = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            vals[f][idx++] =
                family.flows[f].product(double(i) / n, double(j) / n, double(k) / n, t);
    }
    double worst = 0.0;
    for (std::size_t a = 0; a < vals.size(); ++a)
      for (std::size_t b = a + 1; b < vals.size(); ++b)
        for (std::size_t i = 0; i < vals[a].size(); ++i)
          worst = std::max(worst, std::abs(vals[a][i] * vals[b][i]));
    CHECK(worst == 0.0);
  }

  SUBCASE("single direction accepts the trivial shift") {
    auto shifts = fl::compute_shifts({sets.b.triples[0]}, prm);
    CHECK(shifts.size() == 1);
  }

  SUBCASE("oversized supports fail placement") {
    fl::FlowParams wide = prm;
    wide.support_width = 0.9;
    wide.r_inv = 1;
    wide.rbar_inv = 1;
    wide.rbarbar_inv = 1;
    CHECK_THROWS_AS((void)fl::compute_shifts(all, wide), fl::PlacementFailed);
  }
}

TEST_CASE("scaling reports reproduce the paper exponents") {
  std::vector<long> lambdas = {256, 512, 1024, 2048, 4096};

  auto sup = fl::support_measure_report(lambdas);
  CHECK(std::abs(sup.fitted_exponent - sup.theory_exponent) < 0.15);
  CHECK(sup.theory_exponent == doctest::Approx(-33.0 / 16.0));

  auto l2 = fl::lp_norm_report(lambdas, 2.0);
  CHECK(std::abs(l2.fitted_exponent) < 0.05);
  CHECK(l2.theory_exponent == doctest::Approx(0.0));

  auto l1 = fl::lp_norm_report(lambdas, 1.0);
  CHECK(l1.theory_exponent == doctest::Approx(-1.03125));
  CHECK(std::abs(l1.fitted_exponent - l1.theory_exponent) < 0.15);

  auto linf = fl::lp_norm_report(lambdas, std::numeric_limits<double>::infinity());
  CHECK(linf.theory_exponent == doctest::Approx(1.03125));
  CHECK(std::abs(linf.fitted_exponent - linf.theory_exponent) < 0.15);

  CHECK_THROWS_AS((void)fl::lp_norm_report({16, 32}, 1.0), fl::TooFewSamples);
}
