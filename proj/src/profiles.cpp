#include "boxflow/profiles.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace boxflow::profiles {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double frac(double y) {
  double f = y - std::floor(y);
  if (f >= 1.0) f = 0.0;
  return f;
}

template <class G>
double simpson(const G& g, double w) {
  const int N = 16384;
  const double h = w / N;
  double s = g(0.0) + g(w);
  for (int i = 1; i < N; ++i) s += g(i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}
}  // namespace

BaseBump::BaseBump(double width) : w_(width) {
  if (!(width > 0.0 && width <= 1.0)) throw std::invalid_argument("BaseBump: width in (0,1]");
  mean_ = simpson([this](double z) { return Phi_dd(z); }, w_);
  l2_ = std::sqrt(simpson([this](double z) { return Phi_dd(z) * Phi_dd(z); }, w_));
}

double BaseBump::Phi(double z) const {
  if (z <= 0.0 || z >= w_) return 0.0;
  const double g = 1.0 / (z * (w_ - z));
  if (g > 700.0) return 0.0;
  return std::exp(-g);
}

double BaseBump::Phi_d(double z) const {
  if (z <= 0.0 || z >= w_) return 0.0;
  const double h = z * (w_ - z);
  const double g = 1.0 / h;
  if (g > 690.0) return 0.0;
  const double gp = -(w_ - 2.0 * z) / (h * h);
  return -gp * std::exp(-g);
}

double BaseBump::Phi_dd(double z) const {
  if (z <= 0.0 || z >= w_) return 0.0;
  const double h = z * (w_ - z);
  const double g = 1.0 / h;
  if (g > 680.0) return 0.0;
  const double hp = w_ - 2.0 * z;
  const double gp = -hp / (h * h);
  const double gpp = 2.0 / (h * h) + 2.0 * hp * hp / (h * h * h);
  return (gp * gp - gpp) * std::exp(-g);
}

double BaseBump::Phi_ddd(double z) const {
  if (z <= 0.0 || z >= w_) return 0.0;
  const double h = z * (w_ - z);
  const double g = 1.0 / h;
  if (g > 670.0) return 0.0;
  const double hp = w_ - 2.0 * z;
  const double h2 = h * h, h3 = h2 * h, h4 = h2 * h2;
  const double gp = -hp / h2;
  const double gpp = 2.0 / h2 + 2.0 * hp * hp / h3;
  const double gppp = -12.0 * hp / h3 - 6.0 * hp * hp * hp / h4;
  return (-gp * gp * gp + 3.0 * gp * gpp - gppp) * std::exp(-g);
}

double BaseBump::phi_lp(double p) const {
  if (p == std::numeric_limits<double>::infinity()) {
    double m = 0.0;
    const int N = 16384;
    for (int i = 0; i <= N; ++i) m = std::max(m, std::abs(Phi_dd(i * w_ / N)));
    return m;
  }
  return std::pow(simpson([this, p](double z) { return std::pow(std::abs(Phi_dd(z)), p); }, w_),
                  1.0 / p);
}

namespace {

class StretchedBump final : public Profile {
 public:
  StretchedBump(const BaseBump& base, int r_inv) : base_(base) {
    if (r_inv < 1) throw NotInteger("stretched_bump: r^-1 must be a positive integer");
    r_inv_ = r_inv;
    r_ = 1.0 / r_inv;
    norm_ = std::sqrt(r_) * base_.phi_l2();
    build_sq_table();
  }

  double value(double y) const override {
    const double u = frac(y);
    if (u >= r_ * base_.width()) return 0.0;
    return base_.Phi_dd(u / r_) / norm_;
  }

  double derivative(double y) const override {
    const double u = frac(y);
    if (u >= r_ * base_.width()) return 0.0;
    return base_.Phi_ddd(u / r_) / (r_ * norm_);
  }

  double sq_antiderivative(double y) const override { return cum(frac(y)) - frac(y); }

  double support_measure() const override { return r_ * base_.width(); }
  bool compact_support() const override { return true; }
  int max_mode() const override { return 0; }

  double lp_norm(double p) const override {
    // ||phi_r||_p = r^{1/p - 1/2} ||phi||_p / ||phi||_2
    if (p == std::numeric_limits<double>::infinity())
      return base_.phi_lp(p) / (std::sqrt(r_) * base_.phi_l2());
    return std::pow(r_, 1.0 / p - 0.5) * base_.phi_lp(p) / base_.phi_l2();
  }

 private:
  void build_sq_table() {
    // cumulative of value^2 over the bump; cubic Hermite with exact node
    // derivatives keeps the interpolation error near roundoff
    const int N = 65536;
    const double hi = r_ * base_.width();
    tab_dx_ = hi / N;
    tab_c_.resize(N + 1);
    tab_d_.resize(N + 1);
    double acc = 0.0;
    double prev_f = sq(0.0);
    tab_c_[0] = 0.0;
    tab_d_[0] = prev_f;
    for (int i = 1; i <= N; ++i) {
      const double xm = (i - 0.5) * tab_dx_;
      const double xc = i * tab_dx_;
      const double fm = sq(xm), fc = sq(xc);
      acc += tab_dx_ * (prev_f + 4.0 * fm + fc) / 6.0;
      tab_c_[i] = acc;
      tab_d_[i] = fc;
      prev_f = fc;
    }
    sq_scale_ = 1.0 / acc;  // full-period mass of value^2 is exactly 1
  }

  double sq(double u) const {
    const double v = base_.Phi_dd(u / r_) / norm_;
    return v * v;
  }

  double cum(double u) const {
    const double hi = r_ * base_.width();
    if (u <= 0.0) return 0.0;
    if (u >= hi) return 1.0;
    const double s = u / tab_dx_;
    const int i = std::min<int>(static_cast<int>(s), static_cast<int>(tab_c_.size()) - 2);
    const double t = s - i;
    const double c0 = tab_c_[i], c1 = tab_c_[i + 1];
    const double d0 = tab_d_[i] * tab_dx_, d1 = tab_d_[i + 1] * tab_dx_;
    const double t2 = t * t, t3 = t2 * t;
    const double val = (2 * t3 - 3 * t2 + 1) * c0 + (t3 - 2 * t2 + t) * d0 +
                       (-2 * t3 + 3 * t2) * c1 + (t3 - t2) * d1;
    return val * sq_scale_;
  }

  const BaseBump base_;
  double r_, norm_, sq_scale_ = 1.0;
  double tab_dx_ = 1.0;
  std::vector<double> tab_c_, tab_d_;
};

class TrigProfile final : public Profile {
 public:
  TrigProfile(const BaseBump& base, int r_inv, int modes) {
    if (r_inv < 1) throw NotInteger("bandlimited_stretch: r^-1 must be a positive integer");
    if (modes < 1) throw std::invalid_argument("bandlimited_stretch: modes >= 1");
    r_inv_ = r_inv;
    StretchedBump full(base, r_inv);
    const int M = modes;
    a_.assign(M + 1, 0.0);
    b_.assign(M + 1, 0.0);
    const int N = 65536;
    const double hi = full.support_measure();
    const double h = hi / N;
    for (int j = 1; j <= M; ++j) {
      double sim_c = 0.0, sim_s = 0.0;
      for (int i = 0; i <= N; ++i) {
        const double y = i * h;
        const double wgt = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const double v = full.value(y);
        sim_c += wgt * v * std::cos(kTwoPi * j * y);
        sim_s += wgt * v * std::sin(kTwoPi * j * y);
      }
      a_[j] = 2.0 * sim_c * h / 3.0;
      b_[j] = 2.0 * sim_s * h / 3.0;
    }
    double l2sq = 0.0;
    for (int j = 1; j <= M; ++j) l2sq += 0.5 * (a_[j] * a_[j] + b_[j] * b_[j]);
    const double scale = 1.0 / std::sqrt(l2sq);
    for (int j = 1; j <= M; ++j) {
      a_[j] *= scale;
      b_[j] *= scale;
    }
    build_square_series();
  }

  double value(double y) const override {
    double s = 0.0;
    for (std::size_t j = 1; j < a_.size(); ++j) {
      const double ph = kTwoPi * double(j) * y;
      s += a_[j] * std::cos(ph) + b_[j] * std::sin(ph);
    }
    return s;
  }

  double derivative(double y) const override {
    double s = 0.0;
    for (std::size_t j = 1; j < a_.size(); ++j) {
      const double ph = kTwoPi * double(j) * y;
      s += kTwoPi * double(j) * (b_[j] * std::cos(ph) - a_[j] * std::sin(ph));
    }
    return s;
  }

  double sq_antiderivative(double y) const override {
    double s = 0.0;
    for (std::size_t j = 1; j < qa_.size(); ++j) {
      const double ph = kTwoPi * double(j) * y;
      s += (qa_[j] * std::sin(ph) + qb_[j] * (1.0 - std::cos(ph))) / (kTwoPi * double(j));
    }
    return s;
  }

  double support_measure() const override { return 1.0; }
  bool compact_support() const override { return false; }
  int max_mode() const override { return static_cast<int>(a_.size()) - 1; }

  double lp_norm(double p) const override {
    const int N = 65536;
    if (p == std::numeric_limits<double>::infinity()) {
      double m = 0.0;
      for (int i = 0; i < N; ++i) m = std::max(m, std::abs(value(double(i) / N)));
      return m;
    }
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += std::pow(std::abs(value(double(i) / N)), p);
    return std::pow(s / N, 1.0 / p);
  }

 private:
  void build_square_series() {
    // series of value^2 - 1 up to 2M by convolving the value series; the
    // constant term is exactly 1 after the unit-L2 normalization
    const int M = static_cast<int>(a_.size()) - 1;
    qa_.assign(2 * M + 1, 0.0);
    qb_.assign(2 * M + 1, 0.0);
    auto C = [&](int j) -> std::complex<double> {
      if (j == 0 || j > M || j < -M) return {0.0, 0.0};
      if (j > 0) return {a_[j] / 2.0, -b_[j] / 2.0};
      return {a_[-j] / 2.0, b_[-j] / 2.0};
    };
    for (int m = 1; m <= 2 * M; ++m) {
      std::complex<double> s{0.0, 0.0};
      for (int j = -M; j <= M; ++j) s += C(j) * C(m - j);
      qa_[m] = 2.0 * s.real();
      qb_[m] = -2.0 * s.imag();
    }
  }

  std::vector<double> a_, b_;
  std::vector<double> qa_, qb_;
};

}  // namespace

ProfilePtr stretched_bump(const BaseBump& base, int r_inv) {
  return std::make_shared<StretchedBump>(base, r_inv);
}

ProfilePtr bandlimited_stretch(const BaseBump& base, int r_inv, int modes) {
  return std::make_shared<TrigProfile>(base, r_inv, modes);
}

}  // namespace boxflow::profiles
