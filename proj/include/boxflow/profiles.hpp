#pragma once

#include <memory>
#include <vector>

#include <stdexcept>

namespace boxflow::profiles {

struct NotInteger : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// C-infinity bump exp(-1/(z(w-z))) on (0,w), identically zero elsewhere.
// Phi is the bump itself; the flows use its second derivative.
class BaseBump {
 public:
  explicit BaseBump(double width = 0.125);
  double width() const { return w_; }
  double Phi(double z) const;
  double Phi_d(double z) const;
  double Phi_dd(double z) const;   // phi   := Phi''
  double Phi_ddd(double z) const;  // phi'
  // base quadratures of phi = Phi'' (fine Simpson, cached)
  double phi_mean() const { return mean_; }
  double phi_l2() const { return l2_; }
  double phi_lp(double p) const;  // L^p([0,1]) norm of phi
 private:
  double w_;
  double mean_, l2_;
};

// A 1-periodic zero-mean profile of a scalar phase, normalized to unit L^2.
// Two realizations: the stretched compact bump (one copy of width r*w per
// period) and its band-limited truncation (trigonometric polynomial).
class Profile {
 public:
  virtual ~Profile() = default;
  virtual double value(double y) const = 0;
  virtual double derivative(double y) const = 0;
  // Q(y) = int_0^frac(y) (value^2 - 1) dz ;  1-periodic since mean(value^2)=1
  virtual double sq_antiderivative(double y) const = 0;
  virtual double sq_antiderivative_derivative(double y) const {
    const double v = value(y);
    return v * v - 1.0;
  }
  virtual double support_measure() const = 0;  // per unit period
  virtual bool compact_support() const = 0;
  virtual double lp_norm(double p) const = 0;
  virtual int max_mode() const = 0;  // 0 when not band-limited
  int r_inv() const { return r_inv_; }

 protected:
  int r_inv_ = 1;
};

using ProfilePtr = std::shared_ptr<const Profile>;

// r^{-1/2} phi(z/r) placed once per unit period, normalized to unit L^2.
ProfilePtr stretched_bump(const BaseBump& base, int r_inv);

// Fourier truncation of the stretched bump to |j| <= modes, renormalized.
ProfilePtr bandlimited_stretch(const BaseBump& base, int r_inv, int modes);

}  // namespace boxflow::profiles
