#pragma once

#include <functional>
#include <string>

namespace critlab {

struct RhoFlags {
  bool nondecreasing = false;
  bool increasing = false;
  bool convex = false;
  // value 0 at the origin with 1 in the subdifferential there
  bool normalized = false;
  // valid loss-restraining penalty: coercive, minimum 0 at 0, not monotone
  bool coercive_nonmonotone = false;
};

/*
 * Scalar dispersion penalty with value, derivative and declared shape flags.
 *
 * At kink points a fixed subgradient element is returned so downstream runs
 * are deterministic: the CVaR hinge and |.| both report derivative 0 at the
 * origin. Pointwise evaluation of the exponential tilt reports overflow as an
 * error instead of saturating; aggregate evaluators shift exponents instead.
 */
class DispersionFunction {
 public:
  enum class Kind {
    identity,
    cvar_hinge,
    exp_tilt,
    cressie_read_power,
    abs,
    pseudo_huber,
    quadratic,
    custom,
  };

  static DispersionFunction identity();
  // max(0,u)/(1-beta), 0 < beta < 1
  static DispersionFunction cvar_hinge(double beta);
  // (e^{gamma u} - 1)/gamma, gamma > 0
  static DispersionFunction exp_tilt(double gamma);
  // (1 + c(c-1)eps)^{c*/c} max(0,u)^{c*}, c* = c/(c-1), c > 1, eps >= 0
  static DispersionFunction cressie_read_power(double c, double eps);
  static DispersionFunction absolute_value();
  // sqrt(u^2+1) - 1
  static DispersionFunction pseudo_huber();
  static DispersionFunction quadratic();
  // In-code extension hook; the caller declares the flags.
  static DispersionFunction custom(std::string name,
                                   std::function<double(double)> value,
                                   std::function<double(double)> deriv,
                                   RhoFlags flags);

  double operator()(double u) const { return value_(u); }
  double eval(double u) const { return value_(u); }
  double deriv(double u) const { return deriv_(u); }

  Kind kind() const { return kind_; }
  const RhoFlags& flags() const { return flags_; }
  // Canonical name: identity | cvar | tilt | cressie-read | abs |
  // pseudo-huber | quadratic
  const std::string& name() const { return name_; }
  // Name with hyperparameters, e.g. "tilt(2)"
  std::string label() const;
  double param(int i = 0) const;

 private:
  DispersionFunction() = default;
  Kind kind_ = Kind::custom;
  std::string name_;
  double p0_ = 0.0, p1_ = 0.0;
  int n_params_ = 0;
  RhoFlags flags_;
  std::function<double(double)> value_;
  std::function<double(double)> deriv_;
};

}  // namespace critlab
