#include "critlab/rho.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace critlab {

namespace {

// exp overflows past ~709.78; treat anything at or above 709 as an error.
void check_exp_arg(double t) {
  if (!(t < 709.0)) throw std::overflow_error("exp_tilt: exponent overflow");
}

std::string fmt_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

DispersionFunction DispersionFunction::identity() {
  DispersionFunction f;
  f.kind_ = Kind::identity;
  f.name_ = "identity";
  f.flags_ = {true, true, true, true, false};
  f.value_ = [](double u) { return u; };
  f.deriv_ = [](double) { return 1.0; };
  return f;
}

DispersionFunction DispersionFunction::cvar_hinge(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("cvar_hinge: beta must lie in (0,1)");
  DispersionFunction f;
  f.kind_ = Kind::cvar_hinge;
  f.name_ = "cvar";
  f.p0_ = beta;
  f.n_params_ = 1;
  f.flags_ = {true, false, true, true, false};
  double scale = 1.0 / (1.0 - beta);
  f.value_ = [scale](double u) { return u > 0.0 ? scale * u : 0.0; };
  f.deriv_ = [scale](double u) { return u > 0.0 ? scale : 0.0; };
  return f;
}

DispersionFunction DispersionFunction::exp_tilt(double gamma) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("exp_tilt: gamma must be > 0");
  DispersionFunction f;
  f.kind_ = Kind::exp_tilt;
  f.name_ = "tilt";
  f.p0_ = gamma;
  f.n_params_ = 1;
  f.flags_ = {true, true, true, true, false};
  f.value_ = [gamma](double u) {
    double t = gamma * u;
    check_exp_arg(t);
    return std::expm1(t) / gamma;
  };
  f.deriv_ = [gamma](double u) {
    double t = gamma * u;
    check_exp_arg(t);
    return std::exp(t);
  };
  return f;
}

DispersionFunction DispersionFunction::cressie_read_power(double c, double eps) {
  if (!(c > 1.0)) throw std::invalid_argument("cressie_read_power: c must be > 1");
  if (!(eps >= 0.0))
    throw std::invalid_argument("cressie_read_power: eps must be >= 0");
  DispersionFunction f;
  f.kind_ = Kind::cressie_read_power;
  f.name_ = "cressie-read";
  f.p0_ = c;
  f.p1_ = eps;
  f.n_params_ = 2;
  f.flags_ = {true, false, true, false, false};
  double cstar = c / (c - 1.0);
  double coef = std::pow(1.0 + c * (c - 1.0) * eps, cstar / c);
  f.value_ = [coef, cstar](double u) {
    return u > 0.0 ? coef * std::pow(u, cstar) : 0.0;
  };
  f.deriv_ = [coef, cstar](double u) {
    return u > 0.0 ? coef * cstar * std::pow(u, cstar - 1.0) : 0.0;
  };
  return f;
}

DispersionFunction DispersionFunction::absolute_value() {
  DispersionFunction f;
  f.kind_ = Kind::abs;
  f.name_ = "abs";
  f.flags_ = {false, false, true, false, true};
  f.value_ = [](double u) { return std::abs(u); };
  f.deriv_ = [](double u) { return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0); };
  return f;
}

DispersionFunction DispersionFunction::pseudo_huber() {
  DispersionFunction f;
  f.kind_ = Kind::pseudo_huber;
  f.name_ = "pseudo-huber";
  f.flags_ = {false, false, true, false, true};
  f.value_ = [](double u) { return std::hypot(u, 1.0) - 1.0; };
  f.deriv_ = [](double u) { return u / std::hypot(u, 1.0); };
  return f;
}

DispersionFunction DispersionFunction::quadratic() {
  DispersionFunction f;
  f.kind_ = Kind::quadratic;
  f.name_ = "quadratic";
  f.flags_ = {false, false, true, false, true};
  f.value_ = [](double u) { return u * u; };
  f.deriv_ = [](double u) { return 2.0 * u; };
  return f;
}

DispersionFunction DispersionFunction::custom(std::string name,
                                              std::function<double(double)> value,
                                              std::function<double(double)> deriv,
                                              RhoFlags flags) {
  if (!value || !deriv)
    throw std::invalid_argument("DispersionFunction::custom: missing callable");
  DispersionFunction f;
  f.kind_ = Kind::custom;
  f.name_ = std::move(name);
  f.flags_ = flags;
  f.value_ = std::move(value);
  f.deriv_ = std::move(deriv);
  return f;
}

std::string DispersionFunction::label() const {
  if (n_params_ == 0) return name_;
  std::string s = name_ + "(" + fmt_param(p0_);
  if (n_params_ > 1) s += "," + fmt_param(p1_);
  return s + ")";
}

double DispersionFunction::param(int i) const {
  if (i < 0 || i >= n_params_)
    throw std::out_of_range("DispersionFunction::param");
  return i == 0 ? p0_ : p1_;
}

}  // namespace critlab
