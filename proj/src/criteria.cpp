#include "critlab/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "critlab/scalar_opt.hpp"

namespace critlab {

namespace {

constexpr double kGoldenTol = 1e-10;
constexpr double kBisectTol = 1e-12;

std::string fmt_param(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double positive_part_mean(const EmpiricalLossDist& d, double theta) {
  double s = 0.0;
  const auto& v = d.values();
  const auto& w = d.weights();
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] > theta) s += w[i] * (v[i] - theta);
  return s;
}

double oce_objective(const DispersionFunction& rho, const EmpiricalLossDist& d,
                     double theta) {
  double s = 0.0;
  const auto& v = d.values();
  const auto& w = d.weights();
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * rho(v[i] - theta);
  return theta + s;
}

// log sum_i w_i e^{g v_i}, shifted by the largest exponent.
double weighted_log_sum_exp(const EmpiricalLossDist& d, double g) {
  const auto& v = d.values();
  const auto& w = d.weights();
  double m = g * v[0];
  for (std::size_t i = 1; i < v.size(); ++i) m = std::max(m, g * v[i]);
  if (!std::isfinite(m))
    throw std::overflow_error("tilted: gamma * loss overflows");
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::exp(g * v[i] - m);
  return m + std::log(s);
}

CriterionResult eval_tilted(double gamma, const EmpiricalLossDist& d) {
  double value = weighted_log_sum_exp(d, gamma) / gamma;
  CriterionResult r;
  r.value = value;
  // For gamma > 0 this is the OCE with the exponential tilt; its inner
  // minimizer is the criterion value itself.
  if (gamma > 0.0) r.minimizer_theta = value;
  return r;
}

CriterionResult eval_cvar(double beta, const EmpiricalLossDist& d) {
  double theta = d.left_quantile(beta);
  CriterionResult r;
  r.value = theta + positive_part_mean(d, theta) / (1.0 - beta);
  r.minimizer_theta = theta;
  return r;
}

CriterionResult eval_oce(const DispersionFunction& rho,
                         const EmpiricalLossDist& d) {
  // A normalized OCE attains its inner minimum inside the support hull; the
  // unit margin protects the bracketing.
  double lo = d.min_value() - 1.0;
  double hi = d.max_value() + 1.0;
  ScalarMin m = golden_section_min(
      [&](double theta) { return oce_objective(rho, d, theta); }, lo, hi,
      kGoldenTol);
  CriterionResult r;
  r.value = m.value;
  r.minimizer_theta = m.argmin;
  return r;
}

CriterionResult eval_cressie_read(double c, double eps,
                                  const EmpiricalLossDist& d) {
  CriterionResult r;
  if (eps == 0.0) {
    // Radius zero: the infimum equals the mean and is approached only as
    // theta -> -inf, so no numeric search is run.
    r.value = d.mean();
    return r;
  }
  double cstar = c / (c - 1.0);
  DispersionFunction rho = DispersionFunction::cressie_read_power(c, eps);
  auto objective = [&](double theta) {
    double s = 0.0;
    const auto& v = d.values();
    const auto& w = d.weights();
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * rho(v[i] - theta);
    return theta + std::pow(s, 1.0 / cstar);
  };
  // The minimizer can sit below the support; double the left edge until the
  // objective rises toward it.
  double a = d.min_value() - 1.0;
  double b = d.max_value() + 1.0;
  double h = 1e-6 * (b - a);
  int guard = 0;
  while (!(objective(a) > objective(a + h))) {
    a = b - 2.0 * (b - a);
    h *= 2.0;
    if (++guard > 200)
      throw std::runtime_error("cressie_read_dro: left bracket expansion failed");
  }
  ScalarMin m = golden_section_min(objective, a, b, kGoldenTol);
  r.value = m.value;
  r.minimizer_theta = m.argmin;
  return r;
}

// Inner objective for the Orlicz criterion with the default conjugate
// f*(u) = e^u - 1. The expectation factorizes as e^{lse - theta} with
// lse = log E[e^{L/sigma}], which keeps evaluation stable for any sigma.
CriterionResult eval_orlicz(double eps, const EmpiricalLossDist& d) {
  auto inner = [&](double sigma, double* theta_out) {
    double lse = weighted_log_sum_exp(d, 1.0 / sigma);
    double ulo = d.min_value() / sigma - 1.0;
    double uhi = d.max_value() / sigma + 1.0;
    ScalarMin m = golden_section_min(
        [&](double theta) {
          double t = lse - theta;
          double e = t < 709.0 ? std::expm1(t)
                               : std::numeric_limits<double>::infinity();
          return sigma * (eps + theta + e);
        },
        ulo, uhi, kGoldenTol);
    if (theta_out) *theta_out = m.argmin;
    return m.value;
  };
  ScalarMin outer = golden_section_min(
      [&](double x) { return inner(std::exp(x), nullptr); }, -10.0, 10.0,
      kGoldenTol);
  double sigma = std::exp(outer.argmin);
  double theta = 0.0;
  double value = inner(sigma, &theta);
  CriterionResult r;
  r.value = value;
  r.minimizer_theta = theta;
  r.minimizer_sigma = sigma;
  return r;
}

CriterionResult eval_variantile(double tau, const EmpiricalLossDist& d) {
  double theta = expectile(d, tau);
  double s = 0.0;
  const auto& v = d.values();
  const auto& w = d.weights();
  for (std::size_t i = 0; i < v.size(); ++i) {
    double ind = v[i] <= theta ? 1.0 : 0.0;
    double dv = v[i] - theta;
    s += w[i] * std::abs(ind - tau) * dv * dv;
  }
  CriterionResult r;
  r.value = 2.0 * s;
  r.minimizer_theta = theta;
  return r;
}

}  // namespace

CriterionSpec CriterionSpec::expected() {
  CriterionSpec s;
  s.kind_ = Kind::expected;
  return s;
}

CriterionSpec CriterionSpec::fixed_fn(double f0, double f1) {
  CriterionSpec s;
  s.kind_ = Kind::fixed_fn;
  s.f0_ = f0;
  s.f1_ = f1;
  return s;
}

CriterionSpec CriterionSpec::quantile(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("quantile criterion: beta must lie in (0,1)");
  CriterionSpec s;
  s.kind_ = Kind::quantile;
  s.beta_ = beta;
  return s;
}

CriterionSpec CriterionSpec::oce(DispersionFunction rho) {
  const RhoFlags& f = rho.flags();
  if (!(f.nondecreasing && f.convex && f.normalized))
    throw std::invalid_argument(
        "oce criterion: rho must be nondecreasing, convex and normalized");
  CriterionSpec s;
  s.kind_ = Kind::oce;
  s.rho_ = std::move(rho);
  return s;
}

CriterionSpec CriterionSpec::cvar(double beta) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::invalid_argument("cvar criterion: beta must lie in (0,1)");
  CriterionSpec s;
  s.kind_ = Kind::cvar;
  s.beta_ = beta;
  return s;
}

CriterionSpec CriterionSpec::tilted(double gamma) {
  if (!(gamma != 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("tilted criterion: gamma must be nonzero");
  CriterionSpec s;
  s.kind_ = Kind::tilted;
  s.gamma_ = gamma;
  return s;
}

CriterionSpec CriterionSpec::cressie_read_dro(double c, double eps) {
  if (!(c > 1.0)) throw std::invalid_argument("cressie_read_dro: c must be > 1");
  if (!(eps >= 0.0))
    throw std::invalid_argument("cressie_read_dro: eps must be >= 0");
  CriterionSpec s;
  s.kind_ = Kind::cressie_read_dro;
  s.c_ = c;
  s.eps_ = eps;
  return s;
}

CriterionSpec CriterionSpec::orlicz(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("orlicz: eps must be > 0");
  CriterionSpec s;
  s.kind_ = Kind::orlicz;
  s.eps_ = eps;
  return s;
}

CriterionSpec CriterionSpec::variantile(double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("variantile: tau must lie in (0,1)");
  CriterionSpec s;
  s.kind_ = Kind::variantile;
  s.tau_ = tau;
  return s;
}

CriterionSpec CriterionSpec::inner_restrain(DispersionFunction rho_tilde,
                                            double theta) {
  if (!rho_tilde.flags().coercive_nonmonotone)
    throw std::invalid_argument(
        "inner_restrain: penalty must be a coercive non-monotone rho");
  CriterionSpec s;
  s.kind_ = Kind::inner_restrain;
  s.rho_ = std::move(rho_tilde);
  s.theta_ = theta;
  return s;
}

CriterionSpec CriterionSpec::outer_restrain(DispersionFunction rho_tilde,
                                            double theta) {
  if (!rho_tilde.flags().coercive_nonmonotone)
    throw std::invalid_argument(
        "outer_restrain: penalty must be a coercive non-monotone rho");
  CriterionSpec s;
  s.kind_ = Kind::outer_restrain;
  s.rho_ = std::move(rho_tilde);
  s.theta_ = theta;
  return s;
}

const DispersionFunction& CriterionSpec::rho() const {
  if (!rho_) throw std::logic_error("CriterionSpec: no rho for this kind");
  return *rho_;
}

std::string CriterionSpec::label() const {
  switch (kind_) {
    case Kind::expected:
      return "expected";
    case Kind::fixed_fn:
      return "fixed-fn(" + fmt_param(f0_) + "," + fmt_param(f1_) + ")";
    case Kind::quantile:
      return "quantile(" + fmt_param(beta_) + ")";
    case Kind::oce:
      return "oce(" + rho_->label() + ")";
    case Kind::cvar:
      return "cvar(" + fmt_param(beta_) + ")";
    case Kind::tilted:
      return "tilted(" + fmt_param(gamma_) + ")";
    case Kind::cressie_read_dro:
      return "cressie-read-dro(" + fmt_param(c_) + "," + fmt_param(eps_) + ")";
    case Kind::orlicz:
      return "orlicz(" + fmt_param(eps_) + ")";
    case Kind::variantile:
      return "variantile(" + fmt_param(tau_) + ")";
    case Kind::inner_restrain:
      return "inner-restrain(" + rho_->label() + "," + fmt_param(theta_) + ")";
    case Kind::outer_restrain:
      return "outer-restrain(" + rho_->label() + "," + fmt_param(theta_) + ")";
  }
  return "?";
}

CriterionResult eval_criterion(const CriterionSpec& spec,
                               const EmpiricalLossDist& dist) {
  switch (spec.kind()) {
    case CriterionSpec::Kind::expected:
      return {dist.mean(), std::nullopt, std::nullopt};
    case CriterionSpec::Kind::fixed_fn: {
      double p1 = 0.0;
      const auto& v = dist.values();
      const auto& w = dist.weights();
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 1.0)
          p1 += w[i];
        else if (v[i] != 0.0)
          throw std::domain_error(
              "fixed_fn criterion is only defined on {0,1}-valued losses");
      }
      return {spec.f0() + p1 * (spec.f1() - spec.f0()), std::nullopt,
              std::nullopt};
    }
    case CriterionSpec::Kind::quantile:
      return {dist.left_quantile(spec.beta()), std::nullopt, std::nullopt};
    case CriterionSpec::Kind::oce:
      return eval_oce(spec.rho(), dist);
    case CriterionSpec::Kind::cvar:
      return eval_cvar(spec.beta(), dist);
    case CriterionSpec::Kind::tilted:
      return eval_tilted(spec.gamma(), dist);
    case CriterionSpec::Kind::cressie_read_dro:
      return eval_cressie_read(spec.c(), spec.eps(), dist);
    case CriterionSpec::Kind::orlicz:
      return eval_orlicz(spec.eps(), dist);
    case CriterionSpec::Kind::variantile:
      return eval_variantile(spec.tau(), dist);
    case CriterionSpec::Kind::inner_restrain:
      return {spec.rho()(dist.mean() - spec.theta()), std::nullopt,
              std::nullopt};
    case CriterionSpec::Kind::outer_restrain: {
      double s = 0.0;
      const auto& v = dist.values();
      const auto& w = dist.weights();
      for (std::size_t i = 0; i < v.size(); ++i)
        s += w[i] * spec.rho()(v[i] - spec.theta());
      return {s, std::nullopt, std::nullopt};
    }
  }
  throw std::logic_error("eval_criterion: unknown kind");
}

double expectile(const EmpiricalLossDist& dist, double tau) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("expectile: tau must lie in (0,1)");
  auto balance = [&](double theta) {
    double below = 0.0, above = 0.0;
    const auto& v = dist.values();
    const auto& w = dist.weights();
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < theta)
        below += w[i] * (theta - v[i]);
      else
        above += w[i] * (v[i] - theta);
    }
    return (1.0 - tau) * below - tau * above;
  };
  return bisect_root(balance, dist.min_value(), dist.max_value(), kBisectTol);
}

double bernoulli_variantile(double tau, double p) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("bernoulli_variantile: tau must lie in (0,1)");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("bernoulli_variantile: p outside [0,1]");
  double denom = (1.0 - tau) * (1.0 - p) + tau * p;
  double a = tau * p / denom;
  double b = (1.0 - tau) * (1.0 - p) / denom;
  return 2.0 * ((1.0 - tau) * (1.0 - p) * a * a + tau * p * b * b);
}

}  // namespace critlab
