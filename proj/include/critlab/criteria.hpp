#pragma once

#include <optional>
#include <string>

#include "critlab/distributions.hpp"
#include "critlab/rho.hpp"

namespace critlab {

struct CriterionResult {
  double value = 0.0;
  // The theta achieving the inner infimum, when the criterion has one.
  std::optional<double> minimizer_theta;
  // Orlicz only: the scale achieving the outer infimum.
  std::optional<double> minimizer_sigma;
};

/*
 * A criterion mapping from loss distributions to the reals. Hyperparameters
 * are validated at construction:
 *   quantile/cvar need beta in (0,1); tilted needs gamma != 0;
 *   cressie-read-dro needs c > 1, eps >= 0; orlicz needs eps > 0;
 *   variantile needs tau in (0,1); oce needs a nondecreasing convex
 *   normalized rho; the restraining criteria need a coercive non-monotone
 *   penalty.
 */
class CriterionSpec {
 public:
  enum class Kind {
    expected,
    fixed_fn,
    quantile,
    oce,
    cvar,
    tilted,
    cressie_read_dro,
    orlicz,
    variantile,
    inner_restrain,
    outer_restrain,
  };

  static CriterionSpec expected();
  static CriterionSpec fixed_fn(double f0, double f1);
  static CriterionSpec quantile(double beta);
  static CriterionSpec oce(DispersionFunction rho);
  static CriterionSpec cvar(double beta);
  static CriterionSpec tilted(double gamma);
  static CriterionSpec cressie_read_dro(double c, double eps);
  static CriterionSpec orlicz(double eps);
  static CriterionSpec variantile(double tau);
  static CriterionSpec inner_restrain(DispersionFunction rho_tilde, double theta);
  static CriterionSpec outer_restrain(DispersionFunction rho_tilde, double theta);

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  double f0() const { return f0_; }
  double f1() const { return f1_; }
  double c() const { return c_; }
  double eps() const { return eps_; }
  double tau() const { return tau_; }
  double theta() const { return theta_; }
  const DispersionFunction& rho() const;

  std::string label() const;

 private:
  CriterionSpec() = default;
  Kind kind_ = Kind::expected;
  double beta_ = 0, gamma_ = 0, f0_ = 0, f1_ = 0, c_ = 0, eps_ = 0, tau_ = 0,
         theta_ = 0;
  std::optional<DispersionFunction> rho_;
};

CriterionResult eval_criterion(const CriterionSpec& spec,
                               const EmpiricalLossDist& dist);

// Root of (1-tau) E[(theta-L)+] = tau E[(L-theta)+], solved by bisection on
// the support hull to 1e-12.
double expectile(const EmpiricalLossDist& dist, double tau);

// Closed-form variantile of a zero-one distribution with error rate p;
// vanishes at p = 0 and p = 1, strictly concave in between.
double bernoulli_variantile(double tau, double p);

}  // namespace critlab
