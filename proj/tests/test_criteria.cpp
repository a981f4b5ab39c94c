#include <cmath>
#include <stdexcept>
#include <vector>

#include "critlab/collapse.hpp"
#include "critlab/criteria.hpp"
#include "critlab/rng.hpp"
#include "doctest.h"

using critlab::BernoulliSpec;
using critlab::CriterionSpec;
using critlab::DispersionFunction;
using critlab::EmpiricalLossDist;
using critlab::Rng;

namespace {

EmpiricalLossDist random_dist(Rng& rng, int max_atoms = 10, double lo = -1.0,
                              double hi = 3.0) {
  int n = 2 + static_cast<int>(rng.below(max_atoms - 1));
  std::vector<double> values(n), weights(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    values[i] = rng.uniform(lo, hi);
    weights[i] = rng.uniform(0.05, 1.0);
    sum += weights[i];
  }
  for (auto& w : weights) w /= sum;
  return EmpiricalLossDist(values, weights);
}

EmpiricalLossDist shifted(const EmpiricalLossDist& d, double c) {
  std::vector<double> values = d.values();
  for (auto& v : values) v += c;
  return EmpiricalLossDist(values, d.weights());
}

// Brute-force minimization of theta + E[(L-theta)+]/(1-beta) on a theta grid.
double cvar_grid_oracle(const EmpiricalLossDist& d, double beta, double lo,
                        double hi, double step) {
  double best = std::numeric_limits<double>::infinity();
  for (double theta = lo; theta <= hi + 1e-15; theta += step) {
    double tail = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
      tail += d.weights()[i] * std::max(0.0, d.values()[i] - theta);
    best = std::min(best, theta + tail / (1.0 - beta));
  }
  return best;
}

}  // namespace

TEST_CASE("expected value and fixed-function criteria") {
  EmpiricalLossDist bern = BernoulliSpec(0.3).to_empirical();
  CHECK(eval_criterion(CriterionSpec::expected(), bern).value ==
        doctest::Approx(0.3));

  // f(0) + p (f(1) - f(0)), bit for bit.
  Rng rng(5);
  for (int rep = 0; rep < 50; ++rep) {
    double p = rng.unit();
    double f0 = rng.uniform(-2, 2), f1 = rng.uniform(-2, 2);
    auto d = BernoulliSpec(p).to_empirical();
    double expected = f0 + d.weights().back() * (f1 - f0);
    if (p == 0.0) expected = f0;
    CHECK(eval_criterion(CriterionSpec::fixed_fn(f0, f1), d).value == expected);
  }

  EmpiricalLossDist other({0.0, 0.5}, {0.5, 0.5});
  CHECK_THROWS_AS(eval_criterion(CriterionSpec::fixed_fn(0, 1), other),
                  std::domain_error);
}

TEST_CASE("cvar closed form against a grid oracle") {
  EmpiricalLossDist bern = BernoulliSpec(0.2).to_empirical();
  auto r = eval_criterion(CriterionSpec::cvar(0.5), bern);
  double oracle = cvar_grid_oracle(bern, 0.5, 0.0, 1.0, 1e-4);
  CHECK(std::abs(r.value - oracle) < 1e-3);
  CHECK(r.value == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(r.minimizer_theta.has_value());
  CHECK(*r.minimizer_theta == 0.0);
}

TEST_CASE("tilted risk: direct two-point evaluation and stability") {
  EmpiricalLossDist bern = BernoulliSpec(0.5).to_empirical();
  double direct = std::log(0.5 + 0.5 * std::exp(1.0));
  auto r = eval_criterion(CriterionSpec::tilted(1.0), bern);
  CHECK(r.value == doctest::Approx(direct).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(0.62011450695).epsilon(1e-9));

  // Large gamma stays finite through the shift; the far atom dominates.
  EmpiricalLossDist wide({0.0, 20.0}, {0.5, 0.5});
  auto big = eval_criterion(CriterionSpec::tilted(100.0), wide);
  CHECK(big.value == doctest::Approx(20.0 + std::log(0.5) / 100.0).epsilon(1e-12));

  // Negative tilt leans on the left tail.
  auto neg = eval_criterion(CriterionSpec::tilted(-100.0), wide);
  CHECK(neg.value == doctest::Approx(std::log(0.5) / -100.0).epsilon(1e-12));
}

TEST_CASE("tilted evaluation reports overflow from extreme tilts") {
  EmpiricalLossDist wide({0.0, 3.0}, {0.5, 0.5});
  CHECK_THROWS_AS(eval_criterion(CriterionSpec::tilted(1e308), wide),
                  std::overflow_error);
  // Criterion errors propagate through class evaluation.
  auto cls = critlab::HypothesisClass::from_errs({0.2, 0.4});
  CHECK_THROWS_AS(
      critlab::argmin_set(CriterionSpec::fixed_fn(0, 1),
                          critlab::HypothesisClass(
                              {{"g1", EmpiricalLossDist({0.0, 0.5}, {0.5, 0.5}),
                                std::nullopt}}),
                          1e-9),
      std::domain_error);
}

TEST_CASE("oce of a point mass under a normalized penalty is the point") {
  auto point = EmpiricalLossDist::point_mass(3.0);
  auto r = eval_criterion(
      CriterionSpec::oce(DispersionFunction::exp_tilt(1.0)), point);
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(*r.minimizer_theta == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("closed forms agree with generic inner minimization") {
  Rng rng(42);
  for (int rep = 0; rep < 100; ++rep) {
    EmpiricalLossDist d = random_dist(rng);
    double beta = rng.uniform(0.05, 0.95);
    double cvar_closed = eval_criterion(CriterionSpec::cvar(beta), d).value;
    double cvar_generic =
        eval_criterion(
            CriterionSpec::oce(DispersionFunction::cvar_hinge(beta)), d)
            .value;
    CHECK(std::abs(cvar_closed - cvar_generic) < 1e-7);

    double gamma = rng.uniform(0.1, 3.0);
    double tilted_closed = eval_criterion(CriterionSpec::tilted(gamma), d).value;
    double tilted_generic =
        eval_criterion(CriterionSpec::oce(DispersionFunction::exp_tilt(gamma)), d)
            .value;
    CHECK(std::abs(tilted_closed - tilted_generic) < 1e-7);
  }
}

TEST_CASE("oce criteria are translation equivariant") {
  Rng rng(43);
  std::vector<CriterionSpec> specs;
  specs.push_back(CriterionSpec::oce(DispersionFunction::exp_tilt(1.0)));
  specs.push_back(CriterionSpec::oce(DispersionFunction::cvar_hinge(0.6)));
  specs.push_back(CriterionSpec::oce(DispersionFunction::identity()));
  for (int rep = 0; rep < 30; ++rep) {
    EmpiricalLossDist d = random_dist(rng);
    double c = rng.uniform(-2.0, 2.0);
    EmpiricalLossDist dc = shifted(d, c);
    for (const auto& spec : specs) {
      double base = eval_criterion(spec, d).value;
      double moved = eval_criterion(spec, dc).value;
      CHECK(std::abs(moved - (base + c)) < 1e-8);
    }
  }
}

TEST_CASE("cvar and tilted ordering facts") {
  Rng rng(44);
  for (int rep = 0; rep < 50; ++rep) {
    EmpiricalLossDist d = random_dist(rng);
    double beta = rng.uniform(0.05, 0.95);
    double cvar = eval_criterion(CriterionSpec::cvar(beta), d).value;
    CHECK(cvar >= d.mean() - 1e-10);
    CHECK(cvar <= d.max_value() + 1e-10);

    double prev = -std::numeric_limits<double>::infinity();
    for (double g : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      double t = eval_criterion(CriterionSpec::tilted(g), d).value;
      CHECK(t >= prev - 1e-10);
      prev = t;
    }
    double nearly_mean = eval_criterion(CriterionSpec::tilted(1e-6), d).value;
    CHECK(std::abs(nearly_mean - d.mean()) < 1e-4);
  }
}

TEST_CASE("robust dual criterion") {
  Rng rng(45);
  for (int rep = 0; rep < 30; ++rep) {
    EmpiricalLossDist d = random_dist(rng);
    // Radius zero collapses to the mean through the same code path.
    CHECK(eval_criterion(CriterionSpec::cressie_read_dro(2.0, 0.0), d).value ==
          d.mean());
    auto r = eval_criterion(CriterionSpec::cressie_read_dro(2.0, 0.3), d);
    CHECK(r.value >= d.mean() - 1e-9);
    CHECK(r.minimizer_theta.has_value());
  }
  // Small radius keeps the robust value close to (and above) the mean.
  EmpiricalLossDist bern = BernoulliSpec(0.4).to_empirical();
  double tight = eval_criterion(CriterionSpec::cressie_read_dro(2.0, 1e-8), bern).value;
  CHECK(tight == doctest::Approx(0.4).epsilon(1e-3));
}

TEST_CASE("orlicz regret criterion") {
  auto r = eval_criterion(CriterionSpec::orlicz(0.1),
                          BernoulliSpec(0.5).to_empirical());
  CHECK(r.minimizer_sigma.has_value());
  CHECK(r.minimizer_theta.has_value());
  // Any feasible (sigma, theta) upper-bounds the infimum; check against the
  // envelope value sigma*eps + sigma*log E[e^{L/sigma}] on a sigma grid.
  double best = std::numeric_limits<double>::infinity();
  for (double s = 0.05; s <= 20.0; s += 0.001) {
    double v = s * 0.1 + s * std::log(0.5 + 0.5 * std::exp(1.0 / s));
    best = std::min(best, v);
  }
  CHECK(r.value == doctest::Approx(best).epsilon(1e-6));
  // Strictly monotone in the error rate.
  double lo = eval_criterion(CriterionSpec::orlicz(0.1),
                             BernoulliSpec(0.3).to_empirical())
                  .value;
  CHECK(lo < r.value);
}

TEST_CASE("variantile and expectile") {
  auto fair = BernoulliSpec(0.5).to_empirical();
  CHECK(eval_criterion(CriterionSpec::variantile(0.5), fair).value ==
        doctest::Approx(0.25).epsilon(1e-9));

  CHECK(critlab::expectile(fair, 0.75) == doctest::Approx(0.75).epsilon(1e-10));
  Rng rng(46);
  for (int rep = 0; rep < 20; ++rep) {
    double p = rng.uniform(0.05, 0.95);
    auto d = BernoulliSpec(p).to_empirical();
    CHECK(critlab::expectile(d, 0.5) == doctest::Approx(p).epsilon(1e-10));
    double tau = rng.uniform(0.05, 0.95);
    double closed = tau * p / ((1.0 - tau) * (1.0 - p) + tau * p);
    CHECK(critlab::expectile(d, tau) == doctest::Approx(closed).epsilon(1e-9));
  }
  CHECK(critlab::expectile(EmpiricalLossDist::point_mass(2.0), 0.3) == 2.0);
}

TEST_CASE("variantile matches its two-point closed form") {
  CHECK(critlab::bernoulli_variantile(0.5, 0.5) == doctest::Approx(0.25));
  CHECK(critlab::bernoulli_variantile(0.5, 0.0) == 0.0);
  CHECK(critlab::bernoulli_variantile(0.5, 1.0) == 0.0);
  for (int ti = 1; ti <= 9; ++ti) {
    for (int pi = 0; pi <= 20; ++pi) {
      double tau = 0.1 * ti;
      double p = pi / 20.0;
      double via_eval =
          eval_criterion(CriterionSpec::variantile(tau),
                         BernoulliSpec(p).to_empirical())
              .value;
      CHECK(std::abs(via_eval - critlab::bernoulli_variantile(tau, p)) < 1e-9);
    }
  }
}

TEST_CASE("two-point variantile is strictly concave in the error rate") {
  const double h = 1e-3;
  for (int ti = 1; ti <= 9; ++ti) {
    double tau = 0.1 * ti;
    for (double p = 0.02; p < 0.985; p += 0.01) {
      double second = critlab::bernoulli_variantile(tau, p - h) -
                      2.0 * critlab::bernoulli_variantile(tau, p) +
                      critlab::bernoulli_variantile(tau, p + h);
      CHECK(second < 0.0);
    }
  }
}

TEST_CASE("loss-restraining criteria") {
  auto abs_pen = DispersionFunction::absolute_value();
  Rng rng(47);
  for (int rep = 0; rep < 20; ++rep) {
    EmpiricalLossDist d = random_dist(rng, 8, 0.0, 3.0);  // nonnegative losses
    double v = eval_criterion(CriterionSpec::inner_restrain(abs_pen, 0.0), d).value;
    CHECK(v == d.mean());
  }
  // Concentration criterion of a point mass at its threshold is the global
  // minimum, exactly zero.
  for (auto pen : {DispersionFunction::absolute_value(),
                   DispersionFunction::pseudo_huber(),
                   DispersionFunction::quadratic()}) {
    auto spec = CriterionSpec::outer_restrain(pen, 1.7);
    CHECK(eval_criterion(spec, EmpiricalLossDist::point_mass(1.7)).value == 0.0);
    EmpiricalLossDist d = random_dist(rng);
    CHECK(eval_criterion(spec, d).value >= 0.0);
  }
}

TEST_CASE("inner minimizers reproduce reported values") {
  Rng rng(48);
  for (int rep = 0; rep < 20; ++rep) {
    EmpiricalLossDist d = random_dist(rng);
    struct Probe {
      CriterionSpec spec;
      bool has_sigma;
    };
    std::vector<Probe> probes;
    probes.push_back({CriterionSpec::cvar(0.7), false});
    probes.push_back({CriterionSpec::oce(DispersionFunction::exp_tilt(0.8)), false});
    probes.push_back({CriterionSpec::cressie_read_dro(2.0, 0.2), false});
    probes.push_back({CriterionSpec::tilted(1.5), false});
    probes.push_back({CriterionSpec::orlicz(0.1), true});
    for (const auto& probe : probes) {
      auto r = eval_criterion(probe.spec, d);
      REQUIRE(r.minimizer_theta.has_value());
      double theta = *r.minimizer_theta;
      double replay = 0.0;
      switch (probe.spec.kind()) {
        case CriterionSpec::Kind::cvar: {
          double tail = 0.0;
          for (std::size_t i = 0; i < d.size(); ++i)
            tail += d.weights()[i] * std::max(0.0, d.values()[i] - theta);
          replay = theta + tail / (1.0 - probe.spec.beta());
          break;
        }
        case CriterionSpec::Kind::oce:
        case CriterionSpec::Kind::tilted: {
          DispersionFunction rho =
              probe.spec.kind() == CriterionSpec::Kind::oce
                  ? probe.spec.rho()
                  : DispersionFunction::exp_tilt(probe.spec.gamma());
          replay = theta;
          for (std::size_t i = 0; i < d.size(); ++i)
            replay += d.weights()[i] * rho(d.values()[i] - theta);
          break;
        }
        case CriterionSpec::Kind::cressie_read_dro: {
          DispersionFunction rho = DispersionFunction::cressie_read_power(
              probe.spec.c(), probe.spec.eps());
          double s = 0.0;
          for (std::size_t i = 0; i < d.size(); ++i)
            s += d.weights()[i] * rho(d.values()[i] - theta);
          replay = theta + std::sqrt(s);
          break;
        }
        case CriterionSpec::Kind::orlicz: {
          double sigma = *r.minimizer_sigma;
          double s = 0.0;
          for (std::size_t i = 0; i < d.size(); ++i)
            s += d.weights()[i] *
                 std::expm1(d.values()[i] / sigma - theta);
          replay = sigma * (probe.spec.eps() + theta + s);
          break;
        }
        default:
          break;
      }
      CHECK(std::abs(replay - r.value) < 1e-8);
    }
  }
}

TEST_CASE("hyperparameter validation") {
  CHECK_THROWS_AS(CriterionSpec::quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::cvar(1.0), std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::tilted(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::cressie_read_dro(1.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::orlicz(0.0), std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::variantile(1.0), std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::oce(DispersionFunction::quadratic()),
                  std::invalid_argument);
  CHECK_THROWS_AS(CriterionSpec::oce(DispersionFunction::cressie_read_power(2, 0.1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      CriterionSpec::inner_restrain(DispersionFunction::identity(), 0.1),
      std::invalid_argument);
  CHECK_THROWS_AS(
      CriterionSpec::outer_restrain(DispersionFunction::exp_tilt(1.0), 0.1),
      std::invalid_argument);
}

TEST_CASE("quantile criterion delegates to the left quantile") {
  auto d = BernoulliSpec(0.3).to_empirical();
  CHECK(eval_criterion(CriterionSpec::quantile(0.5), d).value == 0.0);
  CHECK(eval_criterion(CriterionSpec::quantile(0.8), d).value == 1.0);
}

TEST_CASE("criterion labels") {
  CHECK(CriterionSpec::expected().label() == "expected");
  CHECK(CriterionSpec::cvar(0.7).label() == "cvar(0.7)");
  CHECK(CriterionSpec::oce(DispersionFunction::exp_tilt(2.0)).label() ==
        "oce(tilt(2))");
  CHECK(CriterionSpec::inner_restrain(DispersionFunction::absolute_value(), 0.3)
            .label() == "inner-restrain(abs,0.3)");
}
