#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "critlab/collapse.hpp"

namespace critlab {

struct SuiteCheck {
  std::string name;
  long total = 0;
  long failures = 0;
  std::vector<std::string> notes;  // one line per failing case
  bool pass() const { return failures == 0; }
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::vector<SuiteCheck> checks;
  bool all_pass() const;
  long total_checks() const;
  void write_csv(std::ostream& os) const;   // check,total,failures,verdict
  void write_text(std::ostream& os) const;
};

struct SuiteOptions {
  int classes = 200;
  int min_size = 2;
  int max_size = 50;
  double tol = 1e-9;
};

std::vector<HypothesisClass> random_bernoulli_classes(std::uint64_t seed,
                                                      int classes, int min_size,
                                                      int max_size);

// Left-quantile criteria over a beta grid: error-optimal decisions must be
// quantile-optimal on every random class.
SuiteReport quantile_inclusion_suite(std::uint64_t seed,
                                     const SuiteOptions& opt = {},
                                     const std::vector<double>& beta_grid = {});

// Monotone dispersion criteria on the same random classes: equality for the
// exponential tilt, inclusion for the CVaR hinge and the Cressie-Read dual,
// equality for the Orlicz-regret criterion.
SuiteReport monotone_dispersion_suite(std::uint64_t seed,
                                      const SuiteOptions& opt = {});

// Variantile argmin sets must match the error argmin set, the argmax set, or
// tie; a strict mixture fails the suite.
SuiteReport variantile_extremes_suite(std::uint64_t seed,
                                      const SuiteOptions& opt = {},
                                      const std::vector<double>& taus = {});

// Constructed classes for the three CVaR regimes, with the implied verdicts.
SuiteReport cvar_regime_demo(double tol = 1e-9);

}  // namespace critlab
