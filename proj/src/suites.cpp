#include "critlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "critlab/io.hpp"
#include "critlab/rng.hpp"

namespace critlab {

namespace {

std::string id_join(const std::vector<std::string>& ids) {
  return join(ids, "|");
}

void note_failure(SuiteCheck& chk, const std::string& line) {
  if (chk.notes.size() < 20) chk.notes.push_back(line);
}

}  // namespace

bool SuiteReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass()) return false;
  return true;
}

long SuiteReport::total_checks() const {
  long t = 0;
  for (const auto& c : checks) t += c.total;
  return t;
}

void SuiteReport::write_csv(std::ostream& os) const {
  os << "check,total,failures,verdict\n";
  for (const auto& c : checks)
    os << c.name << ',' << c.total << ',' << c.failures << ','
       << (c.pass() ? "pass" : "fail") << '\n';
}

void SuiteReport::write_text(std::ostream& os) const {
  os << "suite: " << suite << "\nseed: " << seed << "\ntolerance: " << fmt_g9(tol)
     << '\n';
  for (const auto& c : checks) {
    os << (c.pass() ? "PASS " : "FAIL ") << c.name << " (" << c.total
       << " checks, " << c.failures << " failures)\n";
    for (const auto& n : c.notes) os << "  " << n << '\n';
  }
}

std::vector<HypothesisClass> random_bernoulli_classes(std::uint64_t seed,
                                                      int classes, int min_size,
                                                      int max_size) {
  Rng rng(seed);
  std::vector<HypothesisClass> out;
  out.reserve(static_cast<std::size_t>(classes));
  for (int k = 0; k < classes; ++k) {
    int n = min_size +
            static_cast<int>(rng.below(static_cast<std::uint64_t>(max_size - min_size + 1)));
    std::vector<double> errs(static_cast<std::size_t>(n));
    for (auto& e : errs) e = rng.unit();
    out.push_back(HypothesisClass::from_errs(errs));
  }
  return out;
}

SuiteReport quantile_inclusion_suite(std::uint64_t seed, const SuiteOptions& opt,
                                     const std::vector<double>& beta_grid) {
  std::vector<double> betas = beta_grid;
  if (betas.empty())
    for (int i = 1; i <= 19; ++i) betas.push_back(0.05 * i);

  SuiteReport rep;
  rep.suite = "quantile-inclusion";
  rep.seed = seed;
  rep.tol = opt.tol;
  SuiteCheck chk;
  chk.name = "herr_subset_of_quantile_argmin";

  auto classes = random_bernoulli_classes(seed, opt.classes, opt.min_size,
                                          opt.max_size);
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    for (double beta : betas) {
      ++chk.total;
      auto r = check_collapse(CriterionSpec::quantile(beta), classes[ci], opt.tol);
      if (!r.herr_in_argmin) {
        ++chk.failures;
        note_failure(chk, "class " + std::to_string(ci) + " beta " +
                              fmt_g9(beta) + ": herr " + id_join(r.herr_set) +
                              " not within argmin " +
                              id_join(r.criterion_argmin));
      }
    }
  }
  rep.checks.push_back(std::move(chk));
  return rep;
}

SuiteReport monotone_dispersion_suite(std::uint64_t seed,
                                      const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "monotone-dispersion";
  rep.seed = seed;
  rep.tol = opt.tol;

  auto classes = random_bernoulli_classes(seed, opt.classes, opt.min_size,
                                          opt.max_size);

  struct Case {
    std::string name;
    CriterionSpec spec;
    bool needs_equality;
  };
  std::vector<Case> cases;
  for (double g : {0.5, 1.0, 2.0})
    cases.push_back({"oce_tilt_equality(gamma=" + fmt_g9(g) + ")",
                     CriterionSpec::oce(DispersionFunction::exp_tilt(g)), true});
  for (double b : {0.3, 0.7})
    cases.push_back({"oce_cvar_inclusion(beta=" + fmt_g9(b) + ")",
                     CriterionSpec::oce(DispersionFunction::cvar_hinge(b)),
                     false});
  for (double e : {0.1, 0.5})
    cases.push_back({"cressie_read_inclusion(eps=" + fmt_g9(e) + ")",
                     CriterionSpec::cressie_read_dro(2.0, e), false});
  cases.push_back({"orlicz_equality(eps=0.1)", CriterionSpec::orlicz(0.1), true});

  for (const auto& c : cases) {
    SuiteCheck chk;
    chk.name = c.name;
    for (std::size_t ci = 0; ci < classes.size(); ++ci) {
      ++chk.total;
      auto r = check_collapse(c.spec, classes[ci], opt.tol);
      bool ok = c.needs_equality ? r.equality : r.herr_in_argmin;
      if (!ok) {
        ++chk.failures;
        note_failure(chk, "class " + std::to_string(ci) + ": herr " +
                              id_join(r.herr_set) + " argmin " +
                              id_join(r.criterion_argmin));
      }
    }
    rep.checks.push_back(std::move(chk));
  }
  return rep;
}

SuiteReport variantile_extremes_suite(std::uint64_t seed,
                                      const SuiteOptions& opt,
                                      const std::vector<double>& taus_in) {
  std::vector<double> taus = taus_in;
  if (taus.empty())
    for (int i = 1; i <= 9; ++i) taus.push_back(0.1 * i);

  SuiteReport rep;
  rep.suite = "variantile-extremes";
  rep.seed = seed;
  rep.tol = opt.tol;
  SuiteCheck chk;
  chk.name = "variantile_argmin_is_an_error_extreme";

  auto classes = random_bernoulli_classes(seed, opt.classes, opt.min_size,
                                          opt.max_size);
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    for (double tau : taus) {
      ++chk.total;
      try {
        (void)variantile_extremes(classes[ci], tau, opt.tol);
      } catch (const std::exception& ex) {
        ++chk.failures;
        note_failure(chk, "class " + std::to_string(ci) + " tau " + fmt_g9(tau) +
                              ": " + ex.what());
      }
    }
  }
  rep.checks.push_back(std::move(chk));
  return rep;
}

SuiteReport cvar_regime_demo(double tol) {
  SuiteReport rep;
  rep.suite = "cvar-regimes";
  rep.seed = 0;
  rep.tol = tol;

  struct Demo {
    std::string name;
    std::vector<double> errs;
    double beta;
    CvarRegime expected;
  };
  // min err > 1-beta forces a constant criterion; max err <= 1-beta makes the
  // solution sets coincide; anything else is in between.
  std::vector<Demo> demos = {
      {"trivial_all_optimal", {0.4, 0.5, 0.6}, 0.7, CvarRegime::trivial_all_optimal},
      {"coincide", {0.1, 0.2, 0.3}, 0.5, CvarRegime::coincide},
      {"intermediate", {0.1, 0.6}, 0.5, CvarRegime::intermediate},
  };

  for (const auto& d : demos) {
    SuiteCheck chk;
    chk.name = "regime_" + d.name;
    auto cls = HypothesisClass::from_errs(d.errs);
    ++chk.total;
    CvarRegime got = cvar_regime(cls, d.beta);
    if (got != d.expected) {
      ++chk.failures;
      note_failure(chk, std::string("verdict ") + to_string(got) + " expected " +
                            to_string(d.expected));
    }
    auto rpt = check_collapse(CriterionSpec::cvar(d.beta), cls, tol);
    if (d.expected == CvarRegime::trivial_all_optimal) {
      ++chk.total;
      if (!(rpt.criterion_spread < 1e-9)) {
        ++chk.failures;
        note_failure(chk, "criterion spread " + fmt_g9(rpt.criterion_spread) +
                              " not < 1e-9 in the trivial regime");
      }
    }
    if (d.expected == CvarRegime::coincide) {
      ++chk.total;
      if (!rpt.equality) {
        ++chk.failures;
        note_failure(chk, "coincide regime without argmin equality");
      }
    }
    rep.checks.push_back(std::move(chk));
  }
  return rep;
}

}  // namespace critlab
