#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "critlab/criteria.hpp"
#include "critlab/distributions.hpp"

namespace critlab {

struct HypothesisEntry {
  std::string id;
  EmpiricalLossDist dist;
  // Error probability, when known. Zero-one classes built from error rates
  // carry the matching two-point distribution; classes built from surrogate
  // losses carry the surrogate distribution alongside the known error rate.
  std::optional<double> err;
};

class HypothesisClass {
 public:
  explicit HypothesisClass(std::vector<HypothesisEntry> entries);

  // ids h1..hn, dists the matching zero-one distributions.
  static HypothesisClass from_errs(const std::vector<double>& errs);
  static HypothesisClass from_labeled_errs(
      const std::vector<std::pair<std::string, double>>& labeled);

  const std::vector<HypothesisEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool all_errs_present() const;

 private:
  std::vector<HypothesisEntry> entries_;
};

// ids whose criterion value lies within tol of the class minimum, sorted.
std::vector<std::string> argmin_set(const CriterionSpec& spec,
                                    const HypothesisClass& cls, double tol);

// ids whose error probability lies within tol of the class minimum, sorted.
std::vector<std::string> err_argmin_set(const HypothesisClass& cls, double tol);
std::vector<std::string> err_argmax_set(const HypothesisClass& cls, double tol);

struct CollapseReport {
  std::string criterion_label;
  std::vector<std::string> herr_set;
  std::vector<std::string> criterion_argmin;
  bool herr_in_argmin = false;   // error-optimal decisions are criterion-optimal
  bool argmin_in_herr = false;   // criterion-optimal decisions are error-optimal
  bool equality = false;
  double tie_tolerance = 0.0;
  double criterion_spread = 0.0;  // max - min criterion value over the class
  struct Row {
    std::string id;
    double value;
    std::optional<double> err;
  };
  std::vector<Row> rows;

  bool herr_disjoint_from_argmin() const;
  void write_csv(std::ostream& os) const;    // id,value,err
  void write_text(std::ostream& os) const;   // line-oriented summary
};

// Requires an error probability on every entry; the criterion is evaluated
// on the stored distributions, which may be zero-one or surrogate.
CollapseReport check_collapse(const CriterionSpec& spec,
                              const HypothesisClass& cls, double tol = 1e-9);

enum class CvarRegime { trivial_all_optimal, coincide, intermediate };
const char* to_string(CvarRegime r);
CvarRegime cvar_regime(const HypothesisClass& cls, double beta);

enum class VariantileExtreme { argmin_of_err, argmax_of_err, tie };
const char* to_string(VariantileExtreme t);
VariantileExtreme variantile_extremes(const HypothesisClass& cls, double tau,
                                      double tol = 1e-9);

enum class FixedFnExtreme { err_minimizers, err_maximizers, constant };
const char* to_string(FixedFnExtreme t);
FixedFnExtreme fixed_function_extremes(double f0, double f1,
                                       const HypothesisClass& cls);

}  // namespace critlab
