#include "critlab/collapse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

#include "critlab/io.hpp"

namespace critlab {

namespace {

std::vector<std::string> sorted_ids_within(
    const std::vector<HypothesisEntry>& entries,
    const std::vector<double>& scores, double tol, bool take_max) {
  double best = take_max ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  for (double s : scores) best = take_max ? std::max(best, s) : std::min(best, s);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    double gap = take_max ? best - scores[i] : scores[i] - best;
    if (gap <= tol) ids.push_back(entries[i].id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool subset_of(const std::vector<std::string>& a,
               const std::vector<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

void require_errs(const HypothesisClass& cls, const char* who) {
  if (!cls.all_errs_present())
    throw std::invalid_argument(std::string(who) +
                                ": every entry needs an error probability");
}

}  // namespace

HypothesisClass::HypothesisClass(std::vector<HypothesisEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    throw std::invalid_argument("HypothesisClass: at least one entry required");
  std::set<std::string> seen;
  for (const auto& e : entries_) {
    if (!seen.insert(e.id).second)
      throw std::invalid_argument("HypothesisClass: duplicate id " + e.id);
    if (e.err && !(*e.err >= 0.0 && *e.err <= 1.0))
      throw std::invalid_argument("HypothesisClass: err outside [0,1] for " +
                                  e.id);
  }
}

HypothesisClass HypothesisClass::from_errs(const std::vector<double>& errs) {
  std::vector<std::pair<std::string, double>> labeled;
  labeled.reserve(errs.size());
  for (std::size_t i = 0; i < errs.size(); ++i)
    labeled.emplace_back("h" + std::to_string(i + 1), errs[i]);
  return from_labeled_errs(labeled);
}

HypothesisClass HypothesisClass::from_labeled_errs(
    const std::vector<std::pair<std::string, double>>& labeled) {
  std::vector<HypothesisEntry> entries;
  entries.reserve(labeled.size());
  for (const auto& [id, err] : labeled)
    entries.push_back({id, BernoulliSpec(err).to_empirical(), err});
  return HypothesisClass(std::move(entries));
}

bool HypothesisClass::all_errs_present() const {
  for (const auto& e : entries_)
    if (!e.err) return false;
  return true;
}

std::vector<std::string> argmin_set(const CriterionSpec& spec,
                                    const HypothesisClass& cls, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("argmin_set: tol must be > 0");
  std::vector<double> values;
  values.reserve(cls.size());
  for (const auto& e : cls.entries())
    values.push_back(eval_criterion(spec, e.dist).value);
  return sorted_ids_within(cls.entries(), values, tol, false);
}

std::vector<std::string> err_argmin_set(const HypothesisClass& cls, double tol) {
  require_errs(cls, "err_argmin_set");
  std::vector<double> errs;
  for (const auto& e : cls.entries()) errs.push_back(*e.err);
  return sorted_ids_within(cls.entries(), errs, tol, false);
}

std::vector<std::string> err_argmax_set(const HypothesisClass& cls, double tol) {
  require_errs(cls, "err_argmax_set");
  std::vector<double> errs;
  for (const auto& e : cls.entries()) errs.push_back(*e.err);
  return sorted_ids_within(cls.entries(), errs, tol, true);
}

bool CollapseReport::herr_disjoint_from_argmin() const {
  std::vector<std::string> common;
  std::set_intersection(herr_set.begin(), herr_set.end(),
                        criterion_argmin.begin(), criterion_argmin.end(),
                        std::back_inserter(common));
  return common.empty();
}

void CollapseReport::write_csv(std::ostream& os) const {
  os << "id,value,err\n";
  for (const auto& r : rows) {
    os << r.id << ',' << fmt_g9(r.value) << ',';
    if (r.err) os << fmt_g9(*r.err);
    os << '\n';
  }
}

void CollapseReport::write_text(std::ostream& os) const {
  os << "criterion: " << criterion_label << '\n';
  os << "tie_tolerance: " << fmt_g9(tie_tolerance) << '\n';
  os << "criterion_spread: " << fmt_g9(criterion_spread) << '\n';
  os << "herr_set:";
  for (const auto& id : herr_set) os << ' ' << id;
  os << '\n';
  os << "criterion_argmin:";
  for (const auto& id : criterion_argmin) os << ' ' << id;
  os << '\n';
  os << "herr_subset_argmin: " << (herr_in_argmin ? "true" : "false") << '\n';
  os << "argmin_subset_herr: " << (argmin_in_herr ? "true" : "false") << '\n';
  os << "equality: " << (equality ? "true" : "false") << '\n';
}

CollapseReport check_collapse(const CriterionSpec& spec,
                              const HypothesisClass& cls, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("check_collapse: tol must be > 0");
  require_errs(cls, "check_collapse");

  CollapseReport rep;
  rep.criterion_label = spec.label();
  rep.tie_tolerance = tol;

  std::vector<double> values;
  values.reserve(cls.size());
  for (const auto& e : cls.entries()) {
    double v = eval_criterion(spec, e.dist).value;
    values.push_back(v);
    rep.rows.push_back({e.id, v, e.err});
  }
  double vmin = *std::min_element(values.begin(), values.end());
  double vmax = *std::max_element(values.begin(), values.end());
  rep.criterion_spread = vmax - vmin;

  rep.criterion_argmin = sorted_ids_within(cls.entries(), values, tol, false);
  rep.herr_set = err_argmin_set(cls, tol);
  rep.herr_in_argmin = subset_of(rep.herr_set, rep.criterion_argmin);
  rep.argmin_in_herr = subset_of(rep.criterion_argmin, rep.herr_set);
  rep.equality = rep.herr_in_argmin && rep.argmin_in_herr;
  return rep;
}

const char* to_string(CvarRegime r) {
  switch (r) {
    case CvarRegime::trivial_all_optimal: return "trivial_all_optimal";
    case CvarRegime::coincide: return "coincide";
    case CvarRegime::intermediate: return "intermediate";
  }
  return "?";
}

CvarRegime cvar_regime(const HypothesisClass& cls, double beta) {
  require_errs(cls, "cvar_regime");
  double emin = 1.0, emax = 0.0;
  for (const auto& e : cls.entries()) {
    emin = std::min(emin, *e.err);
    emax = std::max(emax, *e.err);
  }
  if (emin > 1.0 - beta) return CvarRegime::trivial_all_optimal;
  if (emax <= 1.0 - beta) return CvarRegime::coincide;
  return CvarRegime::intermediate;
}

const char* to_string(VariantileExtreme t) {
  switch (t) {
    case VariantileExtreme::argmin_of_err: return "argmin_of_err";
    case VariantileExtreme::argmax_of_err: return "argmax_of_err";
    case VariantileExtreme::tie: return "tie";
  }
  return "?";
}

VariantileExtreme variantile_extremes(const HypothesisClass& cls, double tau,
                                      double tol) {
  require_errs(cls, "variantile_extremes");
  CriterionSpec spec = CriterionSpec::variantile(tau);
  std::vector<double> values;
  values.reserve(cls.size());
  for (const auto& e : cls.entries())
    values.push_back(eval_criterion(spec, e.dist).value);
  auto amin = sorted_ids_within(cls.entries(), values, tol, false);
  auto emin = err_argmin_set(cls, tol);
  auto emax = err_argmax_set(cls, tol);
  std::vector<std::string> both;
  std::set_union(emin.begin(), emin.end(), emax.begin(), emax.end(),
                 std::back_inserter(both));

  if (emin == emax) return VariantileExtreme::tie;
  if (amin == emin) return VariantileExtreme::argmin_of_err;
  if (amin == emax) return VariantileExtreme::argmax_of_err;
  if (amin == both) return VariantileExtreme::tie;
  double vmin = *std::min_element(values.begin(), values.end());
  double vmax = *std::max_element(values.begin(), values.end());
  if (vmax - vmin <= tol) return VariantileExtreme::tie;
  throw std::runtime_error(
      "variantile_extremes: argmin set is a strict mixture of error extremes");
}

const char* to_string(FixedFnExtreme t) {
  switch (t) {
    case FixedFnExtreme::err_minimizers: return "err_minimizers";
    case FixedFnExtreme::err_maximizers: return "err_maximizers";
    case FixedFnExtreme::constant: return "constant";
  }
  return "?";
}

FixedFnExtreme fixed_function_extremes(double f0, double f1,
                                       const HypothesisClass& cls) {
  require_errs(cls, "fixed_function_extremes");
  if (f1 > f0) return FixedFnExtreme::err_minimizers;
  if (f1 < f0) return FixedFnExtreme::err_maximizers;
  return FixedFnExtreme::constant;
}

}  // namespace critlab
