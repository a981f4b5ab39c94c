#include "critlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace critlab {

EmpiricalLossDist::EmpiricalLossDist(std::vector<double> values,
                                     std::vector<double> weights) {
  if (values.empty() || values.size() != weights.size())
    throw std::invalid_argument(
        "EmpiricalLossDist: values and weights must have equal length >= 1");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw std::invalid_argument("EmpiricalLossDist: non-finite loss value");
    if (!(weights[i] >= 0.0))
      throw std::invalid_argument("EmpiricalLossDist: negative weight");
    sum += weights[i];
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("EmpiricalLossDist: weights sum to " +
                                std::to_string(sum) + ", not 1");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });

  // Merge ties, drop zero-weight atoms, normalize.
  for (std::size_t k : order) {
    double w = weights[k] / sum;
    if (w == 0.0) continue;
    if (!values_.empty() && values_.back() == values[k]) {
      weights_.back() += w;
    } else {
      values_.push_back(values[k]);
      weights_.push_back(w);
    }
  }
  if (values_.empty())
    throw std::invalid_argument("EmpiricalLossDist: all weights are zero");

  cum_.resize(weights_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    acc += weights_[i];
    cum_[i] = acc;
  }
  cum_.back() = 1.0;
}

EmpiricalLossDist EmpiricalLossDist::point_mass(double value) {
  return EmpiricalLossDist({value}, {1.0});
}

double EmpiricalLossDist::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m += weights_[i] * values_[i];
  return m;
}

double EmpiricalLossDist::left_quantile(double beta) const {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("left_quantile: beta outside [0,1]");
  if (beta == 0.0) return -std::numeric_limits<double>::infinity();
  if (beta == 1.0) return values_.back();
  auto it = std::lower_bound(cum_.begin(), cum_.end(), beta);
  return values_[static_cast<std::size_t>(it - cum_.begin())];
}

double EmpiricalLossDist::right_quantile(double beta) const {
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("right_quantile: beta outside [0,1]");
  if (beta == 1.0) return std::numeric_limits<double>::infinity();
  // Count atoms whose cumulative weight sits at or below beta; the next atom
  // is the largest x with P(L < x) <= beta.
  auto it = std::upper_bound(cum_.begin(), cum_.end(), beta);
  return values_[static_cast<std::size_t>(it - cum_.begin())];
}

BernoulliSpec::BernoulliSpec(double p_value) : p(p_value) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("BernoulliSpec: p outside [0,1]");
}

EmpiricalLossDist BernoulliSpec::to_empirical() const {
  if (p == 0.0) return EmpiricalLossDist({0.0}, {1.0});
  if (p == 1.0) return EmpiricalLossDist({1.0}, {1.0});
  return EmpiricalLossDist({0.0, 1.0}, {1.0 - p, p});
}

EmpiricalLossDist bernoulli_to_empirical(const BernoulliSpec& spec) {
  return spec.to_empirical();
}

}  // namespace critlab
