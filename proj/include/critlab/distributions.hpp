#pragma once

#include <cstddef>
#include <vector>

namespace critlab {

/*
 * Finite weighted set of real loss values.
 *
 * Atoms are canonicalized at construction: sorted, ties merged, zero-weight
 * atoms dropped, weights normalized. Construction accepts weight sums within
 * 1e-9 of one and rejects anything worse; after normalization the cumulative
 * weight of the last atom is pinned to exactly one so quantile lookups at
 * beta = 1 behave. Instances are immutable and safe to share across threads.
 */
class EmpiricalLossDist {
 public:
  EmpiricalLossDist(std::vector<double> values, std::vector<double> weights);

  static EmpiricalLossDist point_mass(double value);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return values_.size(); }
  double min_value() const { return values_.front(); }
  double max_value() const { return values_.back(); }

  double mean() const;

  // min{x : P(L <= x) >= beta} for beta in (0,1]; beta = 0 gives -infinity.
  double left_quantile(double beta) const;

  // max{x : P(L < x) <= beta} for beta in [0,1); beta = 1 gives +infinity.
  double right_quantile(double beta) const;

 private:
  std::vector<double> values_;   // strictly increasing
  std::vector<double> weights_;  // positive, sum to one
  std::vector<double> cum_;      // cumulative weights; cum_.back() == 1
};

// Zero-one loss distribution identified by its error probability.
struct BernoulliSpec {
  double p = 0.0;
  explicit BernoulliSpec(double p_value);
  EmpiricalLossDist to_empirical() const;
};

// {0 w.p. 1-p, 1 w.p. p}; degenerate p in {0,1} yields a one-point mass.
EmpiricalLossDist bernoulli_to_empirical(const BernoulliSpec& spec);

}  // namespace critlab
