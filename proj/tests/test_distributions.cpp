#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "critlab/distributions.hpp"
#include "critlab/rng.hpp"
#include "doctest.h"

using critlab::BernoulliSpec;
using critlab::EmpiricalLossDist;
using critlab::Rng;

namespace {

EmpiricalLossDist random_dist(Rng& rng, int max_atoms = 12) {
  int n = 1 + static_cast<int>(rng.below(max_atoms));
  std::vector<double> values(n), weights(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    values[i] = rng.uniform(-2.0, 3.0);
    weights[i] = rng.uniform(0.01, 1.0);
    sum += weights[i];
  }
  for (auto& w : weights) w /= sum;
  return EmpiricalLossDist(values, weights);
}

// Piecewise left quantile of a zero-one distribution, straight from the CDF:
// 0 while beta stays at or below the mass at zero, 1 beyond it.
double bernoulli_left_quantile(double err, double beta) {
  return beta <= 1.0 - err ? 0.0 : 1.0;
}

}  // namespace

TEST_CASE("mean of weighted atoms") {
  CHECK(EmpiricalLossDist({0, 1}, {0.7, 0.3}).mean() == doctest::Approx(0.3));
  CHECK(EmpiricalLossDist({5}, {1}).mean() == 5.0);
  CHECK(EmpiricalLossDist({1, 2, 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}).mean() ==
        doctest::Approx(2.0));
}

TEST_CASE("left quantile on two-point and degenerate supports") {
  EmpiricalLossDist bern = BernoulliSpec(0.3).to_empirical();
  CHECK(bern.left_quantile(0.5) == 0.0);
  CHECK(bern.left_quantile(0.8) == 1.0);
  CHECK(bern.left_quantile(0.7) == 0.0);  // boundary beta = 1 - err stays low

  EmpiricalLossDist three({1, 2, 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(three.left_quantile(1.0) == 3.0);
  CHECK(three.left_quantile(0.0) == -std::numeric_limits<double>::infinity());

  CHECK_THROWS_AS(three.left_quantile(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(three.left_quantile(1.1), std::invalid_argument);
  CHECK_THROWS_AS(three.left_quantile(std::nan("")), std::invalid_argument);
}

TEST_CASE("right quantile") {
  EmpiricalLossDist bern = BernoulliSpec(0.3).to_empirical();
  CHECK(bern.right_quantile(0.0) == 0.0);
  CHECK(bern.right_quantile(0.9) == 1.0);
  CHECK(bern.right_quantile(0.7) == 1.0);  // boundary: P(L < 1) = 0.7 <= beta
  CHECK(bern.right_quantile(0.5) == 0.0);
  CHECK(bern.right_quantile(1.0) == std::numeric_limits<double>::infinity());

  EmpiricalLossDist point = EmpiricalLossDist::point_mass(5.0);
  CHECK(point.right_quantile(0.5) == 5.0);
  CHECK_THROWS_AS(point.right_quantile(1.5), std::invalid_argument);
}

TEST_CASE("zero-one distributions from error probabilities") {
  EmpiricalLossDist d0 = BernoulliSpec(0.0).to_empirical();
  CHECK(d0.values() == std::vector<double>{0.0});
  CHECK(d0.weights() == std::vector<double>{1.0});

  EmpiricalLossDist d1 = BernoulliSpec(1.0).to_empirical();
  CHECK(d1.values() == std::vector<double>{1.0});

  EmpiricalLossDist d = BernoulliSpec(0.25).to_empirical();
  CHECK(d.values() == std::vector<double>{0.0, 1.0});
  CHECK(d.weights()[0] == doctest::Approx(0.75));
  CHECK(d.weights()[1] == doctest::Approx(0.25));

  CHECK_THROWS_AS(BernoulliSpec(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(BernoulliSpec(1.1), std::invalid_argument);
}

TEST_CASE("construction validation") {
  CHECK_THROWS_AS(EmpiricalLossDist({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalLossDist({1.0}, {1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalLossDist({1.0}, {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalLossDist({1.0, 2.0}, {0.6, 0.6}),
                  std::invalid_argument);
  double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(EmpiricalLossDist({inf}, {1.0}), std::invalid_argument);

  // Weight noise within 1e-9 is normalized away.
  EmpiricalLossDist noisy({0.0, 1.0}, {0.5 + 4e-10, 0.5});
  double total = 0.0;
  for (double w : noisy.weights()) total += w;
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("ties merge and zero weights drop") {
  EmpiricalLossDist d({2.0, 1.0, 2.0, 7.0}, {0.25, 0.25, 0.5, 0.0});
  CHECK(d.values() == std::vector<double>{1.0, 2.0});
  CHECK(d.weights()[1] == doctest::Approx(0.75));
}

TEST_CASE("left quantile is monotone in beta and bounded by the support") {
  Rng rng(20240811);
  for (int rep = 0; rep < 50; ++rep) {
    EmpiricalLossDist d = random_dist(rng);
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 40; ++i) {
      double beta = i / 40.0;
      double q = d.left_quantile(beta);
      CHECK(q >= prev);
      CHECK(q >= d.min_value());
      CHECK(q <= d.max_value());
      prev = q;
    }
  }
}

TEST_CASE("two-point left quantile matches the piecewise closed form") {
  Rng rng(7);
  for (int rep = 0; rep < 200; ++rep) {
    double err = rng.unit();
    EmpiricalLossDist d = BernoulliSpec(err).to_empirical();
    for (int i = 1; i <= 20; ++i) {
      double beta = i / 20.0;
      CHECK(d.left_quantile(beta) == bernoulli_left_quantile(err, beta));
    }
  }
}

TEST_CASE("right quantile matches brute-force enumeration over the atoms") {
  // max{x : P(L < x) <= beta}; P(L < x) enumerated by direct summation.
  Rng rng(13);
  for (int rep = 0; rep < 100; ++rep) {
    EmpiricalLossDist d = random_dist(rng);
    for (int i = 0; i < 20; ++i) {
      double beta = i / 20.0;
      double best = -std::numeric_limits<double>::infinity();
      for (double x : d.values()) {
        double below = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k)
          if (d.values()[k] < x) below += d.weights()[k];
        if (below <= beta) best = std::max(best, x);
      }
      CHECK(d.right_quantile(beta) == best);
    }
  }
}

TEST_CASE("mean of a zero-one distribution recovers the error probability") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    double p = rng.unit();
    CHECK(BernoulliSpec(p).to_empirical().mean() ==
          doctest::Approx(p).epsilon(1e-14));
  }
}
