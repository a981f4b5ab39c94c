#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "critlab/collapse.hpp"
#include "critlab/criteria.hpp"
#include "critlab/distributions.hpp"
#include "critlab/rho.hpp"

namespace critlab {

// sign with the convention sign(0) = +1, used everywhere a score is turned
// into a label.
inline int sign_pm(double u) { return u >= 0.0 ? 1 : -1; }

struct MarginFlags {
  bool convex = false;
  bool calibrated = false;      // phi'(0) < 0
  bool nonincreasing = false;
  bool unbounded_above = false;
};

/*
 * Penalty applied to classification margins y*s(x).
 * Catalog: logistic log(1+e^{-u}), exponential e^{-u}, hinge max(0,1-u),
 * quadratic (1-u)^2, arcx4 |1-u|^5, and the zero-one indicator of a negative
 * margin.
 */
class MarginPenalty {
 public:
  enum class Kind { logistic, exponential, hinge, quadratic, arcx4, zero_one };

  static MarginPenalty logistic();
  static MarginPenalty exponential();
  static MarginPenalty hinge();
  static MarginPenalty quadratic();
  static MarginPenalty arcx4();
  static MarginPenalty zero_one();
  static MarginPenalty from_name(const std::string& name);

  double operator()(double u) const;
  double eval(double u) const { return (*this)(u); }
  double deriv(double u) const;

  Kind kind() const { return kind_; }
  const MarginFlags& flags() const { return flags_; }
  const std::string& name() const { return name_; }

 private:
  MarginPenalty(Kind k, std::string name, MarginFlags flags)
      : kind_(k), name_(std::move(name)), flags_(flags) {}
  Kind kind_;
  std::string name_;
  MarginFlags flags_;
};

enum class Scorer { s1, s2 };  // s1(v1,v2) = v2 - v1, s2 = -s1
const char* to_string(Scorer s);

/*
 * Three-atom planar example: (-1,1) and (1,-1) carry weight p/2 each,
 * (a,-a) carries weight 1-p, with labels set by the radius/order rule
 * Y = sign(sqrt(2) - |X|) * sign(V2 - V1). The two linear scorers s1, s2
 * disagree everywhere; err(s1) = 1-p and err(s2) = p.
 */
struct ThreePointExample {
  double a;
  double p;
  ThreePointExample(double a_scale, double p_weight);

  struct Atom {
    double x1, x2, weight;
    int label;  // +1 / -1
  };
  std::array<Atom, 3> atoms() const;
  double score(Scorer s, double x1, double x2) const;
  double err(Scorer s) const;
  // Logistic losses of the chosen scorer, as a two-point distribution.
  EmpiricalLossDist surrogate_dist(Scorer s) const;
};

struct DivergenceReport {
  double a = 0, p = 0;
  struct Row {
    std::string criterion;
    double value_s1, value_s2;
    Scorer winner;
  };
  std::vector<Row> rows;
  double max_s1 = 0, max_s2 = 0, min_s1 = 0, min_s2 = 0;
  bool max_ordering = false;  // max loss of s2 < max loss of s1
  bool min_ordering = false;  // min loss of s2 < min loss of s1
  void write_csv(std::ostream& os) const;
  void write_text(std::ostream& os) const;
};

// Requires p > 1/2 so the expected-loss and error-probability winners can be
// pitted against tail-sensitive criteria.
DivergenceReport divergence_report(const ThreePointExample& ex,
                                   const std::vector<CriterionSpec>& specs);

/*
 * Finite input space with conditional label probabilities
 * beta(x) = P{Y = 1 | X = x}.
 */
struct DiscreteProblem {
  struct Point {
    std::string id;
    double mass;
    double beta;
  };
  std::vector<Point> points;
  explicit DiscreteProblem(std::vector<Point> pts);
  double bayes_err() const;
  bool realizable() const;  // every beta is exactly 0 or 1
};

struct BayesCheckResult {
  double achieved_err = 0;
  double bayes_err = 0;
  double objective = 0;
  double theta = 0;
  int sweeps = 0;
  std::vector<double> scores;
};

/*
 * Minimizes the OCE of phi(Y s(X)) jointly over the per-point scores and the
 * OCE threshold by cyclic coordinate descent (each conditional problem is
 * convex), then reports the trained classifier's error next to the Bayes
 * error. Requires an increasing rho and a calibrated convex phi; at most
 * eight points.
 */
BayesCheckResult oce_bayes_check(const DiscreteProblem& problem,
                                 const MarginPenalty& phi,
                                 const DispersionFunction& rho,
                                 long budget = 10000);

struct RestraintWitness {
  double theta = 0;
  double rescale = 1;  // the +-b magnitude used by the inner construction
  HypothesisClass witness_class;
  CollapseReport report;
};

/*
 * On a realizable problem, builds a two-hypothesis class on which the
 * error-optimal hypothesis is strictly suboptimal for the mean-restraining
 * criterion: the suboptimal scorer is rescaled to +-b until its expected
 * loss exceeds phi(0), and the threshold is set to that expected loss.
 * Requires a nonincreasing phi unbounded above.
 */
RestraintWitness inner_restraint_witness(const DiscreteProblem& problem,
                                         const MarginPenalty& phi,
                                         const DispersionFunction& rho_tilde);

// Same conclusion for the concentration criterion: the sign-flipped
// unit-magnitude scorer has all losses at phi(-1), so with theta = phi(-1)
// it scores exactly zero while every error-optimal hypothesis scores more.
RestraintWitness outer_restraint_witness(const DiscreteProblem& problem,
                                         const MarginPenalty& phi,
                                         const DispersionFunction& rho_tilde);

}  // namespace critlab
