#include "critlab/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "critlab/io.hpp"
#include "critlab/scalar_opt.hpp"

namespace critlab {

namespace {

// log(1 + e^{-u}) without overflow on either tail.
double logistic_loss(double u) {
  return u >= 0.0 ? std::log1p(std::exp(-u)) : -u + std::log1p(std::exp(u));
}

constexpr double kCoordLo = -6.0;
constexpr double kCoordHi = 6.0;
constexpr double kGoldenTol = 1e-10;

}  // namespace

MarginPenalty MarginPenalty::logistic() {
  return MarginPenalty(Kind::logistic, "logistic", {true, true, true, true});
}
MarginPenalty MarginPenalty::exponential() {
  return MarginPenalty(Kind::exponential, "exponential", {true, true, true, true});
}
MarginPenalty MarginPenalty::hinge() {
  return MarginPenalty(Kind::hinge, "hinge", {true, true, true, true});
}
MarginPenalty MarginPenalty::quadratic() {
  return MarginPenalty(Kind::quadratic, "quadratic", {true, true, false, false});
}
MarginPenalty MarginPenalty::arcx4() {
  return MarginPenalty(Kind::arcx4, "arcx4", {true, true, false, false});
}
MarginPenalty MarginPenalty::zero_one() {
  return MarginPenalty(Kind::zero_one, "zero-one", {false, false, false, false});
}

MarginPenalty MarginPenalty::from_name(const std::string& name) {
  if (name == "logistic") return logistic();
  if (name == "exponential") return exponential();
  if (name == "hinge") return hinge();
  if (name == "quadratic") return quadratic();
  if (name == "arcx4") return arcx4();
  if (name == "zero-one") return zero_one();
  throw std::invalid_argument("unknown margin penalty: " + name);
}

double MarginPenalty::operator()(double u) const {
  switch (kind_) {
    case Kind::logistic: return logistic_loss(u);
    case Kind::exponential: return std::exp(-u);
    case Kind::hinge: return u < 1.0 ? 1.0 - u : 0.0;
    case Kind::quadratic: return (1.0 - u) * (1.0 - u);
    case Kind::arcx4: return std::pow(std::abs(1.0 - u), 5.0);
    case Kind::zero_one: return u < 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double MarginPenalty::deriv(double u) const {
  switch (kind_) {
    case Kind::logistic: return -1.0 / (1.0 + std::exp(u));
    case Kind::exponential: return -std::exp(-u);
    case Kind::hinge: return u < 1.0 ? -1.0 : 0.0;
    case Kind::quadratic: return -2.0 * (1.0 - u);
    case Kind::arcx4: {
      double t = 1.0 - u;
      return -5.0 * std::abs(t) * t * t * t;  // -5 |1-u|^3 (1-u)
    }
    case Kind::zero_one: return 0.0;
  }
  return 0.0;
}

const char* to_string(Scorer s) { return s == Scorer::s1 ? "s1" : "s2"; }

ThreePointExample::ThreePointExample(double a_scale, double p_weight)
    : a(a_scale), p(p_weight) {
  if (!(a > 1.0)) throw std::invalid_argument("ThreePointExample: a must be > 1");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("ThreePointExample: p must lie in (0,1)");
}

std::array<ThreePointExample::Atom, 3> ThreePointExample::atoms() const {
  std::array<Atom, 3> out{{{-1.0, 1.0, p / 2.0, 0},
                           {1.0, -1.0, p / 2.0, 0},
                           {a, -a, 1.0 - p, 0}}};
  for (auto& atom : out) {
    // Compare squared norms so the boundary atoms land exactly on zero.
    double radius_term = 2.0 - (atom.x1 * atom.x1 + atom.x2 * atom.x2);
    atom.label = sign_pm(radius_term) * sign_pm(atom.x2 - atom.x1);
  }
  return out;
}

double ThreePointExample::score(Scorer s, double x1, double x2) const {
  double v = x2 - x1;
  return s == Scorer::s1 ? v : -v;
}

double ThreePointExample::err(Scorer s) const {
  double e = 0.0;
  for (const auto& atom : atoms())
    if (sign_pm(score(s, atom.x1, atom.x2)) != atom.label) e += atom.weight;
  return e;
}

EmpiricalLossDist ThreePointExample::surrogate_dist(Scorer s) const {
  std::vector<double> values, weights;
  for (const auto& atom : atoms()) {
    double margin = atom.label * score(s, atom.x1, atom.x2);
    values.push_back(logistic_loss(margin));
    weights.push_back(atom.weight);
  }
  return EmpiricalLossDist(std::move(values), std::move(weights));
}

void DivergenceReport::write_csv(std::ostream& os) const {
  os << "criterion,value_s1,value_s2,winner\n";
  for (const auto& r : rows)
    os << r.criterion << ',' << fmt_g9(r.value_s1) << ',' << fmt_g9(r.value_s2)
       << ',' << to_string(r.winner) << '\n';
}

void DivergenceReport::write_text(std::ostream& os) const {
  os << "a = " << fmt_g9(a) << ", p = " << fmt_g9(p) << '\n';
  os << "criterion                      s1             s2             winner\n";
  for (const auto& r : rows) {
    std::string c = r.criterion;
    c.resize(30, ' ');
    std::string v1 = fmt_g9(r.value_s1);
    v1.resize(14, ' ');
    std::string v2 = fmt_g9(r.value_s2);
    v2.resize(14, ' ');
    os << c << ' ' << v1 << ' ' << v2 << ' ' << to_string(r.winner) << '\n';
  }
  os << "max loss: s2 " << fmt_g9(max_s2) << (max_ordering ? " < " : " >= ")
     << "s1 " << fmt_g9(max_s1) << '\n';
  os << "min loss: s2 " << fmt_g9(min_s2) << (min_ordering ? " < " : " >= ")
     << "s1 " << fmt_g9(min_s1) << '\n';
}

DivergenceReport divergence_report(const ThreePointExample& ex,
                                   const std::vector<CriterionSpec>& specs) {
  if (!(ex.p > 0.5))
    throw std::invalid_argument("divergence_report: requires p > 1/2");
  DivergenceReport rep;
  rep.a = ex.a;
  rep.p = ex.p;
  EmpiricalLossDist d1 = ex.surrogate_dist(Scorer::s1);
  EmpiricalLossDist d2 = ex.surrogate_dist(Scorer::s2);
  for (const auto& spec : specs) {
    double v1 = eval_criterion(spec, d1).value;
    double v2 = eval_criterion(spec, d2).value;
    rep.rows.push_back(
        {spec.label(), v1, v2, v1 <= v2 ? Scorer::s1 : Scorer::s2});
  }
  rep.max_s1 = d1.max_value();
  rep.max_s2 = d2.max_value();
  rep.min_s1 = d1.min_value();
  rep.min_s2 = d2.min_value();
  rep.max_ordering = rep.max_s2 < rep.max_s1;
  rep.min_ordering = rep.min_s2 < rep.min_s1;
  return rep;
}

DiscreteProblem::DiscreteProblem(std::vector<Point> pts) : points(std::move(pts)) {
  if (points.empty())
    throw std::invalid_argument("DiscreteProblem: at least one point");
  double total = 0.0;
  for (const auto& pt : points) {
    if (!(pt.mass >= 0.0))
      throw std::invalid_argument("DiscreteProblem: negative mass");
    if (!(pt.beta >= 0.0 && pt.beta <= 1.0))
      throw std::invalid_argument("DiscreteProblem: beta outside [0,1]");
    total += pt.mass;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("DiscreteProblem: masses must sum to 1");
  for (auto& pt : points) pt.mass /= total;
}

double DiscreteProblem::bayes_err() const {
  double e = 0.0;
  for (const auto& pt : points) e += pt.mass * std::min(pt.beta, 1.0 - pt.beta);
  return e;
}

bool DiscreteProblem::realizable() const {
  for (const auto& pt : points)
    if (pt.beta != 0.0 && pt.beta != 1.0) return false;
  return true;
}

BayesCheckResult oce_bayes_check(const DiscreteProblem& problem,
                                 const MarginPenalty& phi,
                                 const DispersionFunction& rho, long budget) {
  if (!rho.flags().increasing)
    throw std::invalid_argument("oce_bayes_check: rho must be increasing");
  if (!(phi.flags().calibrated && phi.flags().convex))
    throw std::invalid_argument(
        "oce_bayes_check: phi must be calibrated and convex");
  if (problem.points.size() > 8)
    throw std::invalid_argument("oce_bayes_check: at most eight points");

  const std::size_t k = problem.points.size();
  std::vector<double> scores(k, 0.0);
  double theta = 0.0;

  auto point_term = [&](std::size_t i, double u, double th) {
    const auto& pt = problem.points[i];
    return pt.mass * (pt.beta * rho(phi(u) - th) +
                      (1.0 - pt.beta) * rho(phi(-u) - th));
  };
  auto objective = [&](double th) {
    double s = th;
    for (std::size_t i = 0; i < k; ++i) s += point_term(i, scores[i], th);
    return s;
  };

  double obj = objective(theta);
  int sweeps = 0;
  for (long sweep = 0; sweep < budget; ++sweep) {
    ++sweeps;
    // Threshold step over the hull of the current losses.
    double lmin = phi(scores[0]), lmax = lmin;
    for (std::size_t i = 0; i < k; ++i) {
      lmin = std::min({lmin, phi(scores[i]), phi(-scores[i])});
      lmax = std::max({lmax, phi(scores[i]), phi(-scores[i])});
    }
    theta = golden_section_min(objective, lmin - 1.0, lmax + 1.0, kGoldenTol)
                .argmin;
    // One pass over the score coordinates.
    for (std::size_t i = 0; i < k; ++i) {
      scores[i] = golden_section_min(
                      [&](double u) { return point_term(i, u, theta); },
                      kCoordLo, kCoordHi, kGoldenTol)
                      .argmin;
    }
    double next = objective(theta);
    double drop = obj - next;
    obj = next;
    if (drop < 1e-10 * std::max(1.0, std::abs(obj))) break;
  }

  BayesCheckResult res;
  res.bayes_err = problem.bayes_err();
  double err = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& pt = problem.points[i];
    err += pt.mass * (sign_pm(scores[i]) == 1 ? 1.0 - pt.beta : pt.beta);
  }
  res.achieved_err = err;
  res.objective = obj;
  res.theta = theta;
  res.sweeps = sweeps;
  res.scores = std::move(scores);
  return res;
}

namespace {

void require_witness_inputs(const DiscreteProblem& problem,
                            const MarginPenalty& phi) {
  if (!problem.realizable())
    throw std::invalid_argument(
        "restraint witness: problem must be realizable (every beta 0 or 1)");
  bool has_pos = false, has_neg = false;
  for (const auto& pt : problem.points) {
    if (pt.beta == 1.0) has_pos = true;
    if (pt.beta == 0.0) has_neg = true;
  }
  if (!(has_pos && has_neg))
    throw std::invalid_argument(
        "restraint witness: need points on both sides of the boundary");
  if (!(phi.flags().nonincreasing && phi.flags().unbounded_above))
    throw std::invalid_argument(
        "restraint witness: phi must be nonincreasing and unbounded above");
}

// Loss distribution of a scorer on a realizable problem, with the error rate.
EmpiricalLossDist scorer_loss_dist(const DiscreteProblem& problem,
                                   const MarginPenalty& phi,
                                   const std::vector<double>& scores,
                                   double* err_out) {
  std::vector<double> values, weights;
  double err = 0.0;
  for (std::size_t i = 0; i < problem.points.size(); ++i) {
    const auto& pt = problem.points[i];
    int label = pt.beta == 1.0 ? 1 : -1;
    values.push_back(phi(label * scores[i]));
    weights.push_back(pt.mass);
    if (sign_pm(scores[i]) != label) err += pt.mass;
  }
  if (err_out) *err_out = err;
  return EmpiricalLossDist(std::move(values), std::move(weights));
}

}  // namespace

RestraintWitness inner_restraint_witness(const DiscreteProblem& problem,
                                         const MarginPenalty& phi,
                                         const DispersionFunction& rho_tilde) {
  require_witness_inputs(problem, phi);
  const std::size_t k = problem.points.size();

  std::vector<double> star(k);
  for (std::size_t i = 0; i < k; ++i)
    star[i] = problem.points[i].beta == 1.0 ? 1.0 : -1.0;
  double err_star = 0.0;
  EmpiricalLossDist dist_star = scorer_loss_dist(problem, phi, star, &err_star);

  // Error-suboptimal scorer: flip the first point, then rescale to +-b until
  // its expected loss clears phi(0).
  std::vector<double> flipped = star;
  flipped[0] = -flipped[0];
  double b = 1.0;
  double err_tilde = 0.0;
  EmpiricalLossDist dist_tilde = EmpiricalLossDist::point_mass(0.0);
  while (true) {
    std::vector<double> scaled(k);
    for (std::size_t i = 0; i < k; ++i) scaled[i] = b * flipped[i];
    dist_tilde = scorer_loss_dist(problem, phi, scaled, &err_tilde);
    if (dist_tilde.mean() > phi(0.0)) break;
    b *= 2.0;
    if (b > 1.15292150460684698e18)  // 2^60
      throw std::runtime_error(
          "inner_restraint_witness: rescale search failed; phi is not "
          "unbounded above on negative margins");
  }

  double theta = dist_tilde.mean();
  HypothesisClass cls({{"h_star", dist_star, err_star},
                       {"h_tilde", dist_tilde, err_tilde}});
  auto report =
      check_collapse(CriterionSpec::inner_restrain(rho_tilde, theta), cls, 1e-9);
  return {theta, b, std::move(cls), std::move(report)};
}

RestraintWitness outer_restraint_witness(const DiscreteProblem& problem,
                                         const MarginPenalty& phi,
                                         const DispersionFunction& rho_tilde) {
  require_witness_inputs(problem, phi);
  const std::size_t k = problem.points.size();

  std::vector<double> star(k), flipped(k);
  for (std::size_t i = 0; i < k; ++i) {
    star[i] = problem.points[i].beta == 1.0 ? 1.0 : -1.0;
    flipped[i] = -star[i];
  }
  double err_star = 0.0, err_flip = 0.0;
  EmpiricalLossDist dist_star = scorer_loss_dist(problem, phi, star, &err_star);
  EmpiricalLossDist dist_flip =
      scorer_loss_dist(problem, phi, flipped, &err_flip);

  double theta = phi(-1.0);
  HypothesisClass cls({{"h_star", dist_star, err_star},
                       {"h_tilde_star", dist_flip, err_flip}});
  auto report =
      check_collapse(CriterionSpec::outer_restrain(rho_tilde, theta), cls, 1e-9);
  return {theta, 1.0, std::move(cls), std::move(report)};
}

}  // namespace critlab
