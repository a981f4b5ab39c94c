#include "critlab/train.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "critlab/io.hpp"
#include "critlab/rho.hpp"
#include "critlab/rng.hpp"

namespace critlab {

Method method_from_name(const std::string& name) {
  if (name == "erm") return Method::erm;
  if (name == "tilted") return Method::tilted;
  if (name == "cvar") return Method::cvar;
  if (name == "dro") return Method::dro;
  if (name == "flooding") return Method::flooding;
  if (name == "softad") return Method::softad;
  throw std::invalid_argument("unknown method: " + name);
}

const char* to_string(Method m) {
  switch (m) {
    case Method::erm: return "erm";
    case Method::tilted: return "tilted";
    case Method::cvar: return "cvar";
    case Method::dro: return "dro";
    case Method::flooding: return "flooding";
    case Method::softad: return "softad";
  }
  return "?";
}

const char* to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "?";
}

double TrainRecord::final_metric(Split s, int which) const {
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->split != s) continue;
    return which == 0 ? it->loss : which == 1 ? it->acc : it->norm;
  }
  throw std::logic_error("TrainRecord: no rows for split");
}

void TrainRecord::write_csv(std::ostream& os) const {
  os << "epoch,split,loss,acc,norm\n";
  for (const auto& r : rows)
    os << r.epoch << ',' << to_string(r.split) << ',' << fmt_g9(r.loss) << ','
       << fmt_g9(r.acc) << ',' << fmt_g9(r.norm) << '\n';
}

void StepState::reset(int param_count) {
  velocity.assign(param_count, 0.0);
  theta = 0.0;
  theta_velocity = 0.0;
  theta_ready = false;
}

std::vector<double> tilted_weights(const std::vector<double>& losses,
                                   double gamma) {
  const std::size_t n = losses.size();
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (gamma == 0.0) return w;
  double m = gamma * losses[0];
  for (std::size_t i = 1; i < n; ++i) m = std::max(m, gamma * losses[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::exp(gamma * losses[i] - m);
    sum += w[i];
  }
  for (auto& wi : w) wi /= sum;
  return w;
}

namespace {

std::vector<double> mean_gradient(const BatchEval& be) {
  std::vector<double> g(be.p, 0.0);
  for (int i = 0; i < be.n; ++i) {
    const double* row = be.grad_row(i);
    for (int j = 0; j < be.p; ++j) g[j] += row[j];
  }
  for (auto& v : g) v /= be.n;
  return g;
}

std::vector<double> weighted_gradient(const BatchEval& be,
                                      const std::vector<double>& w) {
  std::vector<double> g(be.p, 0.0);
  for (int i = 0; i < be.n; ++i) {
    const double* row = be.grad_row(i);
    for (int j = 0; j < be.p; ++j) g[j] += w[i] * row[j];
  }
  return g;
}

}  // namespace

void train_step(Model& m, const Dataset& data, const std::vector<int>& idx,
                const TrainConfig& cfg, StepState& state) {
  BatchEval be = loss_and_grad(m, data, idx, cfg.loss);
  const int n = be.n;

  Method method = cfg.method;
  // The monotone methods expose plain mean-loss training as the zero setting
  // of their hyperparameter.
  if ((method == Method::cvar && cfg.beta == 0.0) ||
      (method == Method::dro && cfg.eps == 0.0) ||
      (method == Method::tilted && cfg.gamma == 0.0))
    method = Method::erm;

  bool uses_theta_coordinate =
      method == Method::cvar || method == Method::dro;
  if (uses_theta_coordinate && !state.theta_ready) {
    state.theta = be.mean_loss();
    state.theta_ready = true;
  }

  std::vector<double> direction;
  double theta_direction = 0.0;

  switch (method) {
    case Method::erm: {
      direction = mean_gradient(be);
      break;
    }
    case Method::tilted: {
      direction = weighted_gradient(be, tilted_weights(be.losses, cfg.gamma));
      break;
    }
    case Method::cvar: {
      double scale = 1.0 / (1.0 - cfg.beta);
      std::vector<double> w(n, 0.0);
      int above = 0;
      for (int i = 0; i < n; ++i)
        if (be.losses[i] > state.theta) {
          w[i] = scale / n;
          ++above;
        }
      direction = weighted_gradient(be, w);
      theta_direction = 1.0 - static_cast<double>(above) * scale / n;
      break;
    }
    case Method::dro: {
      double c = cfg.dro_c;
      double cstar = c / (c - 1.0);
      DispersionFunction rho = DispersionFunction::cressie_read_power(c, cfg.eps);
      double mean_rho = 0.0;
      for (int i = 0; i < n; ++i) mean_rho += rho(be.losses[i] - state.theta);
      mean_rho /= n;
      // Power-term singularity guard at a vanishing mean.
      mean_rho = std::max(mean_rho, 1e-12);
      double outer = std::pow(mean_rho, 1.0 / cstar - 1.0) / cstar;
      std::vector<double> w(n, 0.0);
      double dsum = 0.0;
      for (int i = 0; i < n; ++i) {
        double dr = rho.deriv(be.losses[i] - state.theta);
        w[i] = outer * dr / n;
        dsum += dr;
      }
      direction = weighted_gradient(be, w);
      theta_direction = 1.0 - outer * dsum / n;
      break;
    }
    case Method::flooding: {
      double s = be.mean_loss() - cfg.theta >= 0.0 ? 1.0 : -1.0;
      direction = mean_gradient(be);
      for (auto& v : direction) v *= s;
      break;
    }
    case Method::softad: {
      static const DispersionFunction ph = DispersionFunction::pseudo_huber();
      std::vector<double> w(n);
      for (int i = 0; i < n; ++i)
        w[i] = ph.deriv(be.losses[i] - cfg.theta) / n;
      direction = weighted_gradient(be, w);
      break;
    }
  }

  for (int j = 0; j < be.p; ++j) {
    state.velocity[j] = cfg.momentum * state.velocity[j] + direction[j];
    m.params[j] -= cfg.step_size * state.velocity[j];
  }
  if (uses_theta_coordinate) {
    state.theta_velocity = cfg.momentum * state.theta_velocity + theta_direction;
    state.theta -= cfg.step_size * state.theta_velocity;
  }
}

TrainOutcome train(Model& m, const SplitDataset& data, const TrainConfig& cfg) {
  if (cfg.epochs < 0 || cfg.batch_size <= 0)
    throw std::invalid_argument("train: bad epochs or batch size");
  TrainOutcome out;
  StepState state;
  state.reset(m.param_count());

  auto record = [&](int epoch) {
    double norm = m.l2_norm();
    for (Split s : {Split::train, Split::val, Split::test}) {
      const Dataset& d =
          s == Split::train ? data.train : (s == Split::val ? data.val : data.test);
      out.record.rows.push_back({epoch, s, split_mean_loss(m, d, cfg.loss),
                                 split_accuracy(m, d, cfg.loss), norm});
    }
  };

  record(0);
  Rng shuffle_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<int> order(data.train.size());
  for (int i = 0; i < data.train.size(); ++i) order[i] = i;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    for (int start = 0; start < data.train.size(); start += cfg.batch_size) {
      int stop = std::min(start + cfg.batch_size, data.train.size());
      std::vector<int> batch(order.begin() + start, order.begin() + stop);
      train_step(m, data.train, batch, cfg, state);
    }
    record(epoch);
    double train_loss = out.record.rows[out.record.rows.size() - 3].loss;
    if (!std::isfinite(train_loss) || train_loss > 1e6) {
      out.diverged = true;
      out.diagnostic = "train loss " + fmt_g9(train_loss) + " at epoch " +
                       std::to_string(epoch) + " exceeds the divergence guard";
      break;
    }
  }
  return out;
}

std::vector<double> default_grid(Method m) {
  auto linspace = [](double lo, double hi, int count) {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i)
      v[i] = lo + (hi - lo) * i / (count - 1);
    return v;
  };
  switch (m) {
    case Method::erm: return {0.0};
    case Method::cvar: return linspace(0.0, 0.9, 10);
    case Method::dro: return linspace(0.0, 0.9, 10);  // eps-tilde units
    case Method::flooding: return linspace(0.01, 1.0, 10);
    case Method::softad: return linspace(0.01, 0.75, 10);
    case Method::tilted: return linspace(0.0, 2.0, 10);
  }
  return {0.0};
}

double dro_eps_from_tilde(double eps_tilde) {
  if (!(eps_tilde >= 0.0 && eps_tilde < 1.0))
    throw std::invalid_argument("dro eps-tilde must lie in [0,1)");
  double t = 1.0 / (1.0 - eps_tilde) - 1.0;
  return t * t / 2.0;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      for (int i = t; i < count; i += threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

namespace {

void apply_hyper(TrainConfig& cfg, Method method, double value) {
  switch (method) {
    case Method::erm: break;
    case Method::tilted: cfg.gamma = value; break;
    case Method::cvar: cfg.beta = value; break;
    case Method::dro: cfg.eps = dro_eps_from_tilde(value); break;
    case Method::flooding:
    case Method::softad: cfg.theta = value; break;
  }
}

}  // namespace

SweepResult sweep(const SplitDataset& data, Method method,
                  const std::vector<double>& grid, int trials,
                  const TrainConfig& base, const Model& proto, int parallel) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (trials <= 0) throw std::invalid_argument("sweep: trials must be >= 1");

  SweepResult res;
  res.method = method;
  res.grid = grid;
  const int G = static_cast<int>(grid.size());
  res.val_acc.assign(G, std::vector<double>(trials, 0.0));
  res.test_acc.assign(G, std::vector<double>(trials, 0.0));
  res.final_train_loss.assign(G, std::vector<double>(trials, 0.0));

  // Per-trial split and init seeds are shared across methods and grid values.
  std::vector<SplitDataset> trial_data;
  trial_data.reserve(trials);
  for (int t = 0; t < trials; ++t)
    trial_data.push_back(resplit_train_val(data, base.seed + 1000003ULL * t));

  parallel_for(G * trials, parallel, [&](int cell) {
    int g = cell / trials;
    int t = cell % trials;
    TrainConfig cfg = base;
    cfg.method = method;
    cfg.seed = base.seed + t;
    apply_hyper(cfg, method, grid[g]);
    Model m = proto;
    m.init_params(cfg.seed);
    TrainOutcome outcome = train(m, trial_data[t], cfg);
    res.val_acc[g][t] = outcome.record.final_metric(Split::val, 1);
    res.test_acc[g][t] = outcome.record.final_metric(Split::test, 1);
    res.final_train_loss[g][t] = outcome.record.final_metric(Split::train, 0);
  });

  res.mean_val_acc.assign(G, 0.0);
  for (int g = 0; g < G; ++g) {
    for (int t = 0; t < trials; ++t) res.mean_val_acc[g] += res.val_acc[g][t];
    res.mean_val_acc[g] /= trials;
  }
  int best_g = 0;
  for (int g = 1; g < G; ++g)
    if (res.mean_val_acc[g] > res.mean_val_acc[best_g]) best_g = g;
  res.selected_by_mean = grid[best_g];

  res.per_trial_selected.resize(trials);
  double sel_sum = 0.0, sel_sq = 0.0, test_sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    int sel = 0;
    for (int g = 1; g < G; ++g)
      if (res.val_acc[g][t] > res.val_acc[sel][t]) sel = g;
    res.per_trial_selected[t] = grid[sel];
    sel_sum += grid[sel];
    sel_sq += grid[sel] * grid[sel];
    test_sum += res.test_acc[sel][t];
  }
  res.selected_mean = sel_sum / trials;
  double var = sel_sq / trials - res.selected_mean * res.selected_mean;
  res.selected_std = std::sqrt(std::max(0.0, var));
  res.test_acc_at_selected = test_sum / trials;
  return res;
}

}  // namespace critlab
