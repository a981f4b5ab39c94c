#include <cmath>
#include <sstream>
#include <vector>

#include "critlab/datasets.hpp"
#include "critlab/rng.hpp"
#include "critlab/train.hpp"
#include "doctest.h"

using critlab::Dataset;
using critlab::LossKind;
using critlab::Method;
using critlab::Model;
using critlab::Split;
using critlab::SplitDataset;
using critlab::StepState;
using critlab::TrainConfig;

namespace {

std::vector<int> all_indices(const Dataset& d) {
  std::vector<int> idx(d.size());
  for (int i = 0; i < d.size(); ++i) idx[i] = i;
  return idx;
}

TrainConfig base_config(Method m) {
  TrainConfig cfg;
  cfg.method = m;
  cfg.loss = LossKind::logistic;
  cfg.seed = 3;
  return cfg;
}

// One update from a fresh state; returns the applied update term (step size
// times momentum velocity). Comparing update terms keeps sign identities
// exact, where the parameter addition itself may round asymmetrically.
std::vector<double> one_step_delta(Method m, const TrainConfig& overrides,
                                   const Dataset& d) {
  Model model = Model::mlp(2, 8, 1);
  model.init_params(11);
  TrainConfig cfg = overrides;
  cfg.method = m;
  StepState st;
  st.reset(model.param_count());
  train_step(model, d, all_indices(d), cfg, st);
  std::vector<double> update(st.velocity.size());
  for (std::size_t j = 0; j < update.size(); ++j)
    update[j] = cfg.step_size * st.velocity[j];
  return update;
}

}  // namespace

TEST_CASE("flooding steps are exactly signed mean-loss steps") {
  Dataset d = critlab::make_blobs_binary(21, 64);
  TrainConfig cfg = base_config(Method::erm);

  // Find the batch mean loss at the shared starting point.
  Model probe = Model::mlp(2, 8, 1);
  probe.init_params(11);
  double mean_loss =
      loss_and_grad(probe, d, all_indices(d), cfg.loss).mean_loss();

  auto erm_delta = one_step_delta(Method::erm, cfg, d);

  TrainConfig low = cfg;
  low.theta = mean_loss - 0.1;  // loss above the floor: descend
  auto descend = one_step_delta(Method::flooding, low, d);
  CHECK(descend == erm_delta);

  TrainConfig high = cfg;
  high.theta = mean_loss + 0.1;  // loss below the floor: ascend
  auto ascend = one_step_delta(Method::flooding, high, d);
  REQUIRE(ascend.size() == erm_delta.size());
  for (std::size_t j = 0; j < ascend.size(); ++j)
    CHECK(ascend[j] == -erm_delta[j]);

  TrainConfig exact = cfg;
  exact.theta = mean_loss;  // ties break toward descent
  CHECK(one_step_delta(Method::flooding, exact, d) == erm_delta);
}

TEST_CASE("softad update vanishes when every loss sits on the threshold") {
  // Zero-initialized scorer puts every example at the same logistic loss.
  Model model = Model::linear(2);
  Dataset d = critlab::make_blobs_binary(22, 32);
  TrainConfig cfg = base_config(Method::softad);
  cfg.theta = std::log(2.0);
  StepState st;
  st.reset(model.param_count());
  std::vector<double> before = model.params;
  train_step(model, d, all_indices(d), cfg, st);
  double delta_norm = 0.0;
  for (std::size_t j = 0; j < model.params.size(); ++j)
    delta_norm += (model.params[j] - before[j]) * (model.params[j] - before[j]);
  CHECK(std::sqrt(delta_norm) < 1e-12);
}

TEST_CASE("vanishing tilt matches the mean-loss update") {
  Dataset d = critlab::make_blobs_binary(23, 64);
  TrainConfig cfg = base_config(Method::erm);
  auto erm_delta = one_step_delta(Method::erm, cfg, d);
  TrainConfig tilt = cfg;
  tilt.gamma = 1e-8;
  auto tilted_delta = one_step_delta(Method::tilted, tilt, d);
  double diff = 0.0, norm = 0.0;
  for (std::size_t j = 0; j < erm_delta.size(); ++j) {
    diff += (tilted_delta[j] - erm_delta[j]) * (tilted_delta[j] - erm_delta[j]);
    norm += erm_delta[j] * erm_delta[j];
  }
  CHECK(std::sqrt(diff) / std::sqrt(norm) < 1e-6);
}

TEST_CASE("tilted weights form a probability vector") {
  critlab::Rng rng(24);
  for (int rep = 0; rep < 50; ++rep) {
    int n = 2 + static_cast<int>(rng.below(40));
    std::vector<double> losses(n);
    for (auto& l : losses) l = rng.uniform(0.0, 5.0);
    for (double gamma : {0.0, 1e-8, 0.3, 2.0, 20.0, -3.0}) {
      auto w = critlab::tilted_weights(losses, gamma);
      double sum = 0.0;
      for (double wi : w) {
        CHECK(wi >= 0.0);
        sum += wi;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero-hyperparameter settings reduce to the mean-loss update") {
  Dataset d = critlab::make_blobs_binary(25, 64);
  TrainConfig cfg = base_config(Method::erm);
  auto erm_delta = one_step_delta(Method::erm, cfg, d);

  TrainConfig cv = cfg;
  cv.beta = 0.0;
  CHECK(one_step_delta(Method::cvar, cv, d) == erm_delta);
  TrainConfig dr = cfg;
  dr.eps = 0.0;
  CHECK(one_step_delta(Method::dro, dr, d) == erm_delta);
}

TEST_CASE("joint objective is non-increasing under full-batch cvar descent") {
  SplitDataset data = critlab::split_blobs_binary(26, 120, 10, 10);
  Model model = Model::linear(2);
  model.init_params(5);
  TrainConfig cfg;
  cfg.method = Method::cvar;
  cfg.beta = 0.5;
  cfg.loss = LossKind::logistic;
  cfg.step_size = 0.005;
  cfg.momentum = 0.0;

  StepState st;
  st.reset(model.param_count());
  auto idx = all_indices(data.train);
  auto objective = [&](double theta) {
    auto be = loss_and_grad(model, data.train, idx, cfg.loss);
    double tail = 0.0;
    for (double l : be.losses) tail += std::max(0.0, l - theta);
    return theta + tail / (be.n * (1.0 - cfg.beta));
  };

  // Initialize theta exactly as the stepper does.
  train_step(model, data.train, idx, cfg, st);
  double prev = objective(st.theta);
  for (int it = 0; it < 100; ++it) {
    train_step(model, data.train, idx, cfg, st);
    double cur = objective(st.theta);
    CHECK(cur <= prev + 1e-12);
    prev = cur;
  }
}

TEST_CASE("training runs are deterministic and learn separable blobs") {
  SplitDataset data = critlab::split_blobs_binary(27, 400, 100, 100);
  TrainConfig cfg = base_config(Method::erm);
  cfg.epochs = 40;
  cfg.batch_size = 50;

  Model m1 = Model::mlp(2, 16, 1);
  m1.init_params(cfg.seed);
  auto out1 = train(m1, data, cfg);
  CHECK_FALSE(out1.diverged);
  CHECK(out1.record.final_metric(Split::train, 1) >= 0.99);

  Model m2 = Model::mlp(2, 16, 1);
  m2.init_params(cfg.seed);
  auto out2 = train(m2, data, cfg);
  REQUIRE(out1.record.rows.size() == out2.record.rows.size());
  for (std::size_t i = 0; i < out1.record.rows.size(); ++i) {
    CHECK(out1.record.rows[i].loss == out2.record.rows[i].loss);
    CHECK(out1.record.rows[i].acc == out2.record.rows[i].acc);
    CHECK(out1.record.rows[i].norm == out2.record.rows[i].norm);
  }

  // Epoch zero rows capture the initial state for every split.
  CHECK(out1.record.rows[0].epoch == 0);
  CHECK(out1.record.rows[1].epoch == 0);
  CHECK(out1.record.rows[2].epoch == 0);
  CHECK(out1.record.rows.size() == 3u * (cfg.epochs + 1));
}

TEST_CASE("flooding holds the train loss near its floor") {
  SplitDataset data = critlab::split_blobs_binary(28, 600, 100, 100);
  TrainConfig cfg = base_config(Method::flooding);
  cfg.theta = 0.3;
  cfg.epochs = 60;
  cfg.batch_size = 100;
  Model m = Model::mlp(2, 16, 1);
  m.init_params(cfg.seed);
  auto out = train(m, data, cfg);
  CHECK_FALSE(out.diverged);
  double final_loss = out.record.final_metric(Split::train, 0);
  CHECK(final_loss >= 0.15);
  CHECK(final_loss <= 0.45);
}

TEST_CASE("training handles a remainder mini-batch") {
  SplitDataset data = critlab::split_blobs_binary(33, 100, 20, 20);
  TrainConfig cfg = base_config(Method::erm);
  cfg.epochs = 3;
  cfg.batch_size = 64;  // 100 = 64 + 36
  Model m = Model::mlp(2, 8, 1);
  m.init_params(cfg.seed);
  auto out = train(m, data, cfg);
  CHECK_FALSE(out.diverged);
  CHECK(out.record.rows.size() == 3u * 4);
  CHECK(std::isfinite(out.record.final_metric(Split::train, 0)));
}

TEST_CASE("divergence guard aborts with a partial record") {
  SplitDataset data = critlab::split_blobs_binary(29, 200, 50, 50);
  TrainConfig cfg = base_config(Method::erm);
  cfg.loss = LossKind::exponential;
  cfg.step_size = 1e5;  // blow up on purpose
  cfg.epochs = 30;
  cfg.batch_size = 50;
  Model m = Model::mlp(2, 8, 1);
  m.init_params(cfg.seed);
  auto out = train(m, data, cfg);
  CHECK(out.diverged);
  CHECK_FALSE(out.diagnostic.empty());
  CHECK(out.record.rows.size() >= 3);
  CHECK(out.record.rows.size() < 3u * (cfg.epochs + 1));
}

TEST_CASE("sweep selection is deterministic and honors degenerate grids") {
  SplitDataset data = critlab::split_blobs_binary(30, 300, 60, 60);
  TrainConfig base;
  base.loss = LossKind::logistic;
  base.epochs = 10;
  base.batch_size = 60;
  base.seed = 9;
  Model proto = Model::mlp(2, 8, 1);

  auto single = sweep(data, Method::flooding, {0.25}, 2, base, proto);
  CHECK(single.selected_by_mean == 0.25);
  CHECK(single.selected_mean == 0.25);
  CHECK(single.selected_std == 0.0);

  auto one_trial = sweep(data, Method::tilted, {0.0, 1.0}, 1, base, proto);
  CHECK(one_trial.selected_std == 0.0);

  auto a = sweep(data, Method::tilted, {0.0, 0.5, 1.0}, 2, base, proto);
  auto b = sweep(data, Method::tilted, {0.0, 0.5, 1.0}, 2, base, proto);
  CHECK(a.mean_val_acc == b.mean_val_acc);
  CHECK(a.per_trial_selected == b.per_trial_selected);

  // Parallel execution gathers the same numbers.
  auto c = sweep(data, Method::tilted, {0.0, 0.5, 1.0}, 2, base, proto, 4);
  CHECK(a.mean_val_acc == c.mean_val_acc);
  CHECK(a.test_acc == c.test_acc);
}

TEST_CASE("zero-radius robustness sweeps reproduce mean-loss training") {
  SplitDataset data = critlab::split_blobs_binary(31, 200, 40, 40);
  TrainConfig base;
  base.loss = LossKind::logistic;
  base.epochs = 8;
  base.batch_size = 40;
  base.seed = 13;
  Model proto = Model::mlp(2, 8, 1);

  auto dro = sweep(data, Method::dro, {0.0}, 1, base, proto);
  auto erm = sweep(data, Method::erm, {0.0}, 1, base, proto);
  CHECK(dro.val_acc[0][0] == erm.val_acc[0][0]);
  CHECK(dro.final_train_loss[0][0] == erm.final_train_loss[0][0]);
}

TEST_CASE("csv serialization of records") {
  SplitDataset data = critlab::split_blobs_binary(32, 60, 20, 20);
  TrainConfig cfg = base_config(Method::erm);
  cfg.epochs = 2;
  cfg.batch_size = 20;
  Model m = Model::linear(2);
  m.init_params(1);
  auto out = train(m, data, cfg);
  std::ostringstream os;
  out.record.write_csv(os);
  CHECK(os.str().rfind("epoch,split,loss,acc,norm\n", 0) == 0);
  CHECK(os.str().find("0,train,") != std::string::npos);
  CHECK(os.str().find("2,test,") != std::string::npos);
}
