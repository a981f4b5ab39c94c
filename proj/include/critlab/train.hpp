#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "critlab/models.hpp"

namespace critlab {

enum class Method { erm, tilted, cvar, dro, flooding, softad };
Method method_from_name(const std::string& name);
const char* to_string(Method m);

struct TrainConfig {
  Method method = Method::erm;
  double step_size = 0.1;
  double momentum = 0.9;
  int epochs = 100;
  int batch_size = 100;
  std::uint64_t seed = 1;
  LossKind loss = LossKind::logistic;
  // method hyperparameters
  double gamma = 0.0;  // tilted
  double beta = 0.0;   // cvar
  double eps = 0.0;    // dro
  double theta = 0.0;  // flooding / softad
  double dro_c = 2.0;
};

enum class Split { train, val, test };
const char* to_string(Split s);

struct TrainRecord {
  struct Row {
    int epoch;
    Split split;
    double loss, acc, norm;
  };
  std::vector<Row> rows;
  // Final-epoch metric for a split; throws if absent.
  double final_metric(Split s, int which) const;  // 0=loss, 1=acc, 2=norm
  void write_csv(std::ostream& os) const;          // epoch,split,loss,acc,norm
};

struct StepState {
  std::vector<double> velocity;
  double theta = 0.0;
  double theta_velocity = 0.0;
  bool theta_ready = false;
  void reset(int param_count);
};

// One SGD-with-momentum update on the indexed batch. The criterion shapes the
// update direction: tilted reweights per-example gradients by a shifted
// softmax; cvar and dro treat their threshold as an extra trainable
// coordinate (initialized to the first batch's mean loss); flooding applies
// the sign switch of the mean-restraining criterion; softad modulates each
// example by the smooth switch of the concentration criterion. beta = 0 cvar,
// eps = 0 dro and gamma = 0 tilted reduce to the plain mean-loss update.
void train_step(Model& m, const Dataset& data, const std::vector<int>& idx,
                const TrainConfig& cfg, StepState& state);

// Softmax weights over gamma * losses, shifted by the largest exponent;
// gamma = 0 yields the uniform vector.
std::vector<double> tilted_weights(const std::vector<double>& losses,
                                   double gamma);

struct TrainOutcome {
  TrainRecord record;
  bool diverged = false;
  std::string diagnostic;
};

// Full run over seeded mini-batch epochs; rows are recorded for the initial
// state (epoch 0) and after every epoch for all three splits. Aborts with a
// diagnostic when the train loss passes 1e6.
TrainOutcome train(Model& m, const SplitDataset& data, const TrainConfig& cfg);

struct SweepResult {
  Method method = Method::erm;
  std::vector<double> grid;  // raw grid (dro grids are in eps-tilde units)
  std::vector<std::vector<double>> val_acc;          // grid x trial
  std::vector<std::vector<double>> test_acc;         // grid x trial
  std::vector<std::vector<double>> final_train_loss; // grid x trial
  std::vector<double> mean_val_acc;                  // per grid value
  double selected_by_mean = 0.0;     // argmax of mean val acc, ties low
  std::vector<double> per_trial_selected;
  double selected_mean = 0.0, selected_std = 0.0;  // stats over trials
  double test_acc_at_selected = 0.0;  // mean over trials, per-trial selection
};

/*
 * Grid sweep with common per-trial initial weights across methods and grid
 * values (the init seed depends on the trial only) and a fresh train/val
 * split per trial. Selection is reported both ways: argmax of the
 * trial-averaged validation accuracy, and per-trial argmax with mean and
 * standard deviation of the selected values.
 */
SweepResult sweep(const SplitDataset& data, Method method,
                  const std::vector<double>& grid, int trials,
                  const TrainConfig& base, const Model& proto, int parallel = 1);

// Ten hyperparameter candidates per method.
std::vector<double> default_grid(Method m);
// Robustness radius from the sweep parameterization: (1/(1-t) - 1)^2 / 2.
double dro_eps_from_tilde(double eps_tilde);

// Run fn(i) for i in [0, count) on up to `threads` workers; results must be
// written to pre-sized slots so gathering stays deterministic.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace critlab
