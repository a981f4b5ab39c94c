#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "critlab/datasets.hpp"
#include "critlab/surrogate.hpp"

namespace critlab {

enum class LossKind { logistic, exponential, hinge, quadratic, cross_entropy };
LossKind loss_kind_from_name(const std::string& name);
const char* to_string(LossKind k);
bool is_margin_loss(LossKind k);
MarginPenalty margin_penalty_for(LossKind k);

/*
 * Flat-parameter scorer. Linear: params = [W (out x dim, row-major), b].
 * One-hidden-layer ReLU network: params = [W1 (hidden x dim), b1,
 * W2 (out x hidden), b2]. A single output is a binary margin score; several
 * outputs are class logits.
 */
struct Model {
  enum class Arch { linear, mlp };
  Arch arch = Arch::linear;
  int input_dim = 0;
  int hidden = 0;  // 0 for linear
  int output_dim = 1;
  std::vector<double> params;

  static Model linear(int input_dim, int output_dim = 1);
  static Model mlp(int input_dim, int hidden, int output_dim = 1);

  int param_count() const;
  // Weights uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
  void init_params(std::uint64_t seed);
  void forward(const double* x, std::vector<double>& out) const;
  double l2_norm() const;
};

struct BatchEval {
  int n = 0;
  int p = 0;
  std::vector<double> losses;  // n
  std::vector<double> grads;   // n x p, row-major
  const double* grad_row(int i) const {
    return grads.data() + static_cast<std::size_t>(i) * p;
  }
  double mean_loss() const;
};

// Per-example losses and parameter gradients on the indexed batch. Margin
// losses need a single output and labels in {-1,+1}; cross-entropy needs
// logits and labels in {0..K-1} and is evaluated through a shifted
// log-sum-exp.
BatchEval loss_and_grad(const Model& m, const Dataset& data,
                        const std::vector<int>& idx, LossKind loss);

int predict_label(const Model& m, const double* x, LossKind loss);
double split_accuracy(const Model& m, const Dataset& data, LossKind loss);
double split_mean_loss(const Model& m, const Dataset& data, LossKind loss);

}  // namespace critlab
