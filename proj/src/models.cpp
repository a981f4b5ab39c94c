#include "critlab/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "critlab/rng.hpp"

namespace critlab {

LossKind loss_kind_from_name(const std::string& name) {
  if (name == "logistic") return LossKind::logistic;
  if (name == "exponential") return LossKind::exponential;
  if (name == "hinge") return LossKind::hinge;
  if (name == "quadratic") return LossKind::quadratic;
  if (name == "cross-entropy") return LossKind::cross_entropy;
  throw std::invalid_argument("unknown loss: " + name);
}

const char* to_string(LossKind k) {
  switch (k) {
    case LossKind::logistic: return "logistic";
    case LossKind::exponential: return "exponential";
    case LossKind::hinge: return "hinge";
    case LossKind::quadratic: return "quadratic";
    case LossKind::cross_entropy: return "cross-entropy";
  }
  return "?";
}

bool is_margin_loss(LossKind k) { return k != LossKind::cross_entropy; }

MarginPenalty margin_penalty_for(LossKind k) {
  switch (k) {
    case LossKind::logistic: return MarginPenalty::logistic();
    case LossKind::exponential: return MarginPenalty::exponential();
    case LossKind::hinge: return MarginPenalty::hinge();
    case LossKind::quadratic: return MarginPenalty::quadratic();
    default: break;
  }
  throw std::invalid_argument("margin_penalty_for: not a margin loss");
}

Model Model::linear(int input_dim, int output_dim) {
  Model m;
  m.arch = Arch::linear;
  m.input_dim = input_dim;
  m.hidden = 0;
  m.output_dim = output_dim;
  m.params.assign(m.param_count(), 0.0);
  return m;
}

Model Model::mlp(int input_dim, int hidden, int output_dim) {
  if (hidden <= 0) throw std::invalid_argument("Model::mlp: hidden must be > 0");
  Model m;
  m.arch = Arch::mlp;
  m.input_dim = input_dim;
  m.hidden = hidden;
  m.output_dim = output_dim;
  m.params.assign(m.param_count(), 0.0);
  return m;
}

int Model::param_count() const {
  if (arch == Arch::linear) return output_dim * input_dim + output_dim;
  return hidden * input_dim + hidden + output_dim * hidden + output_dim;
}

void Model::init_params(std::uint64_t seed) {
  Rng rng(seed);
  params.assign(param_count(), 0.0);
  auto fill = [&](int offset, int count, int fan_in) {
    double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (int i = 0; i < count; ++i)
      params[offset + i] = rng.uniform(-bound, bound);
  };
  if (arch == Arch::linear) {
    fill(0, output_dim * input_dim, input_dim);
  } else {
    fill(0, hidden * input_dim, input_dim);
    fill(hidden * input_dim + hidden, output_dim * hidden, hidden);
  }
}

void Model::forward(const double* x, std::vector<double>& out) const {
  out.assign(output_dim, 0.0);
  if (arch == Arch::linear) {
    const double* W = params.data();
    const double* b = params.data() + output_dim * input_dim;
    for (int k = 0; k < output_dim; ++k) {
      double s = b[k];
      for (int j = 0; j < input_dim; ++j) s += W[k * input_dim + j] * x[j];
      out[k] = s;
    }
    return;
  }
  const double* W1 = params.data();
  const double* b1 = W1 + hidden * input_dim;
  const double* W2 = b1 + hidden;
  const double* b2 = W2 + output_dim * hidden;
  std::vector<double> h(hidden);
  for (int i = 0; i < hidden; ++i) {
    double s = b1[i];
    for (int j = 0; j < input_dim; ++j) s += W1[i * input_dim + j] * x[j];
    h[i] = s > 0.0 ? s : 0.0;
  }
  for (int k = 0; k < output_dim; ++k) {
    double s = b2[k];
    for (int i = 0; i < hidden; ++i) s += W2[k * hidden + i] * h[i];
    out[k] = s;
  }
}

double Model::l2_norm() const {
  double s = 0.0;
  for (double v : params) s += v * v;
  return std::sqrt(s);
}

double BatchEval::mean_loss() const {
  double s = 0.0;
  for (double v : losses) s += v;
  return s / n;
}

namespace {

// Gradient of the per-example loss with respect to the output scores is
// pushed back through the model into grad_row.
void backprop(const Model& m, const double* x, const std::vector<double>& h,
              const std::vector<double>& dscore, double* grad) {
  const int d = m.input_dim, K = m.output_dim, H = m.hidden;
  if (m.arch == Model::Arch::linear) {
    double* gW = grad;
    double* gb = grad + K * d;
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < d; ++j) gW[k * d + j] = dscore[k] * x[j];
      gb[k] = dscore[k];
    }
    return;
  }
  const double* W2 = m.params.data() + H * d + H;
  double* gW1 = grad;
  double* gb1 = grad + H * d;
  double* gW2 = gb1 + H;
  double* gb2 = gW2 + K * H;
  for (int k = 0; k < K; ++k) {
    for (int i = 0; i < H; ++i) gW2[k * H + i] = dscore[k] * h[i];
    gb2[k] = dscore[k];
  }
  for (int i = 0; i < H; ++i) {
    double dh = 0.0;
    for (int k = 0; k < K; ++k) dh += dscore[k] * W2[k * H + i];
    double dz = h[i] > 0.0 ? dh : 0.0;
    for (int j = 0; j < d; ++j) gW1[i * d + j] = dz * x[j];
    gb1[i] = dz;
  }
}

// Hidden activations for the mlp; empty for linear.
std::vector<double> hidden_acts(const Model& m, const double* x) {
  if (m.arch == Model::Arch::linear) return {};
  const int d = m.input_dim, H = m.hidden;
  const double* W1 = m.params.data();
  const double* b1 = W1 + H * d;
  std::vector<double> h(H);
  for (int i = 0; i < H; ++i) {
    double s = b1[i];
    for (int j = 0; j < d; ++j) s += W1[i * d + j] * x[j];
    h[i] = s > 0.0 ? s : 0.0;
  }
  return h;
}

}  // namespace

BatchEval loss_and_grad(const Model& m, const Dataset& data,
                        const std::vector<int>& idx, LossKind loss) {
  if (idx.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  if (is_margin_loss(loss)) {
    if (m.output_dim != 1)
      throw std::invalid_argument("margin losses need a single output score");
  } else if (m.output_dim < 2) {
    throw std::invalid_argument("cross-entropy needs class logits");
  }

  BatchEval out;
  out.n = static_cast<int>(idx.size());
  out.p = m.param_count();
  out.losses.resize(out.n);
  out.grads.assign(static_cast<std::size_t>(out.n) * out.p, 0.0);

  std::vector<double> scores;
  std::vector<double> dscore(m.output_dim);

  for (int b = 0; b < out.n; ++b) {
    const double* x = data.row(idx[b]);
    const int label = data.y[idx[b]];
    m.forward(x, scores);
    std::vector<double> h = hidden_acts(m, x);

    if (is_margin_loss(loss)) {
      if (label != 1 && label != -1)
        throw std::invalid_argument("margin losses need labels in {-1,+1}");
      MarginPenalty phi = margin_penalty_for(loss);
      double margin = label * scores[0];
      out.losses[b] = phi(margin);
      dscore[0] = phi.deriv(margin) * label;
    } else {
      if (label < 0 || label >= m.output_dim)
        throw std::invalid_argument("cross-entropy label out of range");
      double mx = scores[0];
      for (double s : scores) mx = std::max(mx, s);
      double sum = 0.0;
      for (double s : scores) sum += std::exp(s - mx);
      double lse = mx + std::log(sum);
      out.losses[b] = lse - scores[label];
      for (int k = 0; k < m.output_dim; ++k)
        dscore[k] = std::exp(scores[k] - lse) - (k == label ? 1.0 : 0.0);
    }
    backprop(m, x, h, dscore,
             out.grads.data() + static_cast<std::size_t>(b) * out.p);
  }
  return out;
}

int predict_label(const Model& m, const double* x, LossKind loss) {
  std::vector<double> scores;
  m.forward(x, scores);
  if (is_margin_loss(loss)) return sign_pm(scores[0]);
  int best = 0;
  for (int k = 1; k < m.output_dim; ++k)
    if (scores[k] > scores[best]) best = k;
  return best;
}

double split_accuracy(const Model& m, const Dataset& data, LossKind loss) {
  if (data.size() == 0) return 0.0;
  int hits = 0;
  for (int i = 0; i < data.size(); ++i)
    if (predict_label(m, data.row(i), loss) == data.y[i]) ++hits;
  return static_cast<double>(hits) / data.size();
}

double split_mean_loss(const Model& m, const Dataset& data, LossKind loss) {
  if (data.size() == 0) return 0.0;
  std::vector<double> scores;
  double total = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    m.forward(data.row(i), scores);
    int label = data.y[i];
    if (is_margin_loss(loss)) {
      total += margin_penalty_for(loss)(label * scores[0]);
    } else {
      double mx = scores[0];
      for (double s : scores) mx = std::max(mx, s);
      double sum = 0.0;
      for (double s : scores) sum += std::exp(s - mx);
      total += mx + std::log(sum) - scores[label];
    }
  }
  return total / data.size();
}

}  // namespace critlab
