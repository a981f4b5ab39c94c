#include "critlab/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "critlab/rng.hpp"

namespace critlab {

namespace {

Dataset take(const Dataset& d, const std::vector<int>& idx, int from, int count) {
  Dataset out;
  out.dim = d.dim;
  out.classes = d.classes;
  out.X.reserve(static_cast<std::size_t>(count) * d.dim);
  out.y.reserve(count);
  for (int i = from; i < from + count; ++i) {
    const double* r = d.row(idx[i]);
    out.X.insert(out.X.end(), r, r + d.dim);
    out.y.push_back(d.y[idx[i]]);
  }
  return out;
}

}  // namespace

Dataset make_blobs_binary(std::uint64_t seed, int n, double sep, double noise) {
  Rng rng(seed);
  Dataset d;
  d.dim = 2;
  d.classes = 2;
  d.X.reserve(static_cast<std::size_t>(n) * 2);
  d.y.reserve(n);
  for (int i = 0; i < n; ++i) {
    int label = rng.unit() < 0.5 ? 1 : -1;
    double cx = label > 0 ? sep : -sep;
    d.X.push_back(cx + noise * rng.gauss());
    d.X.push_back(cx + noise * rng.gauss());
    d.y.push_back(label);
  }
  return d;
}

Dataset make_blobs_multi(std::uint64_t seed, int n, int k, double radius,
                         double noise) {
  if (k < 2) throw std::invalid_argument("make_blobs_multi: k must be >= 2");
  Rng rng(seed);
  Dataset d;
  d.dim = 2;
  d.classes = k;
  d.X.reserve(static_cast<std::size_t>(n) * 2);
  d.y.reserve(n);
  const double two_pi = 2.0 * 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    int label = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    double angle = two_pi * (static_cast<double>(label) / k + 0.25);
    d.X.push_back(radius * std::cos(angle) + noise * rng.gauss());
    d.X.push_back(radius * std::sin(angle) + noise * rng.gauss());
    d.y.push_back(label);
  }
  return d;
}

SplitDataset split_blobs_binary(std::uint64_t seed, int n_train, int n_val,
                                int n_test, double sep, double noise) {
  Dataset all = make_blobs_binary(seed, n_train + n_val + n_test, sep, noise);
  std::vector<int> idx(all.size());
  for (int i = 0; i < all.size(); ++i) idx[i] = i;
  SplitDataset out;
  out.train = take(all, idx, 0, n_train);
  out.val = take(all, idx, n_train, n_val);
  out.test = take(all, idx, n_train + n_val, n_test);
  return out;
}

SplitDataset split_blobs_multi(std::uint64_t seed, int n_train, int n_val,
                               int n_test, int k, double radius, double noise) {
  Dataset all =
      make_blobs_multi(seed, n_train + n_val + n_test, k, radius, noise);
  std::vector<int> idx(all.size());
  for (int i = 0; i < all.size(); ++i) idx[i] = i;
  SplitDataset out;
  out.train = take(all, idx, 0, n_train);
  out.val = take(all, idx, n_train, n_val);
  out.test = take(all, idx, n_train + n_val, n_test);
  return out;
}

SplitDataset resplit_train_val(const SplitDataset& data, std::uint64_t seed) {
  Dataset pool;
  pool.dim = data.train.dim;
  pool.classes = data.train.classes;
  pool.X = data.train.X;
  pool.X.insert(pool.X.end(), data.val.X.begin(), data.val.X.end());
  pool.y = data.train.y;
  pool.y.insert(pool.y.end(), data.val.y.begin(), data.val.y.end());

  std::vector<int> idx(pool.size());
  for (int i = 0; i < pool.size(); ++i) idx[i] = i;
  Rng rng(seed);
  rng.shuffle(idx);

  SplitDataset out;
  out.train = take(pool, idx, 0, data.train.size());
  out.val = take(pool, idx, data.train.size(), data.val.size());
  out.test = data.test;
  return out;
}

void save_dataset(const std::string& path, const Dataset& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  char buf[64];
  for (int i = 0; i < d.size(); ++i) {
    const double* r = d.row(i);
    for (int j = 0; j < d.dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.6f ", r[j]);
      out << buf;
    }
    out << d.y[i] << '\n';
  }
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  Dataset d;
  std::string line;
  int max_label = 0;
  bool has_negative = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::vector<double> nums;
    double v;
    while (ss >> v) nums.push_back(v);
    if (nums.size() < 2)
      throw std::runtime_error("dataset line needs features and a label: " + path);
    int dim = static_cast<int>(nums.size()) - 1;
    if (d.dim == 0)
      d.dim = dim;
    else if (d.dim != dim)
      throw std::runtime_error("inconsistent feature count in " + path);
    for (int j = 0; j < dim; ++j) d.X.push_back(nums[j]);
    int label = static_cast<int>(nums.back());
    d.y.push_back(label);
    max_label = std::max(max_label, label);
    if (label < 0) has_negative = true;
  }
  if (d.y.empty()) throw std::runtime_error("empty dataset file: " + path);
  d.classes = has_negative ? 2 : std::max(2, max_label + 1);
  return d;
}

}  // namespace critlab
