#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace critlab {

/*
 * Dense dataset; X is row-major n x dim. Binary tasks carry labels in
 * {-1, +1}; multi-class tasks carry labels in {0..classes-1}.
 */
struct Dataset {
  int dim = 0;
  int classes = 2;
  std::vector<double> X;
  std::vector<int> y;
  int size() const { return static_cast<int>(y.size()); }
  const double* row(int i) const { return X.data() + static_cast<std::size_t>(i) * dim; }
};

struct SplitDataset {
  Dataset train, val, test;
};

// Two Gaussian blobs at +-(sep, sep) with the given noise, labels +-1.
Dataset make_blobs_binary(std::uint64_t seed, int n, double sep = 1.2,
                          double noise = 0.5);

// k Gaussian blobs on a circle of the given radius, labels 0..k-1.
Dataset make_blobs_multi(std::uint64_t seed, int n, int k = 3,
                         double radius = 1.5, double noise = 0.4);

SplitDataset split_blobs_binary(std::uint64_t seed, int n_train, int n_val,
                                int n_test, double sep = 1.2, double noise = 0.5);
SplitDataset split_blobs_multi(std::uint64_t seed, int n_train, int n_val,
                               int n_test, int k = 3, double radius = 1.5,
                               double noise = 0.4);

// Pool train+val and redo the split with a fresh shuffle; the test split is
// left untouched.
SplitDataset resplit_train_val(const SplitDataset& data, std::uint64_t seed);

// One example per line, fixed-point features then the label, space-separated.
void save_dataset(const std::string& path, const Dataset& d);
Dataset load_dataset(const std::string& path);

}  // namespace critlab
