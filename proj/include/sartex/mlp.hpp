#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sartex/dataset.hpp"

namespace sartex::classify {

/// Fully connected layer, weights row-major `outputs x inputs`.
struct DenseLayer {
  int inputs = 0;
  int outputs = 0;
  std::vector<double> weights;
  std::vector<double> bias;
};

struct MlpParams {
  int epochs = 1000;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::vector<int> hidden{10, 6, 4};
};

/// ReLU hidden layers, one sigmoid output unit.
struct MlpModel {
  Standardizer standardizer;
  std::vector<DenseLayer> layers;
  std::uint64_t seed = 0;

  /// Pre-sigmoid output for a standardized input.
  double logit_standardized(std::span<const double> z) const;
  double probability(const Features& x) const;
};

/// Layer sizes including the input and output, e.g. {12, 10, 6, 4, 1}.
std::vector<int> layer_sizes(const MlpModel& model);

/// Glorot-uniform weights, zero biases, identity standardizer.
MlpModel init_mlp(const std::vector<int>& sizes, std::uint64_t seed);

/// Gradient of the mean binary cross-entropy, laid out like the model.
struct MlpGradient {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> bias;
};

/// Mean BCE over (inputs, labels) with inputs already standardized. When
/// `grad` is non-null it receives the backpropagated gradient.
double mlp_loss(const MlpModel& model, std::span<const Features> inputs,
                std::span<const int> labels, MlpGradient* grad = nullptr);

/// Full-batch Adam on mean BCE, starting from init_mlp(sizes, seed).
MlpModel train_mlp(const LabeledDataset& data, const MlpParams& params, std::uint64_t seed);

}  // namespace sartex::classify
