#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sartex/dataset.hpp"

namespace sartex::classify {

struct SvmParams {
  double c = 1.0;
  std::optional<double> gamma;  ///< RBF width; empty selects 1 / (12 * mean feature variance)
  double tolerance = 1e-3;      ///< stopping gap on the maximal violating pair
  long max_iterations = 10'000'000;
};

/// Soft-margin RBF SVM. Inputs are standardized with the stored Standardizer
/// before the kernel is evaluated.
struct SvmModel {
  Standardizer standardizer;
  std::vector<Features> support_vectors;  ///< standardized
  std::vector<double> dual_coef;          ///< alpha_i * y_i, y in {-1, +1}
  double bias = 0.0;
  double gamma = 0.0;
  double c = 1.0;
  std::uint64_t seed = 0;

  /// Raw decision value sum_i alpha_i y_i K(sv_i, z) + b for a standardized z.
  double decision_standardized(const Features& z) const;
  double decision(const Features& x) const;
};

struct SvmFit {
  SvmModel model;
  std::vector<double> alpha;  ///< one multiplier per training sample, in [0, C]
  long iterations = 0;
};

double rbf_kernel(const Features& a, const Features& b, double gamma);

/// SMO with second-order working-set selection. The solver is deterministic;
/// `seed` is recorded in the model only.
SvmFit fit_svm(const LabeledDataset& data, const SvmParams& params, std::uint64_t seed);
SvmModel train_svm(const LabeledDataset& data, const SvmParams& params, std::uint64_t seed);

/// Largest KKT violation of (alpha, model) on `data`, measured from the
/// model's decision values: with m_i = y_i f(x_i),
///   alpha_i = 0      requires m_i >= 1,
///   0 < alpha_i < C  requires m_i == 1,
///   alpha_i = C      requires m_i <= 1.
double kkt_violation(const SvmModel& model, const LabeledDataset& data,
                     const std::vector<double>& alpha);

}  // namespace sartex::classify
