#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sartex/dataset.hpp"
#include "sartex/forest.hpp"
#include "sartex/mlp.hpp"
#include "sartex/svm.hpp"

namespace sartex::classify {

enum class ClassifierKind { Forest, Svm, Mlp };

std::string_view to_string(ClassifierKind kind);
ClassifierKind parse_kind(std::string_view text);

using Model = std::variant<ForestModel, SvmModel, MlpModel>;

ClassifierKind kind_of(const Model& model);

struct TrainParams {
  ForestParams forest;
  SvmParams svm;
  MlpParams mlp;
};

Model train(ClassifierKind kind, const LabeledDataset& data, const TrainParams& params,
            std::uint64_t seed);

struct Prediction {
  int label = 0;
  double score = 0.0;  ///< in [0, 1]; label is 1 iff score > 0.5
};

/// Forest: mean leaf probability. SVM: logistic of the decision value.
/// MLP: sigmoid output. Throws Error{Input} on a non-finite feature.
Prediction predict(const Model& model, const texture::TextureVector& x);

/// Fraction of correctly labeled samples.
double evaluate(const Model& model, const LabeledDataset& test);

struct MultiSeedResult {
  double mean_accuracy = 0.0;
  std::vector<double> accuracies;  ///< one per seed, in seed order
};

/// Trains one model per seed on `train` and scores it on `test`.
MultiSeedResult evaluate_multiseed(const LabeledDataset& train, const LabeledDataset& test,
                                   ClassifierKind kind, const std::vector<std::uint64_t>& seeds,
                                   const TrainParams& params = {});

// --- persistence ---------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

std::string model_to_json(const Model& model);
Model model_from_json(std::string_view text);
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace sartex::classify
