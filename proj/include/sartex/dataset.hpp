#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sartex/texture.hpp"

namespace sartex::classify {

using Features = std::array<double, texture::kFeatureCount>;

/// 1 = Activity (drilling or fracturing), 0 = Little/No Activity.
struct Sample {
  texture::TextureVector x;
  int label = 0;
};

struct LabeledDataset {
  std::vector<Sample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  std::size_t count(int label) const;
};

/// Throws Error{Training} unless both classes are present, labels are 0/1
/// and every feature is finite.
void validate_for_training(const LabeledDataset& data);

/// Deterministic stratified split: the first round(fraction * n_c) samples of
/// each class c (in dataset order) go to the training side.
std::pair<LabeledDataset, LabeledDataset> stratified_split(const LabeledDataset& data,
                                                           double train_fraction);

/// Per-feature z-scoring fitted on training data. A constant feature keeps a
/// unit scale so it maps to zero instead of dividing by zero.
struct Standardizer {
  Features mean{};
  Features scale{};

  static Standardizer fit(const LabeledDataset& data);
  static Standardizer identity();
  Features apply(const Features& x) const;
};

/// Throws Error{Input} if any value is NaN or infinite.
void require_finite(const Features& x);

// --- Dataset CSV -------------------------------------------------------------
// Header: timestamp,<12 feature names>[,label]

struct FeatureTable {
  std::vector<texture::TextureVector> rows;
  std::vector<std::optional<int>> labels;  // one per row; empty optional if absent
  bool has_label_column = false;
};

std::string features_csv_header(bool with_label);
std::string features_csv_row(const texture::TextureVector& v, std::optional<int> label,
                             bool with_label);

void write_features_csv(const std::filesystem::path& path,
                        const std::vector<texture::TextureVector>& rows,
                        const std::vector<std::optional<int>>& labels = {});
FeatureTable read_features_csv(const std::filesystem::path& path);

/// `timestamp,label` file keyed by sample timestamp.
std::map<std::string, int> read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::filesystem::path& path,
                      const std::vector<std::pair<std::string, int>>& labels);

/// Builds a dataset from a table, taking labels from `labels` when given
/// (joined on timestamp) and from the table's own label column otherwise.
LabeledDataset to_dataset(const FeatureTable& table,
                          const std::map<std::string, int>* labels = nullptr);

}  // namespace sartex::classify
