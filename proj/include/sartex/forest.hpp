#pragma once

#include <cstdint>
#include <vector>

#include "sartex/dataset.hpp"

namespace sartex::classify {

/// One node of a binary decision tree. Internal nodes route `x[feature] <=
/// threshold` to `left`; leaves have feature == -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double probability = 0.0;  ///< fraction of class-1 training samples reaching the node
  double impurity = 0.0;     ///< Gini impurity at the node
  double weight = 0.0;       ///< number of (bootstrap) samples reaching the node

  bool is_leaf() const noexcept { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  ///< nodes[0] is the root

  double predict(const Features& x) const;
};

struct ForestParams {
  int n_trees = 1000;
  int max_features = 3;      ///< candidate features per split, round(sqrt(12))
  int min_samples_leaf = 2;
};

/// Forest features are used raw: splits depend only on feature order, so no
/// standardization is stored.
struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestParams params;
  std::uint64_t seed = 0;

  /// Mean leaf probability of class 1 over all trees.
  double score(const Features& x) const;
};

/// Bagged Gini trees. Tree t is grown from its own stream seeded by
/// (seed, t), so the result does not depend on how many threads run.
ForestModel train_forest(const LabeledDataset& data, const ForestParams& params,
                         std::uint64_t seed);

/// Mean decrease in Gini impurity per feature, normalized to sum to 1.
Features feature_importance(const ForestModel& model);

namespace serial {
ForestModel train_forest(const LabeledDataset& data, const ForestParams& params,
                         std::uint64_t seed);
}  // namespace serial

}  // namespace sartex::classify
