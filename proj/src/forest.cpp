#include "sartex/forest.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "parallel.hpp"
#include "sartex/error.hpp"
#include "sartex/random.hpp"

namespace sartex::classify {

namespace {

constexpr std::uint64_t kForestSalt = 0xF0'4E'57;

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

double gini(double n1, double n) {
  if (n <= 0.0) return 0.0;
  const double p = n1 / n;
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const std::vector<Features>& x, const std::vector<int>& y, const ForestParams& params,
              random::Engine& rng)
      : x_(x), y_(y), params_(params), rng_(rng) {}

  DecisionTree build(std::vector<int> root_samples) {
    DecisionTree tree;
    struct Pending {
      int node;
      std::vector<int> samples;
    };
    std::vector<Pending> stack;
    tree.nodes.push_back(make_node(root_samples));
    stack.push_back({0, std::move(root_samples)});
    while (!stack.empty()) {
      Pending job = std::move(stack.back());
      stack.pop_back();
      TreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
      if (node.impurity == 0.0 ||
          job.samples.size() < 2 * static_cast<std::size_t>(params_.min_samples_leaf)) {
        continue;
      }
      const Split split = best_split(job.samples);
      if (split.feature < 0) continue;

      std::vector<int> left;
      std::vector<int> right;
      for (int s : job.samples) {
        (x_[static_cast<std::size_t>(s)][static_cast<std::size_t>(split.feature)] <=
                 split.threshold
             ? left
             : right)
            .push_back(s);
      }
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = static_cast<int>(tree.nodes.size());
      node.right = node.left + 1;
      const int left_id = node.left;
      const int right_id = node.right;
      // `node` is invalidated by the push_backs below.
      tree.nodes.push_back(make_node(left));
      tree.nodes.push_back(make_node(right));
      stack.push_back({right_id, std::move(right)});
      stack.push_back({left_id, std::move(left)});
    }
    return tree;
  }

 private:
  TreeNode make_node(const std::vector<int>& samples) const {
    double n1 = 0.0;
    for (int s : samples) n1 += y_[static_cast<std::size_t>(s)];
    const double n = static_cast<double>(samples.size());
    TreeNode node;
    node.weight = n;
    node.probability = n > 0.0 ? n1 / n : 0.0;
    node.impurity = gini(n1, n);
    return node;
  }

  // Visits features in a random order. At least max_features are examined;
  // if none of them admits a split with positive gain, the search continues
  // through the remaining features.
  Split best_split(const std::vector<int>& samples) {
    std::array<int, texture::kFeatureCount> order;
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[random::uniform_index(rng_, i + 1)]);
    }

    const std::size_t n = samples.size();
    const auto min_leaf = static_cast<std::size_t>(params_.min_samples_leaf);
    double n1_total = 0.0;
    for (int s : samples) n1_total += y_[static_cast<std::size_t>(s)];
    const double parent = static_cast<double>(n) * gini(n1_total, static_cast<double>(n));

    Split best;
    std::vector<std::pair<double, int>> column(n);
    for (std::size_t k = 0; k < order.size(); ++k) {
      if (k >= static_cast<std::size_t>(params_.max_features) && best.feature >= 0) break;
      const auto f = static_cast<std::size_t>(order[k]);
      for (std::size_t i = 0; i < n; ++i) {
        const auto s = static_cast<std::size_t>(samples[i]);
        column[i] = {x_[s][f], y_[s]};
      }
      std::sort(column.begin(), column.end());
      double left1 = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        left1 += column[i - 1].second;
        if (column[i - 1].first == column[i].first) continue;
        if (i < min_leaf || n - i < min_leaf) continue;
        const double nl = static_cast<double>(i);
        const double nr = static_cast<double>(n - i);
        const double child = nl * gini(left1, nl) + nr * gini(n1_total - left1, nr);
        const double gain = parent - child;
        if (gain > best.gain) {
          const double a = column[i - 1].first;
          const double b = column[i].first;
          double mid = a + (b - a) / 2.0;
          if (!(mid < b)) mid = a;
          best = {static_cast<int>(f), mid, gain};
        }
      }
    }
    // Guard against splits whose only "gain" is rounding noise.
    if (best.gain <= 1e-12 * std::max(parent, 1.0)) return {};
    return best;
  }

  const std::vector<Features>& x_;
  const std::vector<int>& y_;
  const ForestParams& params_;
  random::Engine& rng_;
};

void check_params(const ForestParams& p) {
  if (p.n_trees < 1) throw Error(ErrorKind::Training, "forest", "n_trees must be >= 1");
  if (p.max_features < 1 || p.max_features > static_cast<int>(texture::kFeatureCount)) {
    throw Error(ErrorKind::Training, "forest", "max_features must lie in [1, 12]");
  }
  if (p.min_samples_leaf < 1) {
    throw Error(ErrorKind::Training, "forest", "min_samples_leaf must be >= 1");
  }
}

struct Columns {
  std::vector<Features> x;
  std::vector<int> y;
};

Columns columns(const LabeledDataset& data) {
  Columns c;
  c.x.reserve(data.size());
  c.y.reserve(data.size());
  for (const auto& s : data.samples) {
    c.x.push_back(s.x.values);
    c.y.push_back(s.label);
  }
  return c;
}

DecisionTree grow_tree(const Columns& cols, const ForestParams& params, std::uint64_t seed,
                       std::size_t tree_index) {
  random::Engine rng(random::derive(seed, tree_index, kForestSalt));
  const std::size_t n = cols.x.size();
  std::vector<int> bootstrap(n);
  for (auto& s : bootstrap) s = static_cast<int>(random::uniform_index(rng, n));
  return TreeBuilder(cols.x, cols.y, params, rng).build(std::move(bootstrap));
}

}  // namespace

double DecisionTree::predict(const Features& x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& node = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold
                                     ? node.left
                                     : node.right);
  }
  return nodes[i].probability;
}

double ForestModel::score(const Features& x) const {
  double sum = 0.0;
  for (const auto& t : trees) sum += t.predict(x);
  return sum / static_cast<double>(trees.size());
}

ForestModel train_forest(const LabeledDataset& data, const ForestParams& params,
                         std::uint64_t seed) {
  check_params(params);
  validate_for_training(data);
  const Columns cols = columns(data);
  ForestModel model{std::vector<DecisionTree>(static_cast<std::size_t>(params.n_trees)), params,
                    seed};
  detail::parallel_for(model.trees.size(), [&](std::size_t t) {
    model.trees[t] = grow_tree(cols, params, seed, t);
  });
  return model;
}

namespace serial {

ForestModel train_forest(const LabeledDataset& data, const ForestParams& params,
                         std::uint64_t seed) {
  check_params(params);
  validate_for_training(data);
  const Columns cols = columns(data);
  ForestModel model{{}, params, seed};
  model.trees.reserve(static_cast<std::size_t>(params.n_trees));
  for (std::size_t t = 0; t < static_cast<std::size_t>(params.n_trees); ++t) {
    model.trees.push_back(grow_tree(cols, params, seed, t));
  }
  return model;
}

}  // namespace serial

Features feature_importance(const ForestModel& model) {
  Features total{};
  std::size_t contributing = 0;
  for (const auto& tree : model.trees) {
    Features per_tree{};
    double sum = 0.0;
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      const auto& l = tree.nodes[static_cast<std::size_t>(node.left)];
      const auto& r = tree.nodes[static_cast<std::size_t>(node.right)];
      const double decrease =
          node.weight * node.impurity - l.weight * l.impurity - r.weight * r.impurity;
      per_tree[static_cast<std::size_t>(node.feature)] += decrease;
      sum += decrease;
    }
    if (sum <= 0.0) continue;
    for (std::size_t f = 0; f < total.size(); ++f) total[f] += per_tree[f] / sum;
    ++contributing;
  }
  if (contributing == 0) {
    // No tree ever split: nothing distinguishes the features.
    total.fill(1.0 / static_cast<double>(total.size()));
    return total;
  }
  double sum = 0.0;
  for (double v : total) sum += v;
  for (double& v : total) v /= sum;
  return total;
}

}  // namespace sartex::classify
