#include "sartex/model.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include <json.hpp>

#include "sartex/error.hpp"

namespace sartex::classify {

namespace {

using nlohmann::json;

Error model_error(ErrorKind kind, const std::string& message) {
  return Error(kind, "classify", message);
}

double logistic(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

json features_json(const Features& f) { return json(std::vector<double>(f.begin(), f.end())); }

Features features_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != texture::kFeatureCount) {
    throw model_error(ErrorKind::Format, "feature array must hold 12 values");
  }
  Features f;
  std::copy(v.begin(), v.end(), f.begin());
  return f;
}

json standardizer_json(const Standardizer& s) {
  return {{"mean", features_json(s.mean)}, {"scale", features_json(s.scale)}};
}

Standardizer standardizer_from(const json& j) {
  return {features_from(j.at("mean")), features_from(j.at("scale"))};
}

json to_json(const ForestModel& m) {
  json trees = json::array();
  for (const auto& t : m.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.probability, n.impurity,
                       n.weight});
    }
    trees.push_back(std::move(nodes));
  }
  return {{"n_trees", m.params.n_trees},
          {"max_features", m.params.max_features},
          {"min_samples_leaf", m.params.min_samples_leaf},
          {"seed", m.seed},
          {"trees", std::move(trees)}};
}

ForestModel forest_from(const json& j) {
  ForestModel m;
  m.params.n_trees = j.at("n_trees").get<int>();
  m.params.max_features = j.at("max_features").get<int>();
  m.params.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& jt : j.at("trees")) {
    DecisionTree t;
    for (const auto& jn : jt) {
      if (jn.size() != 7) throw model_error(ErrorKind::Format, "tree node must have 7 fields");
      TreeNode n;
      n.feature = jn[0].get<int>();
      n.threshold = jn[1].get<double>();
      n.left = jn[2].get<int>();
      n.right = jn[3].get<int>();
      n.probability = jn[4].get<double>();
      n.impurity = jn[5].get<double>();
      n.weight = jn[6].get<double>();
      t.nodes.push_back(n);
    }
    // Reject structurally broken trees now rather than crash at predict time.
    const int size = static_cast<int>(t.nodes.size());
    if (size == 0) throw model_error(ErrorKind::Format, "empty tree");
    for (int i = 0; i < size; ++i) {
      const auto& n = t.nodes[static_cast<std::size_t>(i)];
      if (n.is_leaf()) continue;
      if (n.feature >= static_cast<int>(texture::kFeatureCount) || n.left <= i || n.right <= i ||
          n.left >= size || n.right >= size) {
        throw model_error(ErrorKind::Format, "tree node " + std::to_string(i) + " is malformed");
      }
    }
    m.trees.push_back(std::move(t));
  }
  if (m.trees.empty() || static_cast<int>(m.trees.size()) != m.params.n_trees) {
    throw model_error(ErrorKind::Format, "tree count does not match n_trees");
  }
  return m;
}

json to_json(const SvmModel& m) {
  json svs = json::array();
  for (const auto& sv : m.support_vectors) svs.push_back(features_json(sv));
  return {{"standardizer", standardizer_json(m.standardizer)},
          {"support_vectors", std::move(svs)},
          {"dual_coef", m.dual_coef},
          {"bias", m.bias},
          {"gamma", m.gamma},
          {"c", m.c},
          {"seed", m.seed}};
}

SvmModel svm_from(const json& j) {
  SvmModel m;
  m.standardizer = standardizer_from(j.at("standardizer"));
  for (const auto& sv : j.at("support_vectors")) m.support_vectors.push_back(features_from(sv));
  m.dual_coef = j.at("dual_coef").get<std::vector<double>>();
  m.bias = j.at("bias").get<double>();
  m.gamma = j.at("gamma").get<double>();
  m.c = j.at("c").get<double>();
  m.seed = j.at("seed").get<std::uint64_t>();
  if (m.dual_coef.size() != m.support_vectors.size()) {
    throw model_error(ErrorKind::Format, "dual_coef and support_vectors differ in length");
  }
  return m;
}

json to_json(const MlpModel& m) {
  json layers = json::array();
  for (const auto& l : m.layers) {
    layers.push_back({{"inputs", l.inputs},
                      {"outputs", l.outputs},
                      {"weights", l.weights},
                      {"bias", l.bias}});
  }
  return {{"standardizer", standardizer_json(m.standardizer)},
          {"activation", {{"hidden", "relu"}, {"output", "sigmoid"}}},
          {"layers", std::move(layers)},
          {"seed", m.seed}};
}

MlpModel mlp_from(const json& j) {
  MlpModel m;
  m.standardizer = standardizer_from(j.at("standardizer"));
  m.seed = j.at("seed").get<std::uint64_t>();
  int expected_inputs = static_cast<int>(texture::kFeatureCount);
  for (const auto& jl : j.at("layers")) {
    DenseLayer l;
    l.inputs = jl.at("inputs").get<int>();
    l.outputs = jl.at("outputs").get<int>();
    l.weights = jl.at("weights").get<std::vector<double>>();
    l.bias = jl.at("bias").get<std::vector<double>>();
    if (l.inputs != expected_inputs || l.outputs < 1 ||
        l.weights.size() != static_cast<std::size_t>(l.inputs) * l.outputs ||
        l.bias.size() != static_cast<std::size_t>(l.outputs)) {
      throw model_error(ErrorKind::Format, "inconsistent MLP layer dimensions");
    }
    expected_inputs = l.outputs;
    m.layers.push_back(std::move(l));
  }
  if (m.layers.empty() || expected_inputs != 1) {
    throw model_error(ErrorKind::Format, "MLP must end in a single output unit");
  }
  return m;
}

}  // namespace

std::string_view to_string(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::Forest: return "forest";
    case ClassifierKind::Svm: return "svm";
    case ClassifierKind::Mlp: return "mlp";
  }
  return "?";
}

ClassifierKind parse_kind(std::string_view text) {
  if (text == "forest") return ClassifierKind::Forest;
  if (text == "svm") return ClassifierKind::Svm;
  if (text == "mlp") return ClassifierKind::Mlp;
  throw model_error(ErrorKind::Format, "unknown classifier kind '" + std::string(text) + "'");
}

ClassifierKind kind_of(const Model& model) {
  return static_cast<ClassifierKind>(model.index());
}

Model train(ClassifierKind kind, const LabeledDataset& data, const TrainParams& params,
            std::uint64_t seed) {
  switch (kind) {
    case ClassifierKind::Forest: return train_forest(data, params.forest, seed);
    case ClassifierKind::Svm: return train_svm(data, params.svm, seed);
    case ClassifierKind::Mlp: return train_mlp(data, params.mlp, seed);
  }
  throw model_error(ErrorKind::Training, "unknown classifier kind");
}

Prediction predict(const Model& model, const texture::TextureVector& x) {
  require_finite(x.values);
  const double score = std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ForestModel>) {
          return m.score(x.values);
        } else if constexpr (std::is_same_v<T, SvmModel>) {
          return logistic(m.decision(x.values));
        } else {
          return m.probability(x.values);
        }
      },
      model);
  return {score > 0.5 ? 1 : 0, score};
}

double evaluate(const Model& model, const LabeledDataset& test) {
  if (test.empty()) throw model_error(ErrorKind::Input, "cannot evaluate on an empty test set");
  std::size_t correct = 0;
  for (const auto& s : test.samples) correct += predict(model, s.x).label == s.label;
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

MultiSeedResult evaluate_multiseed(const LabeledDataset& train_set, const LabeledDataset& test,
                                   ClassifierKind kind, const std::vector<std::uint64_t>& seeds,
                                   const TrainParams& params) {
  if (seeds.empty()) throw model_error(ErrorKind::Input, "need at least one seed");
  MultiSeedResult r;
  for (std::uint64_t seed : seeds) {
    try {
      r.accuracies.push_back(evaluate(train(kind, train_set, params, seed), test));
    } catch (const Error& e) {
      throw Error(e.kind(), e.module(), std::string(e.what()) + " (seed " + std::to_string(seed) + ")");
    }
  }
  double sum = 0.0;
  for (double a : r.accuracies) sum += a;
  r.mean_accuracy = sum / static_cast<double>(r.accuracies.size());
  return r;
}

std::string model_to_json(const Model& model) {
  json j;
  j["format"] = "sartex-model";
  j["version"] = kModelFormatVersion;
  j["kind"] = std::string(to_string(kind_of(model)));
  j["model"] = std::visit([](const auto& m) { return to_json(m); }, model);
  return j.dump() + "\n";
}

Model model_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "sartex-model") {
      throw model_error(ErrorKind::Format, "not a model file");
    }
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw model_error(ErrorKind::Format, "unsupported model version " + std::to_string(version));
    }
    const auto& body = j.at("model");
    switch (parse_kind(j.at("kind").get<std::string>())) {
      case ClassifierKind::Forest: return forest_from(body);
      case ClassifierKind::Svm: return svm_from(body);
      case ClassifierKind::Mlp: return mlp_from(body);
    }
  } catch (const json::exception& e) {
    throw model_error(ErrorKind::Format, std::string("malformed model file: ") + e.what());
  }
  throw model_error(ErrorKind::Format, "malformed model file");
}

void save_model(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw model_error(ErrorKind::Io, "cannot write " + path.string());
  out << model_to_json(model);
  if (!out) throw model_error(ErrorKind::Io, "write failed for " + path.string());
}

Model load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw model_error(ErrorKind::Io, "cannot open " + path.string());
  const std::string text(std::istreambuf_iterator<char>(in), {});
  return model_from_json(text);
}

}  // namespace sartex::classify
