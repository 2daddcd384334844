#include <gtest/gtest.h>

#include <cmath>

#include "datasets.hpp"
#include "sartex/model.hpp"
#include "test_util.hpp"

using namespace sartex;
using namespace sartex::classify;
using sartex::testing::TempDir;
using sartex::testing::error_kind;

namespace {

TrainParams small_params() {
  TrainParams p;
  p.forest.n_trees = 15;
  p.mlp.epochs = 200;
  return p;
}

LabeledDataset noisy_clusters(std::size_t n, std::uint64_t seed) {
  auto d = sartex::testing::two_clusters(n, seed);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 2.0);
  for (auto& s : d.samples) {
    for (auto& v : s.x.values) v += g(rng);
  }
  return d;
}

}  // namespace

TEST(Model, KindNames) {
  for (auto k : {ClassifierKind::Forest, ClassifierKind::Svm, ClassifierKind::Mlp}) {
    EXPECT_EQ(parse_kind(to_string(k)), k);
  }
  EXPECT_EQ(error_kind([] { parse_kind("knn"); }), ErrorKind::Format);
}

TEST(Model, PredictionScoresAndLabelsAgree) {
  const auto d = noisy_clusters(30, 1);
  for (auto k : {ClassifierKind::Forest, ClassifierKind::Svm, ClassifierKind::Mlp}) {
    const Model m = train(k, d, small_params(), 3);
    EXPECT_EQ(kind_of(m), k);
    for (const auto& s : d.samples) {
      const auto p = predict(m, s.x);
      EXPECT_GE(p.score, 0.0);
      EXPECT_LE(p.score, 1.0);
      EXPECT_EQ(p.label, p.score > 0.5 ? 1 : 0);
    }
  }
}

TEST(Model, SvmScoreIsLogisticOfDecision) {
  const auto d = noisy_clusters(20, 2);
  const Model m = train(ClassifierKind::Svm, d, {}, 0);
  const auto& svm = std::get<SvmModel>(m);
  const auto& x = d.samples[3].x;
  EXPECT_NEAR(predict(m, x).score, 1.0 / (1.0 + std::exp(-svm.decision(x.values))), 1e-15);
}

TEST(Model, PredictRejectsNonFiniteFeatures) {
  const Model m = train(ClassifierKind::Forest, noisy_clusters(10, 3), small_params(), 0);
  texture::TextureVector x;
  x.values[4] = INFINITY;
  EXPECT_EQ(error_kind([&] { predict(m, x); }), ErrorKind::Input);
}

TEST(Evaluate, SeparableTrainingDataAndConstantModel) {
  const auto d = sartex::testing::separable_on_feature0(25, 4);
  const Model m = train(ClassifierKind::Forest, d, small_params(), 0);
  EXPECT_EQ(evaluate(m, d), 1.0);

  // A single leaf with probability 1 predicts class 1 everywhere.
  ForestModel constant;
  constant.trees.push_back({{TreeNode{-1, 0.0, -1, -1, 1.0, 0.0, 1.0}}});
  constant.params.n_trees = 1;
  EXPECT_EQ(evaluate(Model{constant}, d), 0.5);
  EXPECT_EQ(error_kind([&] { evaluate(m, {}); }), ErrorKind::Input);
}

TEST(Evaluate, MultiSeed) {
  const auto train_set = noisy_clusters(30, 5);
  const auto test_set = noisy_clusters(30, 6);
  const auto same = evaluate_multiseed(train_set, test_set, ClassifierKind::Forest,
                                       std::vector<std::uint64_t>(10, 7), small_params());
  const double single = evaluate(train(ClassifierKind::Forest, train_set, small_params(), 7), test_set);
  EXPECT_EQ(same.accuracies.size(), 10u);
  for (double a : same.accuracies) EXPECT_EQ(a, single);
  EXPECT_DOUBLE_EQ(same.mean_accuracy, single);

  const auto sep = sartex::testing::separable_on_feature0(20, 8);
  const auto r = evaluate_multiseed(sep, sep, ClassifierKind::Forest,
                                    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}, small_params());
  EXPECT_EQ(r.mean_accuracy, 1.0);
  EXPECT_EQ(error_kind([&] { evaluate_multiseed(sep, sep, ClassifierKind::Svm, {}); }),
            ErrorKind::Input);
}

TEST(Evaluate, MultiSeedAnnotatesErrorsWithSeed) {
  auto bad = noisy_clusters(5, 9);
  for (auto& s : bad.samples) s.label = 0;
  try {
    evaluate_multiseed(bad, bad, ClassifierKind::Forest, {42}, small_params());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Training);
    EXPECT_NE(std::string(e.what()).find("seed 42"), std::string::npos) << e.what();
  }
}

TEST(Persistence, EveryKindRoundTripsWithIdenticalPredictions) {
  TempDir dir("model_rt");
  const auto d = noisy_clusters(25, 10);
  const auto probe = noisy_clusters(40, 11);
  for (auto k : {ClassifierKind::Forest, ClassifierKind::Svm, ClassifierKind::Mlp}) {
    const Model m = train(k, d, small_params(), 12);
    const auto path = dir / (std::string(to_string(k)) + ".json");
    save_model(m, path);
    const Model back = load_model(path);
    EXPECT_EQ(kind_of(back), k);
    for (const auto& s : probe.samples) {
      const auto a = predict(m, s.x);
      const auto b = predict(back, s.x);
      EXPECT_EQ(a.score, b.score);
      EXPECT_EQ(a.label, b.label);
    }
    EXPECT_EQ(model_to_json(back), model_to_json(m));
  }
}

TEST(Persistence, RejectsBadFiles) {
  TempDir dir("model_bad");
  const Model m = train(ClassifierKind::Svm, noisy_clusters(10, 13), {}, 0);
  const std::string json = model_to_json(m);

  std::string unknown = json;
  unknown.replace(unknown.find("\"svm\""), 5, "\"knn\"");
  EXPECT_EQ(error_kind([&] { model_from_json(unknown); }), ErrorKind::Format);

  std::string version = json;
  version.replace(version.find("\"version\":1"), 11, "\"version\":2");
  EXPECT_EQ(error_kind([&] { model_from_json(version); }), ErrorKind::Format);

  sartex::testing::write_file(dir / "t.json", json.substr(0, json.size() / 2));
  EXPECT_EQ(error_kind([&] { load_model(dir / "t.json"); }), ErrorKind::Format);
  EXPECT_EQ(error_kind([&] { model_from_json("[]"); }), ErrorKind::Format);
  EXPECT_EQ(error_kind([&] { load_model(dir / "missing.json"); }), ErrorKind::Io);
}
