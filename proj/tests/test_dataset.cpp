#include <gtest/gtest.h>

#include <cmath>

#include "datasets.hpp"
#include "sartex/dataset.hpp"
#include "test_util.hpp"

using namespace sartex;
using namespace sartex::classify;
using sartex::testing::TempDir;
using sartex::testing::error_kind;
using sartex::testing::make_dataset;

TEST(Dataset, ValidateForTraining) {
  Features a{};
  Features b{};
  b[3] = 1.0;
  EXPECT_NO_THROW(validate_for_training(make_dataset({a, b}, {0, 1})));
  EXPECT_EQ(error_kind([&] { validate_for_training(make_dataset({a, b}, {1, 1})); }),
            ErrorKind::Training);
  EXPECT_EQ(error_kind([&] { validate_for_training(make_dataset({a, b}, {0, 2})); }),
            ErrorKind::Training);
  b[5] = NAN;
  EXPECT_EQ(error_kind([&] { validate_for_training(make_dataset({a, b}, {0, 1})); }),
            ErrorKind::Training);
  EXPECT_EQ(error_kind([&] { validate_for_training({}); }), ErrorKind::Training);
}

TEST(Dataset, StratifiedSplitKeepsClassOrder) {
  std::vector<Features> xs(10);
  std::vector<int> ys;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i][0] = static_cast<double>(i);
    ys.push_back(i < 4 ? 1 : 0);  // 4 positives, 6 negatives
  }
  const auto [train, test] = stratified_split(make_dataset(xs, ys), 0.5);
  EXPECT_EQ(train.count(1), 2u);
  EXPECT_EQ(train.count(0), 3u);
  EXPECT_EQ(test.size(), 5u);
  std::vector<double> first;
  for (const auto& s : train.samples) first.push_back(s.x.values[0]);
  EXPECT_EQ(first, (std::vector<double>{0, 1, 4, 5, 6}));
  EXPECT_EQ(error_kind([&] { stratified_split(make_dataset(xs, ys), 1.0); }), ErrorKind::Input);
}

TEST(Standardizer, ZeroMeanUnitVarianceAndConstantColumns) {
  const auto d = sartex::testing::two_clusters(50, 4);
  const auto s = Standardizer::fit(d);
  Features mean{};
  Features sq{};
  for (const auto& smp : d.samples) {
    const auto z = s.apply(smp.x.values);
    for (std::size_t f = 0; f < z.size(); ++f) {
      mean[f] += z[f] / d.size();
      sq[f] += z[f] * z[f] / d.size();
    }
  }
  for (std::size_t f = 0; f < mean.size(); ++f) {
    EXPECT_NEAR(mean[f], 0.0, 1e-12);
    EXPECT_NEAR(sq[f], 1.0, 1e-12);
  }

  Features c{};
  c.fill(3.0);
  const auto constant = Standardizer::fit(make_dataset({c, c}, {0, 1}));
  EXPECT_EQ(constant.scale[0], 1.0);
  EXPECT_EQ(constant.apply(c)[0], 0.0);
  EXPECT_EQ(Standardizer::identity().apply(c), c);
}

TEST(FeatureCsv, RoundTripWithAndWithoutLabels) {
  TempDir dir("features_csv");
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<texture::TextureVector> rows(7);
  std::vector<std::optional<int>> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto& v : rows[i].values) v = u(rng);
    rows[i].timestamp = "2020-02-0" + std::to_string(i + 1);
    labels.push_back(static_cast<int>(i % 2));
  }
  write_features_csv(dir / "l.csv", rows, labels);
  const auto t = read_features_csv(dir / "l.csv");
  EXPECT_TRUE(t.has_label_column);
  EXPECT_EQ(t.rows, rows);
  EXPECT_EQ(t.labels, labels);

  write_features_csv(dir / "u.csv", rows);
  const auto t2 = read_features_csv(dir / "u.csv");
  EXPECT_FALSE(t2.has_label_column);
  EXPECT_EQ(t2.rows, rows);
  EXPECT_EQ(sartex::testing::read_file(dir / "u.csv").substr(0, 22), "timestamp,vv_contrast,");
}

TEST(FeatureCsv, Errors) {
  TempDir dir("features_csv_err");
  sartex::testing::write_file(dir / "h.csv", "timestamp,a,b\n");
  EXPECT_EQ(error_kind([&] { read_features_csv(dir / "h.csv"); }), ErrorKind::Format);
  sartex::testing::write_file(dir / "r.csv", features_csv_header(false) + "\n2020-01-01,1,2\n");
  EXPECT_EQ(error_kind([&] { read_features_csv(dir / "r.csv"); }), ErrorKind::Format);
  EXPECT_EQ(error_kind([&] { read_features_csv(dir / "none.csv"); }), ErrorKind::Io);
}

TEST(LabelCsv, JoinOnTimestamp) {
  TempDir dir("labels_csv");
  write_labels_csv(dir / "labels.csv", {{"2020-01-02", 1}, {"2020-01-01", 0}});
  const auto labels = read_labels_csv(dir / "labels.csv");
  EXPECT_EQ(labels.at("2020-01-02"), 1);

  FeatureTable t;
  t.rows.resize(2);
  t.rows[0].timestamp = "2020-01-01";
  t.rows[1].timestamp = "2020-01-02";
  t.labels.resize(2);
  const auto d = to_dataset(t, &labels);
  EXPECT_EQ(d.samples[0].label, 0);
  EXPECT_EQ(d.samples[1].label, 1);

  t.rows[1].timestamp = "2020-01-03";
  EXPECT_EQ(error_kind([&] { to_dataset(t, &labels); }), ErrorKind::Input);
  EXPECT_EQ(error_kind([&] { to_dataset(t); }), ErrorKind::Input);

  sartex::testing::write_file(dir / "dup.csv", "timestamp,label\na,1\na,0\n");
  EXPECT_EQ(error_kind([&] { read_labels_csv(dir / "dup.csv"); }), ErrorKind::Format);
}
