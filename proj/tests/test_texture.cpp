#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sartex/synth.hpp"
#include "sartex/texture.hpp"
#include "test_util.hpp"

using namespace sartex;
using namespace sartex::texture;
using sartex::testing::error_kind;

namespace {

LevelGrid make_grid(const std::vector<std::vector<int>>& rows) {
  LevelGrid g;
  g.height = rows.size();
  g.width = rows[0].size();
  for (const auto& r : rows) {
    for (int v : r) g.levels.push_back(static_cast<std::uint16_t>(v));
  }
  return g;
}

Glcm from_entries(int n, const std::vector<std::tuple<int, int, double>>& entries) {
  Glcm g{n, {}, std::vector<double>(static_cast<std::size_t>(n * n), 0.0)};
  for (auto [i, j, p] : entries) g.p[static_cast<std::size_t>(i * n + j)] = p;
  return g;
}

Raster gamma_raster(std::size_t w, std::size_t h, std::vector<float> px, Channel c) {
  return Raster(w, h, std::move(px), Stage::Gamma0Db, c);
}

void expect_features(const HaralickFeatures& f, double contrast, double dissimilarity,
                     double homogeneity, double asm_, double energy, double correlation,
                     double tol) {
  EXPECT_NEAR(f.contrast, contrast, tol);
  EXPECT_NEAR(f.dissimilarity, dissimilarity, tol);
  EXPECT_NEAR(f.homogeneity, homogeneity, tol);
  EXPECT_NEAR(f.asm_, asm_, tol);
  EXPECT_NEAR(f.energy, energy, tol);
  EXPECT_NEAR(f.correlation, correlation, tol);
}

}  // namespace

TEST(Offsets, DiagonalRounding) {
  EXPECT_EQ(offset_for(Angle::Deg0, 2).dx, 2);
  EXPECT_EQ(offset_for(Angle::Deg0, 2).dy, 0);
  EXPECT_EQ(offset_for(Angle::Deg45, 1).dx, 1);
  EXPECT_EQ(offset_for(Angle::Deg45, 1).dy, -1);
  EXPECT_EQ(offset_for(Angle::Deg90, 3).dx, 0);
  EXPECT_EQ(offset_for(Angle::Deg90, 3).dy, -3);
  EXPECT_EQ(offset_for(Angle::Deg135, 1).dx, -1);
  EXPECT_EQ(offset_for(Angle::Deg135, 1).dy, -1);
  EXPECT_EQ(error_kind([] { parse_angle(30); }), ErrorKind::Spec);
}

TEST(Quantize, EndpointsMidpointAndClipping) {
  const QuantSpec two{2, -30.0, 5.0};
  const auto g = quantize(gamma_raster(2, 2, {-30.0f, 5.0f, -100.0f, 50.0f}, Channel::VV), two);
  EXPECT_EQ(g.levels, (std::vector<std::uint16_t>{0, 1, 0, 1}));

  // floor(0.5 * 31 + 0.5) = 16 at the exact midpoint.
  const QuantSpec q32{32, -30.0, 5.0};
  const auto m = quantize(gamma_raster(2, 2, {-12.5f, -30.0f, 5.0f, -31.0f}, Channel::VV), q32);
  EXPECT_EQ(m.levels[0], 16);
  EXPECT_EQ(m.levels[1], 0);
  EXPECT_EQ(m.levels[2], 31);
  EXPECT_EQ(m.levels[3], 0);
}

TEST(Quantize, SpecAndStageErrors) {
  const Raster r = gamma_raster(2, 2, {0, 0, 0, 0}, Channel::VV);
  EXPECT_EQ(error_kind([&] { quantize(r, {32, 5.0, 5.0}); }), ErrorKind::Spec);
  EXPECT_EQ(error_kind([&] { quantize(r, {32, 6.0, 5.0}); }), ErrorKind::Spec);
  EXPECT_EQ(error_kind([&] { quantize(r, {1, 0.0, 5.0}); }), ErrorKind::Spec);
  EXPECT_EQ(error_kind([&] { quantize(r, {257, 0.0, 5.0}); }), ErrorKind::Spec);
  const Raster dn(2, 2, {1, 2, 3, 4});
  EXPECT_EQ(error_kind([&] { quantize(dn, {}); }), ErrorKind::Input);
  EXPECT_NO_THROW(quantize(dn, {4, 0.0, 4.0}, StagePolicy::AnyStage));
}

TEST(Glcm, CheckerboardHorizontal) {
  const Glcm g = glcm(make_grid({{0, 1}, {1, 0}}), {1, {Angle::Deg0}}, 2);
  EXPECT_EQ(g.at(0, 1), 0.5);
  EXPECT_EQ(g.at(1, 0), 0.5);
  EXPECT_EQ(g.at(0, 0), 0.0);
  EXPECT_EQ(g.at(1, 1), 0.0);
}

TEST(Glcm, ConstantGridHasSingleDiagonalEntry) {
  const Glcm g = glcm(make_grid({{3, 3, 3}, {3, 3, 3}, {3, 3, 3}}), {}, 5);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) EXPECT_EQ(g.at(i, j), (i == 3 && j == 3) ? 1.0 : 0.0);
  }
}

TEST(Glcm, Errors) {
  EXPECT_EQ(error_kind([] { glcm(make_grid({{0, 1}, {1, 0}}), {5, {Angle::Deg0}}, 2); }),
            ErrorKind::Degenerate);
  EXPECT_EQ(error_kind([] { glcm(make_grid({{0, 2}, {1, 0}}), {}, 2); }), ErrorKind::Quantization);
  EXPECT_EQ(error_kind([] { glcm(make_grid({{0, 1}, {1, 0}}), {0, {Angle::Deg0}}, 2); }),
            ErrorKind::Spec);
  EXPECT_EQ(error_kind([] { glcm(make_grid({{0, 1}, {1, 0}}), {1, {}}, 2); }), ErrorKind::Spec);
}

// Exact agreement with direct enumeration on random grids and offset specs.
TEST(Glcm, MatchesBruteForceOracle) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dim(2, 32);
  std::uniform_int_distribution<int> lv(2, 16);
  std::uniform_int_distribution<int> dist(1, 4);
  const int all[4] = {0, 45, 90, 135};
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    const int n = lv(rng);
    std::vector<std::vector<int>> img(static_cast<std::size_t>(h), std::vector<int>(static_cast<std::size_t>(w)));
    std::uniform_int_distribution<int> level(0, n - 1);
    for (auto& row : img) {
      for (auto& v : row) v = level(rng);
    }
    OffsetSpec spec;
    spec.distance = dist(rng);
    spec.angles.clear();
    std::vector<int> degs;
    const int mask = std::uniform_int_distribution<int>(1, 15)(rng);
    for (int k = 0; k < 4; ++k) {
      if (mask & (1 << k)) {
        spec.angles.push_back(parse_angle(all[k]));
        degs.push_back(all[k]);
      }
    }
    const auto expected = oracle::brute_force_glcm(img, spec.distance, degs, n);
    if (expected.empty()) {
      EXPECT_EQ(error_kind([&] { glcm(make_grid(img), spec, n); }), ErrorKind::Degenerate);
      continue;
    }
    const Glcm g = glcm(make_grid(img), spec, n);
    ASSERT_EQ(g.p.size(), expected.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
      EXPECT_NEAR(g.p[k], expected[k], 1e-12);
      sum += g.p[k];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) EXPECT_EQ(g.at(i, j), g.at(j, i));
    }
    ++checked;
  }
  EXPECT_GT(checked, 150);
}

TEST(Haralick, Checkerboard) {
  const auto f = haralick(from_entries(2, {{0, 1, 0.5}, {1, 0, 0.5}}));
  expect_features(f, 1.0, 1.0, 0.5, 0.5, std::sqrt(0.5), -1.0, 1e-12);
}

TEST(Haralick, ConstantImage) {
  const auto f = haralick(from_entries(8, {{4, 4, 1.0}}));
  expect_features(f, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1e-12);
}

TEST(Haralick, UniformMatrix) {
  std::vector<std::tuple<int, int, double>> e;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) e.emplace_back(i, j, 1.0 / 16.0);
  }
  const auto f = haralick(from_entries(4, e));
  EXPECT_NEAR(f.asm_, 0.0625, 1e-12);
  EXPECT_NEAR(f.energy, 0.25, 1e-12);
  EXPECT_NEAR(f.correlation, 0.0, 1e-12);
}

// Reference values from scikit-image graycomatrix/graycoprops (angle matrices
// summed before normalization), frozen here.
TEST(Haralick, MatchesReferenceLibraryOnFixedGrid) {
  const auto grid = make_grid({{0, 1, 2, 3, 3},
                               {1, 1, 2, 0, 3},
                               {2, 3, 0, 0, 1},
                               {3, 3, 2, 1, 0},
                               {0, 2, 2, 1, 3},
                               {1, 0, 3, 2, 2}});
  expect_features(haralick(glcm(grid, {}, 4)), 2.157303370786517, 1.146067415730337,
                  0.5280898876404494, 0.06659512687791945, 0.25806031635631127,
                  0.11203491997505712, 1e-12);
  expect_features(haralick(glcm(grid, {2, {Angle::Deg0, Angle::Deg90}}, 4)), 3.31578947368421,
                  1.6842105263157894, 0.32105263157894737, 0.09452908587257616,
                  0.30745582751441897, -0.33296213808463254, 1e-12);
}

TEST(Haralick, BoundsOnRandomImages) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 32)(rng);
    const int w = std::uniform_int_distribution<int>(2, 24)(rng);
    const int h = std::uniform_int_distribution<int>(2, 24)(rng);
    // Few distinct levels in some trials so degenerate-ish matrices show up.
    const int used = std::uniform_int_distribution<int>(1, n)(rng);
    std::uniform_int_distribution<int> level(0, used - 1);
    std::vector<std::vector<int>> img(static_cast<std::size_t>(h), std::vector<int>(static_cast<std::size_t>(w)));
    for (auto& row : img) {
      for (auto& v : row) v = level(rng);
    }
    const auto f = haralick(glcm(make_grid(img), {}, n));
    EXPECT_GE(f.contrast, 0.0);
    EXPECT_GE(f.dissimilarity, 0.0);
    EXPECT_GT(f.homogeneity, 0.0);
    EXPECT_LE(f.homogeneity, 1.0 + 1e-12);
    EXPECT_GT(f.asm_, 0.0);
    EXPECT_LE(f.asm_, 1.0 + 1e-12);
    EXPECT_GT(f.energy, 0.0);
    EXPECT_LE(f.energy, 1.0 + 1e-12);
    EXPECT_GE(f.correlation, -1.0);
    EXPECT_LE(f.correlation, 1.0);
    EXPECT_NEAR(f.energy * f.energy, f.asm_, 1e-12);
  }
}

TEST(TextureVector, ConstantChannels) {
  const auto vv = gamma_raster(3, 3, std::vector<float>(9, -10.0f), Channel::VV);
  const auto vh = gamma_raster(3, 3, std::vector<float>(9, -20.0f), Channel::VH);
  const auto t = texture_vector(vv, vh, {}, {});
  const std::array<double, 12> expected{0, 0, 1, 1, 1, 1, 0, 0, 1, 1, 1, 1};
  for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(t.values[k], expected[k], 1e-12) << k;
}

TEST(TextureVector, CheckerboardAndConstant) {
  // Two grey levels at the window ends; horizontal offset only.
  const QuantSpec q{2, 0.0, 1.0};
  const OffsetSpec horiz{1, {Angle::Deg0}};
  const auto vv = gamma_raster(2, 2, {0.0f, 1.0f, 1.0f, 0.0f}, Channel::VV);
  const auto vh = gamma_raster(2, 2, {0.0f, 0.0f, 0.0f, 0.0f}, Channel::VH);
  const auto t = texture_vector(vv, vh, q, horiz);
  const std::array<double, 12> expected{1, 1, 0.5, 0.5, std::sqrt(0.5), -1, 0, 0, 1, 1, 1, 1};
  for (std::size_t k = 0; k < 12; ++k) EXPECT_NEAR(t.values[k], expected[k], 1e-12) << k;
  EXPECT_EQ(t.vv().correlation, t.values[5]);
  EXPECT_EQ(t.vh().contrast, t.values[6]);
}

TEST(TextureVector, InputErrors) {
  const auto vv2 = gamma_raster(2, 2, {0, 0, 0, 0}, Channel::VV);
  const auto vh3 = gamma_raster(3, 3, std::vector<float>(9, 0.0f), Channel::VH);
  EXPECT_EQ(error_kind([&] { texture_vector(vv2, vh3, {}, {}); }), ErrorKind::Input);
  const auto vv_as_vh = vv2.with_channel(Channel::VH);
  EXPECT_EQ(error_kind([&] { texture_vector(vv_as_vh, vv_as_vh, {}, {}); }), ErrorKind::Input);
  const auto vh2 = gamma_raster(2, 2, {0, 0, 0, 0}, Channel::VH).with_timestamp("2020-01-01");
  EXPECT_EQ(error_kind([&] { texture_vector(vv2, vh2, {}, {}); }), ErrorKind::Input);
}

TEST(TextureVector, FeatureNamesOrder) {
  const auto& names = feature_names();
  EXPECT_EQ(names[0], "vv_contrast");
  EXPECT_EQ(names[1], "vv_dissimilarity");
  EXPECT_EQ(names[5], "vv_correlation");
  EXPECT_EQ(names[6], "vh_contrast");
  EXPECT_EQ(names[11], "vh_correlation");
}

// Shifting every pixel and the quantization window by the same dB offset
// leaves the features unchanged. Pixels are multiples of 1/64 so the shifted
// values are exact in float.
TEST(TextureVector, InvariantToCommonDbOffset) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> steps(-40 * 64, 10 * 64);
  for (int trial = 0; trial < 30; ++trial) {
    const float shift = static_cast<float>(std::uniform_int_distribution<int>(-20, 20)(rng));
    std::vector<float> a(24 * 24);
    std::vector<float> b(24 * 24);
    for (auto& v : a) v = static_cast<float>(steps(rng)) / 64.0f;
    for (auto& v : b) v = static_cast<float>(steps(rng)) / 64.0f;
    std::vector<float> a2 = a;
    std::vector<float> b2 = b;
    for (auto& v : a2) v += shift;
    for (auto& v : b2) v += shift;
    const QuantSpec q{32, -30.0, 5.0};
    const QuantSpec q2{32, -30.0 + shift, 5.0 + shift};
    const auto t1 = texture_vector(gamma_raster(24, 24, a, Channel::VV),
                                   gamma_raster(24, 24, b, Channel::VH), q, {});
    const auto t2 = texture_vector(gamma_raster(24, 24, a2, Channel::VV),
                                   gamma_raster(24, 24, b2, Channel::VH), q2, {});
    EXPECT_EQ(t1.values, t2.values);
  }
}

// Paired comparison: the same speckle background with and without a bright
// scatterer cluster.
TEST(TextureVector, ScattererClusterRaisesContrastAndDissimilarity) {
  const int scenes = 60;
  int contrast_up = 0;
  int dissimilarity_up = 0;
  double mean_gap = 0.0;
  for (int s = 0; s < scenes; ++s) {
    synth::SceneSpec idle = synth::default_idle_spec();
    idle.seed = 1000 + static_cast<std::uint64_t>(s);
    synth::SceneSpec active = synth::default_active_spec();
    active.seed = idle.seed;
    const auto a = synth::generate_pair(active);
    const auto b = synth::generate_pair(idle);
    const auto ta = texture_vector(a.vv, a.vh, {}, {});
    const auto tb = texture_vector(b.vv, b.vh, {}, {});
    contrast_up += ta.vv().contrast > tb.vv().contrast;
    dissimilarity_up += ta.vv().dissimilarity > tb.vv().dissimilarity;
    mean_gap += ta.vv().contrast - tb.vv().contrast;
  }
  EXPECT_GE(contrast_up, 0.9 * scenes);
  EXPECT_GE(dissimilarity_up, 0.9 * scenes);
  EXPECT_GT(mean_gap / scenes, 0.0);
}

TEST(TextureVectors, ParallelMatchesSerialAndKeepsOrder) {
  std::vector<ChipPair> chips;
  for (std::uint64_t s = 0; s < 24; ++s) {
    synth::SceneSpec spec = s % 2 ? synth::default_active_spec() : synth::default_idle_spec();
    spec.seed = s;
    spec.width = spec.height = 48;
    auto p = synth::generate_pair(spec);
    const std::string ts = synth::synthetic_date(s);
    chips.push_back({p.vv.with_timestamp(ts), p.vh.with_timestamp(ts)});
  }
  const auto par = texture_vectors(chips, {}, {});
  const auto ser = serial::texture_vectors(chips, {}, {});
  ASSERT_EQ(par.size(), chips.size());
  EXPECT_EQ(par, ser);
  for (std::size_t i = 0; i < chips.size(); ++i) EXPECT_EQ(par[i].timestamp, chips[i].vv.timestamp());
}

TEST(TextureVectors, ParallelReportsFirstFailure) {
  std::vector<ChipPair> chips;
  for (int i = 0; i < 6; ++i) {
    chips.push_back({gamma_raster(2, 2, {0, 1, 2, 3}, Channel::VV),
                     gamma_raster(2, 2, {0, 1, 2, 3}, Channel::VH)});
  }
  chips[3].vh = chips[3].vh.with_timestamp("x");
  EXPECT_EQ(error_kind([&] { texture_vectors(chips, {}, {}); }), ErrorKind::Input);
}
