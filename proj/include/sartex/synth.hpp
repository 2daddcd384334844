#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sartex/dataset.hpp"
#include "sartex/raster.hpp"
#include "sartex/texture.hpp"

namespace sartex::synth {

/// Speckled background plus an optional cluster of bright point scatterers
/// around the chip center.
struct SceneSpec {
  std::size_t width = 64;
  std::size_t height = 64;
  double background_mean_db = -15.0;
  int n_scatterers = 0;
  double scatterer_boost_db = 15.0;
  double cluster_radius = 20.0;
  std::uint64_t seed = 0;
};

/// Default templates: 25 scatterers at +15 dB within radius 20 vs. none.
SceneSpec default_active_spec();
SceneSpec default_idle_spec();

void validate(const SceneSpec& spec);

/// Single-look speckle: linear power ~ Exponential(mean 10^(bg/10)). Each
/// scatterer adds 10^((bg + boost)/10) of power to one pixel drawn uniformly
/// from the cluster disk. Scatterer positions depend on `spec.seed` only;
/// the speckle stream also depends on the channel, so VV and VH chips of
/// one scene share scatterers but not speckle.
Raster generate_chip(const SceneSpec& spec, Channel channel);

/// Cross-pol background offset relative to co-pol.
inline constexpr double kVhOffsetDb = -6.0;

/// VV and VH chips of one scene; VH uses a background 6 dB below VV.
texture::ChipPair generate_pair(const SceneSpec& spec);

/// ISO date used as the key of synthetic sample `index` (2020-01-01 + index days).
std::string synthetic_date(std::size_t index);

struct SynthDataset {
  classify::LabeledDataset data;
  std::vector<texture::ChipPair> chips;  ///< parallel to data.samples
};

struct DatasetOptions {
  texture::QuantSpec quant;
  texture::OffsetSpec offsets;
};

/// 2 * n_per_class samples alternating idle (even index, label 0) and active
/// (odd index, label 1). Sample i uses seed derive(seed, i) and is stamped
/// with synthetic_date(i).
SynthDataset generate_dataset(std::size_t n_per_class, const SceneSpec& active,
                              const SceneSpec& idle, std::uint64_t seed,
                              const DatasetOptions& options = {});

}  // namespace sartex::synth
