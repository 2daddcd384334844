#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sartex/raster.hpp"

namespace sartex::texture {

/// Linear clip-and-scale of dB values onto `levels` grey tones.
struct QuantSpec {
  int levels = 32;
  double lo = -30.0;
  double hi = 5.0;
};

enum class Angle { Deg0, Deg45, Deg90, Deg135 };

/// Pixel displacement for an angle at distance s; image y grows downward.
struct Offset {
  int dx = 0;
  int dy = 0;
};

Offset offset_for(Angle angle, int distance);
int degrees(Angle angle);
Angle parse_angle(int degrees);

struct OffsetSpec {
  int distance = 1;
  std::vector<Angle> angles{Angle::Deg0, Angle::Deg45, Angle::Deg90, Angle::Deg135};
};

/// Grid of grey levels with the raster's row-major layout.
struct LevelGrid {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint16_t> levels;

  std::uint16_t at(std::size_t x, std::size_t y) const { return levels[y * width + x]; }
};

/// Normalized, symmetric co-occurrence matrix, row-major `levels x levels`.
struct Glcm {
  int levels = 0;
  OffsetSpec spec;
  std::vector<double> p;

  double at(int i, int j) const { return p[static_cast<std::size_t>(i) * levels + j]; }
};

struct HaralickFeatures {
  double contrast = 0.0;
  double dissimilarity = 0.0;
  double homogeneity = 0.0;
  double asm_ = 0.0;
  double energy = 0.0;
  double correlation = 0.0;
};

inline constexpr std::size_t kFeatureCount = 12;

/// Column names in vector order: the six VV features then the six VH features.
const std::array<std::string, kFeatureCount>& feature_names();

/// Twelve dual-polarization features for one chip at one date.
struct TextureVector {
  std::array<double, kFeatureCount> values{};
  std::optional<std::string> timestamp;

  HaralickFeatures vv() const;
  HaralickFeatures vh() const;

  friend bool operator==(const TextureVector&, const TextureVector&) = default;
};

/// Whether quantize() insists on gamma0 input.
enum class StagePolicy { RequireGamma0, AnyStage };

void validate(const QuantSpec& q);
void validate(const OffsetSpec& spec);

/// Clips every pixel to [lo, hi] and maps it to floor(f (N-1) + 0.5) with
/// f = (v - lo) / (hi - lo).
LevelGrid quantize(const Raster& r, const QuantSpec& q,
                   StagePolicy policy = StagePolicy::RequireGamma0);

/// Counts every in-bounds pixel pair (both directions) for every angle in
/// `spec`, sums the angle matrices and normalizes to unit mass.
Glcm glcm(const LevelGrid& grid, const OffsetSpec& spec, int levels);

HaralickFeatures haralick(const Glcm& g);

/// quantize -> glcm -> haralick for both channels.
TextureVector texture_vector(const Raster& vv, const Raster& vh, const QuantSpec& q,
                             const OffsetSpec& spec,
                             StagePolicy policy = StagePolicy::RequireGamma0);

struct ChipPair {
  Raster vv;
  Raster vh;
};

/// Batch feature extraction, parallel over chips with OpenMP. Output order
/// matches input order and equals the serial result exactly.
std::vector<TextureVector> texture_vectors(std::span<const ChipPair> chips, const QuantSpec& q,
                                           const OffsetSpec& spec,
                                           StagePolicy policy = StagePolicy::RequireGamma0);

namespace serial {
std::vector<TextureVector> texture_vectors(std::span<const ChipPair> chips, const QuantSpec& q,
                                           const OffsetSpec& spec,
                                           StagePolicy policy = StagePolicy::RequireGamma0);
}  // namespace serial

}  // namespace sartex::texture
