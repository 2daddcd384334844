#include "sartex/texture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "parallel.hpp"
#include "sartex/error.hpp"

namespace sartex::texture {

namespace {

Error texture_error(ErrorKind kind, const std::string& message) {
  return Error(kind, "texture", message);
}

}  // namespace

Offset offset_for(Angle angle, int distance) {
  switch (angle) {
    case Angle::Deg0: return {distance, 0};
    case Angle::Deg45: return {distance, -distance};
    case Angle::Deg90: return {0, -distance};
    case Angle::Deg135: return {-distance, -distance};
  }
  return {};
}

int degrees(Angle angle) {
  switch (angle) {
    case Angle::Deg0: return 0;
    case Angle::Deg45: return 45;
    case Angle::Deg90: return 90;
    case Angle::Deg135: return 135;
  }
  return -1;
}

Angle parse_angle(int deg) {
  switch (deg) {
    case 0: return Angle::Deg0;
    case 45: return Angle::Deg45;
    case 90: return Angle::Deg90;
    case 135: return Angle::Deg135;
    default:
      throw texture_error(ErrorKind::Spec,
                          "angle must be one of 0, 45, 90, 135; got " + std::to_string(deg));
  }
}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "vv_contrast", "vv_dissimilarity", "vv_homogeneity", "vv_asm", "vv_energy", "vv_correlation",
      "vh_contrast", "vh_dissimilarity", "vh_homogeneity", "vh_asm", "vh_energy", "vh_correlation",
  };
  return names;
}

HaralickFeatures TextureVector::vv() const {
  return {values[0], values[1], values[2], values[3], values[4], values[5]};
}

HaralickFeatures TextureVector::vh() const {
  return {values[6], values[7], values[8], values[9], values[10], values[11]};
}

void validate(const QuantSpec& q) {
  if (q.levels < 2 || q.levels > 256) {
    throw texture_error(ErrorKind::Spec,
                        "levels must lie in [2, 256], got " + std::to_string(q.levels));
  }
  if (!(q.lo < q.hi) || !std::isfinite(q.lo) || !std::isfinite(q.hi)) {
    throw texture_error(ErrorKind::Spec, "quantization range needs lo < hi, got [" +
                                             std::to_string(q.lo) + ", " + std::to_string(q.hi) +
                                             "]");
  }
}

void validate(const OffsetSpec& spec) {
  if (spec.distance < 1) {
    throw texture_error(ErrorKind::Spec,
                        "offset distance must be >= 1, got " + std::to_string(spec.distance));
  }
  if (spec.angles.empty()) throw texture_error(ErrorKind::Spec, "offset angle set is empty");
}

LevelGrid quantize(const Raster& r, const QuantSpec& q, StagePolicy policy) {
  validate(q);
  if (policy == StagePolicy::RequireGamma0 && r.stage() != Stage::Gamma0Db) {
    throw texture_error(ErrorKind::Input, "quantize expects GAMMA0_DB input, got " +
                                              std::string(to_string(r.stage())));
  }
  LevelGrid grid{r.width(), r.height(), std::vector<std::uint16_t>(r.size())};
  const double span = q.hi - q.lo;
  const double top = q.levels - 1;
  const auto& px = r.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    const double v = std::clamp(static_cast<double>(px[i]), q.lo, q.hi);
    const double level = std::floor((v - q.lo) / span * top + 0.5);
    grid.levels[i] = static_cast<std::uint16_t>(std::min(level, top));
  }
  return grid;
}

Glcm glcm(const LevelGrid& grid, const OffsetSpec& spec, int levels) {
  validate(spec);
  if (levels < 2 || levels > 256) {
    throw texture_error(ErrorKind::Spec, "levels must lie in [2, 256]");
  }
  if (grid.levels.size() != grid.width * grid.height) {
    throw texture_error(ErrorKind::Input, "level grid size does not match its dimensions");
  }
  for (std::size_t i = 0; i < grid.levels.size(); ++i) {
    if (grid.levels[i] >= levels) {
      throw texture_error(ErrorKind::Quantization,
                          "level " + std::to_string(grid.levels[i]) + " at index " +
                              std::to_string(i) + " exceeds level count " +
                              std::to_string(levels));
    }
  }

  const auto n = static_cast<std::size_t>(levels);
  std::vector<std::uint64_t> counts(n * n, 0);
  std::uint64_t total = 0;
  const auto w = static_cast<std::ptrdiff_t>(grid.width);
  const auto h = static_cast<std::ptrdiff_t>(grid.height);

  for (Angle angle : spec.angles) {
    const Offset o = offset_for(angle, spec.distance);
    // Restrict (x, y) so that (x + dx, y + dy) stays inside the grid.
    const std::ptrdiff_t x_begin = std::max<std::ptrdiff_t>(0, -o.dx);
    const std::ptrdiff_t x_end = std::min<std::ptrdiff_t>(w, w - o.dx);
    const std::ptrdiff_t y_begin = std::max<std::ptrdiff_t>(0, -o.dy);
    const std::ptrdiff_t y_end = std::min<std::ptrdiff_t>(h, h - o.dy);
    for (std::ptrdiff_t y = y_begin; y < y_end; ++y) {
      const std::uint16_t* row = grid.levels.data() + y * w;
      const std::uint16_t* nbr = grid.levels.data() + (y + o.dy) * w + o.dx;
      for (std::ptrdiff_t x = x_begin; x < x_end; ++x) {
        const std::size_t i = row[x];
        const std::size_t j = nbr[x];
        ++counts[i * n + j];
        ++counts[j * n + i];
      }
    }
    if (x_end > x_begin && y_end > y_begin) {
      total += 2 * static_cast<std::uint64_t>((x_end - x_begin) * (y_end - y_begin));
    }
  }

  if (total == 0) {
    throw texture_error(ErrorKind::Degenerate,
                        "no pixel pairs at distance " + std::to_string(spec.distance) + " in a " +
                            std::to_string(grid.width) + "x" + std::to_string(grid.height) +
                            " grid");
  }

  Glcm g{levels, spec, std::vector<double>(n * n)};
  const double denom = static_cast<double>(total);
  for (std::size_t k = 0; k < counts.size(); ++k) g.p[k] = static_cast<double>(counts[k]) / denom;
  return g;
}

HaralickFeatures haralick(const Glcm& g) {
  const int n = g.levels;
  HaralickFeatures f;
  double mu_i = 0.0;
  double mu_j = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double p = g.at(i, j);
      if (p == 0.0) continue;
      const double d = i - j;
      f.contrast += p * d * d;
      f.dissimilarity += p * std::abs(d);
      f.homogeneity += p / (1.0 + d * d);
      f.asm_ += p * p;
      mu_i += i * p;
      mu_j += j * p;
    }
  }
  f.energy = std::sqrt(f.asm_);

  double var_i = 0.0;
  double var_j = 0.0;
  double cov = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double p = g.at(i, j);
      if (p == 0.0) continue;
      var_i += p * (i - mu_i) * (i - mu_i);
      var_j += p * (j - mu_j) * (j - mu_j);
      cov += p * (i - mu_i) * (j - mu_j);
    }
  }
  // A single occupied grey level has zero variance; treat it as perfectly
  // self-correlated rather than 0/0.
  const double denom = std::sqrt(var_i * var_j);
  f.correlation = denom > 0.0 ? std::clamp(cov / denom, -1.0, 1.0) : 1.0;
  return f;
}

TextureVector texture_vector(const Raster& vv, const Raster& vh, const QuantSpec& q,
                             const OffsetSpec& spec, StagePolicy policy) {
  if (vv.channel() != Channel::VV || vh.channel() != Channel::VH) {
    throw texture_error(ErrorKind::Input, "texture_vector needs a VV and a VH raster, got " +
                                              std::string(to_string(vv.channel())) + " and " +
                                              std::string(to_string(vh.channel())));
  }
  if (vv.width() != vh.width() || vv.height() != vh.height()) {
    throw texture_error(ErrorKind::Input,
                        "channel dimensions differ: " + std::to_string(vv.width()) + "x" +
                            std::to_string(vv.height()) + " vs " + std::to_string(vh.width()) +
                            "x" + std::to_string(vh.height()));
  }
  if (vv.timestamp() != vh.timestamp()) {
    throw texture_error(ErrorKind::Input, "channel timestamps differ");
  }
  TextureVector out;
  out.timestamp = vv.timestamp();
  const HaralickFeatures a = haralick(glcm(quantize(vv, q, policy), spec, q.levels));
  const HaralickFeatures b = haralick(glcm(quantize(vh, q, policy), spec, q.levels));
  out.values = {a.contrast, a.dissimilarity, a.homogeneity, a.asm_, a.energy, a.correlation,
                b.contrast, b.dissimilarity, b.homogeneity, b.asm_, b.energy, b.correlation};
  return out;
}

std::vector<TextureVector> texture_vectors(std::span<const ChipPair> chips, const QuantSpec& q,
                                           const OffsetSpec& spec, StagePolicy policy) {
  std::vector<TextureVector> out(chips.size());
  detail::parallel_for(chips.size(), [&](std::size_t i) {
    out[i] = texture_vector(chips[i].vv, chips[i].vh, q, spec, policy);
  });
  return out;
}

namespace serial {

std::vector<TextureVector> texture_vectors(std::span<const ChipPair> chips, const QuantSpec& q,
                                           const OffsetSpec& spec, StagePolicy policy) {
  std::vector<TextureVector> out;
  out.reserve(chips.size());
  for (const auto& c : chips) out.push_back(texture_vector(c.vv, c.vh, q, spec, policy));
  return out;
}

}  // namespace serial

}  // namespace sartex::texture
