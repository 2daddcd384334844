#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sartex/model.hpp"
#include "sartex/texture.hpp"

namespace sartex::timeseries {

struct SeriesPoint {
  std::string timestamp;
  texture::TextureVector features;
  std::optional<int> label;
  std::optional<double> score;
};

struct SeriesOptions {
  texture::QuantSpec quant;
  texture::OffsetSpec offsets;
};

/// One point per date, in input order. Dates must be present and strictly
/// increasing; labels and scores are filled only when `model` is given.
std::vector<SeriesPoint> build_series(const std::vector<texture::ChipPair>& chips,
                                      const classify::Model* model,
                                      const SeriesOptions& options = {});

/// Loads `<date>_VV.sarr` / `<date>_VH.sarr` pairs from `dir`, sorted by date.
/// A date with only one of the two channels is an input error.
std::vector<texture::ChipPair> load_series_dir(const std::filesystem::path& dir);

/// Header `timestamp,<12 feature names>,label,score`.
std::string series_csv_header();
void emit_series_csv(const std::vector<SeriesPoint>& series, const std::filesystem::path& path);
std::string series_csv(const std::vector<SeriesPoint>& series);
std::vector<SeriesPoint> read_series_csv(const std::filesystem::path& path);

}  // namespace sartex::timeseries
