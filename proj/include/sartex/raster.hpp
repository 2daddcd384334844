#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sartex {

/// Processing stage of the values held in a Raster.
enum class Stage { DN, Sigma0Db, Gamma0Db };

/// Polarization channel.
enum class Channel { VV, VH };

std::string_view to_string(Stage stage);
std::string_view to_string(Channel channel);
Stage parse_stage(std::string_view text);
Channel parse_channel(std::string_view text);

/// Single-band image. Pixels are row-major with the origin at the top-left
/// corner; `at(x, y)` addresses column x of row y.
///
/// Pixel storage is float32, matching the binary payload, so that a raster
/// read from disk and written back reproduces the payload bit for bit.
class Raster {
 public:
  Raster(std::size_t width, std::size_t height, std::vector<float> pixels,
         Stage stage = Stage::DN, Channel channel = Channel::VV,
         std::optional<std::string> timestamp = std::nullopt);

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }
  Stage stage() const noexcept { return stage_; }
  Channel channel() const noexcept { return channel_; }
  const std::optional<std::string>& timestamp() const noexcept { return timestamp_; }
  const std::vector<float>& pixels() const noexcept { return pixels_; }

  float at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

  /// Copy with replaced pixel values and stage; dimensions, channel and
  /// timestamp carry over.
  Raster with_pixels(std::vector<float> pixels, Stage stage) const;
  Raster with_channel(Channel channel) const;
  Raster with_timestamp(std::optional<std::string> timestamp) const;

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<float> pixels_;
  Stage stage_;
  Channel channel_;
  std::optional<std::string> timestamp_;
};

/// Window of a raster: top-left offset plus size.
struct ChipBounds {
  std::size_t x0 = 0;
  std::size_t y0 = 0;
  std::size_t w = 0;
  std::size_t h = 0;
};

Raster extract_chip(const Raster& raster, const ChipBounds& bounds);

/// Reads either the binary `SARR` format or a CSV grid with a
/// `<stem>.meta.json` sidecar. The format is detected from the magic bytes.
Raster read_raster(const std::filesystem::path& path);

/// Writes CSV (plus sidecar) when the path ends in `.csv`, binary otherwise.
void write_raster(const Raster& raster, const std::filesystem::path& path);

void write_raster_binary(const Raster& raster, const std::filesystem::path& path);
void write_raster_csv(const Raster& raster, const std::filesystem::path& path);

/// Sidecar metadata path for a CSV raster: `dir/name.csv` -> `dir/name.meta.json`.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

}  // namespace sartex
