#include "sartex/timeseries.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "sartex/error.hpp"
#include "sartex/text.hpp"

namespace sartex::timeseries {

namespace {

Error series_error(ErrorKind kind, const std::string& message) {
  return Error(kind, "timeseries", message);
}

}  // namespace

std::vector<SeriesPoint> build_series(const std::vector<texture::ChipPair>& chips,
                                      const classify::Model* model,
                                      const SeriesOptions& options) {
  for (std::size_t i = 0; i < chips.size(); ++i) {
    const auto& ts = chips[i].vv.timestamp();
    if (!ts) throw series_error(ErrorKind::Input, "chip " + std::to_string(i) + " has no timestamp");
    if (i > 0 && !(*chips[i - 1].vv.timestamp() < *ts)) {
      throw series_error(ErrorKind::Input, "timestamps not strictly increasing at " + *ts);
    }
  }
  const auto vectors = texture::texture_vectors(chips, options.quant, options.offsets);
  std::vector<SeriesPoint> series;
  series.reserve(chips.size());
  for (std::size_t i = 0; i < chips.size(); ++i) {
    SeriesPoint p{*chips[i].vv.timestamp(), vectors[i], std::nullopt, std::nullopt};
    if (model) {
      const auto pred = classify::predict(*model, vectors[i]);
      p.label = pred.label;
      p.score = pred.score;
    }
    series.push_back(std::move(p));
  }
  return series;
}

std::vector<texture::ChipPair> load_series_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw series_error(ErrorKind::Io, dir.string() + " is not a directory");
  }
  std::map<std::string, std::pair<std::filesystem::path, std::filesystem::path>> by_date;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    for (const bool co_pol : {true, false}) {
      const std::string suffix = co_pol ? "_VV.sarr" : "_VH.sarr";
      if (name.size() > suffix.size() && name.ends_with(suffix)) {
        auto& slot = by_date[name.substr(0, name.size() - suffix.size())];
        (co_pol ? slot.first : slot.second) = entry.path();
      }
    }
  }
  std::vector<texture::ChipPair> out;
  for (const auto& [date, paths] : by_date) {
    if (paths.first.empty() || paths.second.empty()) {
      throw series_error(ErrorKind::Input, "date " + date + " lacks its " +
                                               (paths.first.empty() ? "VV" : "VH") + " chip");
    }
    Raster vv = read_raster(paths.first);
    Raster vh = read_raster(paths.second);
    // The file name is the authoritative date for the series.
    out.push_back({vv.with_timestamp(date), vh.with_timestamp(date)});
  }
  return out;
}

std::string series_csv_header() {
  std::string h = "timestamp";
  for (const auto& name : texture::feature_names()) h += "," + name;
  return h + ",label,score";
}

std::string series_csv(const std::vector<SeriesPoint>& series) {
  std::string out = series_csv_header() + "\n";
  for (const auto& p : series) {
    out += p.timestamp;
    for (double v : p.features.values) out += "," + text::format_double(v);
    out += ",";
    if (p.label) out += std::to_string(*p.label);
    out += ",";
    if (p.score) out += text::format_double(*p.score);
    out += "\n";
  }
  return out;
}

void emit_series_csv(const std::vector<SeriesPoint>& series, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw series_error(ErrorKind::Io, "cannot write " + path.string());
  out << series_csv(series);
  if (!out) throw series_error(ErrorKind::Io, "write failed for " + path.string());
}

std::vector<SeriesPoint> read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw series_error(ErrorKind::Io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || text::trim(line) != series_csv_header()) {
    throw series_error(ErrorKind::Format, path.string() + ": unexpected header");
  }
  std::vector<SeriesPoint> out;
  const auto& names = texture::feature_names();
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    const auto f = text::split(text::trim(line), ',');
    if (f.size() != names.size() + 3) {
      throw series_error(ErrorKind::Format, path.string() + ": malformed row '" + line + "'");
    }
    SeriesPoint p;
    p.timestamp = std::string(f[0]);
    p.features.timestamp = p.timestamp;
    for (std::size_t i = 0; i < names.size(); ++i) {
      p.features.values[i] = text::parse_double(f[i + 1], names[i]);
    }
    if (!f[names.size() + 1].empty()) {
      p.label = static_cast<int>(text::parse_int(f[names.size() + 1], "label"));
    }
    if (!f[names.size() + 2].empty()) p.score = text::parse_double(f[names.size() + 2], "score");
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sartex::timeseries
