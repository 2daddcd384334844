#include "sartex/raster.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "sartex/error.hpp"
#include "sartex/text.hpp"

namespace sartex {

namespace {

constexpr char kMagic[4] = {'S', 'A', 'R', 'R'};
// Guards against reading a bogus length prefix as a multi-GB allocation.
constexpr std::uint32_t kMaxHeaderBytes = 1u << 20;

Error raster_error(ErrorKind kind, const std::string& message) {
  return Error(kind, "raster", message);
}

void validate(std::size_t width, std::size_t height, const std::vector<float>& pixels,
              Stage stage) {
  if (width < 2 || height < 2) {
    throw raster_error(ErrorKind::Input, "raster must be at least 2x2, got " +
                                             std::to_string(width) + "x" + std::to_string(height));
  }
  if (pixels.size() != width * height) {
    throw raster_error(ErrorKind::Input, "pixel count " + std::to_string(pixels.size()) +
                                             " does not match " + std::to_string(width) + "x" +
                                             std::to_string(height));
  }
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (!std::isfinite(pixels[i])) {
      throw raster_error(ErrorKind::Input, "non-finite pixel at index " + std::to_string(i));
    }
    if (stage == Stage::DN && pixels[i] < 0.0f) {
      throw raster_error(ErrorKind::Input, "negative DN at index " + std::to_string(i));
    }
  }
}

nlohmann::json header_json(const Raster& r) {
  nlohmann::json h;
  h["width"] = r.width();
  h["height"] = r.height();
  h["stage"] = std::string(to_string(r.stage()));
  h["channel"] = std::string(to_string(r.channel()));
  if (r.timestamp()) h["timestamp"] = *r.timestamp();
  return h;
}

struct Header {
  std::size_t width = 0;
  std::size_t height = 0;
  Stage stage = Stage::DN;
  Channel channel = Channel::VV;
  std::optional<std::string> timestamp;
};

Header parse_header(const std::string& text, const std::string& source) {
  try {
    const auto j = nlohmann::json::parse(text);
    Header h;
    h.width = j.at("width").get<std::size_t>();
    h.height = j.at("height").get<std::size_t>();
    h.stage = j.contains("stage") ? parse_stage(j.at("stage").get<std::string>()) : Stage::DN;
    h.channel =
        j.contains("channel") ? parse_channel(j.at("channel").get<std::string>()) : Channel::VV;
    if (j.contains("timestamp") && !j.at("timestamp").is_null()) {
      h.timestamp = j.at("timestamp").get<std::string>();
    }
    return h;
  } catch (const nlohmann::json::exception& e) {
    throw raster_error(ErrorKind::Format, "malformed header in " + source + ": " + e.what());
  }
}

std::uint32_t load_u32_le(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

void store_u32_le(std::uint32_t v, unsigned char* p) {
  p[0] = static_cast<unsigned char>(v);
  p[1] = static_cast<unsigned char>(v >> 8);
  p[2] = static_cast<unsigned char>(v >> 16);
  p[3] = static_cast<unsigned char>(v >> 24);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw raster_error(ErrorKind::Io, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Raster read_binary(const std::string& bytes, const std::string& source) {
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 8) throw raster_error(ErrorKind::Truncation, source + ": file too short");
  const std::uint32_t header_len = load_u32_le(data + 4);
  if (header_len > kMaxHeaderBytes) {
    throw raster_error(ErrorKind::Format, source + ": implausible header length");
  }
  if (bytes.size() < 8 + std::size_t(header_len)) {
    throw raster_error(ErrorKind::Truncation, source + ": header truncated");
  }
  const Header h = parse_header(bytes.substr(8, header_len), source);
  const std::size_t count = h.width * h.height;
  const std::size_t payload = bytes.size() - 8 - header_len;
  if (payload < count * 4) {
    throw raster_error(ErrorKind::Truncation,
                       source + ": header declares " + std::to_string(count) +
                           " values but payload holds " + std::to_string(payload / 4));
  }
  if (payload > count * 4) {
    throw raster_error(ErrorKind::Format, source + ": trailing bytes after payload");
  }
  std::vector<float> pixels(count);
  const unsigned char* p = data + 8 + header_len;
  for (std::size_t i = 0; i < count; ++i, p += 4) {
    pixels[i] = std::bit_cast<float>(load_u32_le(p));
  }
  return Raster(h.width, h.height, std::move(pixels), h.stage, h.channel, h.timestamp);
}

Raster read_csv(const std::string& bytes, const std::filesystem::path& path) {
  const auto meta_path = sidecar_path(path);
  Header h;
  if (std::filesystem::exists(meta_path)) {
    h = parse_header(slurp(meta_path), meta_path.string());
  }
  std::vector<float> pixels;
  std::size_t width = 0;
  std::size_t height = 0;
  std::istringstream in(bytes);
  std::string line;
  while (std::getline(in, line)) {
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, ',');
    if (width == 0) {
      width = fields.size();
    } else if (fields.size() != width) {
      throw raster_error(ErrorKind::Format, path.string() + ": ragged row " +
                                                std::to_string(height + 1));
    }
    for (auto f : fields) {
      const double v = text::parse_double(f, "pixel");
      if (std::isnan(v)) throw raster_error(ErrorKind::Input, path.string() + ": NaN pixel");
      pixels.push_back(static_cast<float>(v));
    }
    ++height;
  }
  if (h.width != 0 && (h.width != width || h.height != height)) {
    throw raster_error(ErrorKind::Truncation,
                       path.string() + ": sidecar declares " + std::to_string(h.width) + "x" +
                           std::to_string(h.height) + " but grid is " + std::to_string(width) +
                           "x" + std::to_string(height));
  }
  return Raster(width, height, std::move(pixels), h.stage, h.channel, h.timestamp);
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::DN: return "DN";
    case Stage::Sigma0Db: return "SIGMA0_DB";
    case Stage::Gamma0Db: return "GAMMA0_DB";
  }
  return "?";
}

std::string_view to_string(Channel channel) {
  return channel == Channel::VV ? "VV" : "VH";
}

Stage parse_stage(std::string_view text) {
  if (text == "DN") return Stage::DN;
  if (text == "SIGMA0_DB") return Stage::Sigma0Db;
  if (text == "GAMMA0_DB") return Stage::Gamma0Db;
  throw raster_error(ErrorKind::Format, "unknown stage '" + std::string(text) + "'");
}

Channel parse_channel(std::string_view text) {
  if (text == "VV") return Channel::VV;
  if (text == "VH") return Channel::VH;
  throw raster_error(ErrorKind::Format, "unknown channel '" + std::string(text) + "'");
}

Raster::Raster(std::size_t width, std::size_t height, std::vector<float> pixels, Stage stage,
               Channel channel, std::optional<std::string> timestamp)
    : width_(width),
      height_(height),
      pixels_(std::move(pixels)),
      stage_(stage),
      channel_(channel),
      timestamp_(std::move(timestamp)) {
  validate(width_, height_, pixels_, stage_);
}

Raster Raster::with_pixels(std::vector<float> pixels, Stage stage) const {
  return Raster(width_, height_, std::move(pixels), stage, channel_, timestamp_);
}

Raster Raster::with_channel(Channel channel) const {
  Raster copy = *this;
  copy.channel_ = channel;
  return copy;
}

Raster Raster::with_timestamp(std::optional<std::string> timestamp) const {
  Raster copy = *this;
  copy.timestamp_ = std::move(timestamp);
  return copy;
}

Raster extract_chip(const Raster& raster, const ChipBounds& b) {
  if (b.w < 2 || b.h < 2 || b.x0 + b.w > raster.width() || b.y0 + b.h > raster.height()) {
    throw raster_error(ErrorKind::Bounds,
                       "chip (" + std::to_string(b.x0) + "," + std::to_string(b.y0) + "," +
                           std::to_string(b.w) + "," + std::to_string(b.h) + ") outside " +
                           std::to_string(raster.width()) + "x" +
                           std::to_string(raster.height()) + " raster");
  }
  std::vector<float> pixels;
  pixels.reserve(b.w * b.h);
  const auto& src = raster.pixels();
  for (std::size_t y = b.y0; y < b.y0 + b.h; ++y) {
    const auto row = src.begin() + static_cast<std::ptrdiff_t>(y * raster.width() + b.x0);
    pixels.insert(pixels.end(), row, row + static_cast<std::ptrdiff_t>(b.w));
  }
  return Raster(b.w, b.h, std::move(pixels), raster.stage(), raster.channel(),
                raster.timestamp());
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".meta.json");
  return p;
}

Raster read_raster(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), kMagic, 4) == 0) {
    return read_binary(bytes, path.string());
  }
  return read_csv(bytes, path);
}

void write_raster_binary(const Raster& raster, const std::filesystem::path& path) {
  const std::string header = header_json(raster).dump();
  std::string out;
  out.resize(8 + header.size() + raster.size() * 4);
  auto* p = reinterpret_cast<unsigned char*>(out.data());
  std::memcpy(p, kMagic, 4);
  store_u32_le(static_cast<std::uint32_t>(header.size()), p + 4);
  std::memcpy(p + 8, header.data(), header.size());
  p += 8 + header.size();
  for (float v : raster.pixels()) {
    store_u32_le(std::bit_cast<std::uint32_t>(v), p);
    p += 4;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw raster_error(ErrorKind::Io, "cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw raster_error(ErrorKind::Io, "write failed for " + path.string());
}

void write_raster_csv(const Raster& raster, const std::filesystem::path& path) {
  std::string body;
  for (std::size_t y = 0; y < raster.height(); ++y) {
    for (std::size_t x = 0; x < raster.width(); ++x) {
      if (x) body += ',';
      body += text::format_double(raster.at(x, y));
    }
    body += '\n';
  }
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw raster_error(ErrorKind::Io, "cannot write " + path.string());
  f << body;
  std::ofstream meta(sidecar_path(path), std::ios::trunc);
  if (!meta) throw raster_error(ErrorKind::Io, "cannot write " + sidecar_path(path).string());
  meta << header_json(raster).dump(2) << '\n';
  if (!f || !meta) throw raster_error(ErrorKind::Io, "write failed for " + path.string());
}

void write_raster(const Raster& raster, const std::filesystem::path& path) {
  if (path.extension() == ".csv") {
    write_raster_csv(raster, path);
  } else {
    write_raster_binary(raster, path);
  }
}

}  // namespace sartex
