#include "sartex/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "parallel.hpp"
#include "sartex/error.hpp"
#include "sartex/random.hpp"

namespace sartex::synth {

namespace {

constexpr std::uint64_t kScatterSalt = 0x5CA7;
constexpr std::uint64_t kSpeckleSalt = 0x5BEC;
constexpr std::uint64_t kDatasetSalt = 0xDA7A;

double to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

SceneSpec default_active_spec() {
  SceneSpec s;
  s.n_scatterers = 25;
  return s;
}

SceneSpec default_idle_spec() { return SceneSpec{}; }

void validate(const SceneSpec& spec) {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Spec, "synth", m); };
  if (spec.width < 2 || spec.height < 2) fail("chip must be at least 2x2");
  if (spec.n_scatterers < 0) fail("n_scatterers must be >= 0");
  if (!(spec.scatterer_boost_db >= 0.0)) fail("scatterer_boost_db must be >= 0");
  if (!std::isfinite(spec.background_mean_db)) fail("background_mean_db must be finite");
  if (!(spec.cluster_radius >= 0.0)) fail("cluster_radius must be >= 0");
  const double cx = (static_cast<double>(spec.width) - 1.0) / 2.0;
  const double cy = (static_cast<double>(spec.height) - 1.0) / 2.0;
  if (spec.n_scatterers > 0 && (spec.cluster_radius > cx || spec.cluster_radius > cy)) {
    fail("scatterer cluster of radius " + std::to_string(spec.cluster_radius) +
         " does not fit in a " + std::to_string(spec.width) + "x" + std::to_string(spec.height) +
         " chip");
  }
}

Raster generate_chip(const SceneSpec& spec, Channel channel) {
  validate(spec);
  const std::size_t w = spec.width;
  const std::size_t h = spec.height;
  std::vector<double> power(w * h);

  random::Engine speckle(random::derive(spec.seed, static_cast<std::uint64_t>(channel),
                                        kSpeckleSalt));
  const double mean = to_linear(spec.background_mean_db);
  for (double& p : power) p = random::exponential(speckle, mean);

  random::Engine scatter(random::derive(spec.seed, 0, kScatterSalt));
  const double point = to_linear(spec.background_mean_db + spec.scatterer_boost_db);
  const double cx = (static_cast<double>(w) - 1.0) / 2.0;
  const double cy = (static_cast<double>(h) - 1.0) / 2.0;
  for (int s = 0; s < spec.n_scatterers; ++s) {
    // Uniform over the disk: radius ~ R sqrt(U).
    const double r = spec.cluster_radius * std::sqrt(random::uniform01(scatter));
    const double t = 2.0 * std::numbers::pi * random::uniform01(scatter);
    const auto x = static_cast<std::size_t>(
        std::clamp(std::lround(cx + r * std::cos(t)), 0L, static_cast<long>(w) - 1));
    const auto y = static_cast<std::size_t>(
        std::clamp(std::lround(cy + r * std::sin(t)), 0L, static_cast<long>(h) - 1));
    power[y * w + x] += point;
  }

  std::vector<float> db(power.size());
  std::transform(power.begin(), power.end(), db.begin(),
                 [](double p) { return static_cast<float>(10.0 * std::log10(p)); });
  return Raster(w, h, std::move(db), Stage::Gamma0Db, channel);
}

texture::ChipPair generate_pair(const SceneSpec& spec) {
  SceneSpec vh = spec;
  vh.background_mean_db += kVhOffsetDb;
  return {generate_chip(spec, Channel::VV), generate_chip(vh, Channel::VH)};
}

std::string synthetic_date(std::size_t index) {
  using namespace std::chrono;
  const sys_days day = sys_days{year{2020} / January / 1} + days{static_cast<long>(index)};
  const year_month_day ymd{day};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

SynthDataset generate_dataset(std::size_t n_per_class, const SceneSpec& active,
                              const SceneSpec& idle, std::uint64_t seed,
                              const DatasetOptions& options) {
  if (n_per_class == 0) {
    throw Error(ErrorKind::Input, "synth", "dataset needs at least one sample per class");
  }
  validate(active);
  validate(idle);
  texture::validate(options.quant);
  texture::validate(options.offsets);

  const std::size_t n = 2 * n_per_class;
  SynthDataset out;
  out.data.samples.resize(n);
  std::vector<std::optional<texture::ChipPair>> chips(n);
  detail::parallel_for(n, [&](std::size_t i) {
    const int label = static_cast<int>(i % 2);
    SceneSpec spec = label == 1 ? active : idle;
    spec.seed = random::derive(seed, i, kDatasetSalt);
    const std::string date = synthetic_date(i);
    auto pair = generate_pair(spec);
    pair.vv = pair.vv.with_timestamp(date);
    pair.vh = pair.vh.with_timestamp(date);
    out.data.samples[i] = {texture::texture_vector(pair.vv, pair.vh, options.quant, options.offsets),
                           label};
    chips[i] = std::move(pair);
  });
  out.chips.reserve(n);
  for (auto& c : chips) out.chips.push_back(std::move(*c));
  return out;
}

}  // namespace sartex::synth
