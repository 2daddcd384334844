// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "sartex/calib.hpp"
#include "sartex/forest.hpp"
#include "sartex/random.hpp"
#include "sartex/synth.hpp"
#include "sartex/texture.hpp"

using namespace sartex;

namespace {

const std::vector<texture::ChipPair>& chips() {
  static const auto c = [] {
    std::vector<texture::ChipPair> out;
    for (std::uint64_t i = 0; i < 128; ++i) {
      auto spec = i % 2 ? synth::default_active_spec() : synth::default_idle_spec();
      spec.seed = i;
      out.push_back(synth::generate_pair(spec));
    }
    return out;
  }();
  return c;
}

const classify::LabeledDataset& dataset() {
  static const auto d =
      synth::generate_dataset(100, synth::default_active_spec(), synth::default_idle_spec(), 0).data;
  return d;
}

const Raster& dn_scene() {
  static const Raster r = [] {
    random::Engine rng(5);
    std::vector<float> px(2048 * 2048);
    for (auto& v : px) v = static_cast<float>(random::uniform(rng, 1.0, 4000.0));
    return Raster(2048, 2048, std::move(px));
  }();
  return r;
}

void BM_TextureSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(texture::serial::texture_vectors(chips(), {}, {}));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(chips().size()));
}
void BM_TextureParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(texture::texture_vectors(chips(), {}, {}));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(chips().size()));
}

void BM_ForestSerial(benchmark::State& st) {
  const classify::ForestParams p{static_cast<int>(st.range(0)), 3, 2};
  for (auto _ : st) benchmark::DoNotOptimize(classify::serial::train_forest(dataset(), p, 0));
}
void BM_ForestParallel(benchmark::State& st) {
  const classify::ForestParams p{static_cast<int>(st.range(0)), 3, 2};
  for (auto _ : st) benchmark::DoNotOptimize(classify::train_forest(dataset(), p, 0));
}

void BM_CalibrateSerial(benchmark::State& st) {
  for (auto _ : st) {
    benchmark::DoNotOptimize(calib::serial::to_gamma0(calib::serial::to_sigma0(dn_scene(), -30.0), 38.0));
  }
}
void BM_CalibrateParallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(calib::to_gamma0(calib::to_sigma0(dn_scene(), -30.0), 38.0));
}

}  // namespace

BENCHMARK(BM_TextureSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_TextureParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ForestSerial)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ForestParallel)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CalibrateSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_CalibrateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();
