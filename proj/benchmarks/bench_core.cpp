#include <benchmark/benchmark.h>

#include <random>

#include "hide/attention_ops.hpp"
#include "hide/bundle_io.hpp"
#include "hide/layout_compaction.hpp"
#include "hide/region_extraction.hpp"
#include "hide/synthetic_bench.hpp"

namespace {

using namespace hide;

AttentionMap random_map(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0F, 1.0F);
  AttentionMap m(n, n);
  for (auto& v : m.values()) v = u(rng);
  return m;
}

void BM_GaussianSmooth(benchmark::State& state) {
  const auto m = random_map(static_cast<int>(state.range(0)), 1);
  const SmoothingConfig cfg{3.0};
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_smooth(m, cfg));
}
BENCHMARK(BM_GaussianSmooth)->Arg(16)->Arg(32)->Arg(64);

void BM_Components(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  BinaryMask mask(n, n);
  for (auto& v : mask.values()) v = std::bernoulli_distribution(0.5)(rng) ? 1 : 0;
  const ThresholdConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(components(mask, cfg));
}
BENCHMARK(BM_Components)->Arg(32)->Arg(128);

void BM_ExtractBoxes(benchmark::State& state) {
  SynthSpec spec;
  spec.sink_amplitude = 2.0;
  spec.noise_std = 0.1;
  const auto s = generate_sample(spec, 0);
  const ExtractionOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(extract_boxes(s.bundle, opts));
}
BENCHMARK(BM_ExtractBoxes);

void BM_CompactImage(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Image img(n, n, {10, 20, 30});
  const int step = n / 8;
  BoxSet boxes{n, n, {}};
  for (int k = 0; k < 4; ++k) {
    boxes.boxes.emplace_back(2 * k * step, (7 - 2 * k) * step, (2 * k + 1) * step, (8 - 2 * k) * step);
  }
  for (auto _ : state) benchmark::DoNotOptimize(compact_image(img, boxes));
}
BENCHMARK(BM_CompactImage)->Arg(448)->Arg(1344);

void BM_BundleRoundTrip(benchmark::State& state) {
  const auto s = generate_sample(SynthSpec{}, 0);
  for (auto _ : state) benchmark::DoNotOptimize(decode_bundle(encode_bundle(s.bundle)));
}
BENCHMARK(BM_BundleRoundTrip);

}  // namespace

BENCHMARK_MAIN();
