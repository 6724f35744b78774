#include <benchmark/benchmark.h>

#include "exgs/codec.hpp"
#include "exgs/pruner.hpp"
#include "exgs/rasterizer.hpp"
#include "exgs/scene_synth.hpp"
#include "exgs/significance.hpp"

using namespace exgs;

namespace {

GaussianCloud room(std::size_t n) {
  SynthSpec spec;
  spec.gaussian_count = n;
  spec.seed = 2024;
  return make_scene(spec);
}

std::vector<Camera> rig(int views, int size) {
  Intrinsics in;
  in.width = in.height = size;
  in.fx = in.fy = size;
  in.cx = in.cy = size / 2.0;
  return make_orbit_cameras(views, 1.0, {0, 0, 0}, in);
}

void BM_Render(benchmark::State& state) {
  const GaussianCloud cloud = room(static_cast<std::size_t>(state.range(0)));
  const Camera cam = rig(1, 256)[0];
  RenderConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(render(cloud, cam, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Render)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Significance(benchmark::State& state) {
  const GaussianCloud cloud = room(static_cast<std::size_t>(state.range(0)));
  const auto cams = rig(4, 128);
  for (auto _ : state) benchmark::DoNotOptimize(compute_significance(cloud, cams, ScoringMode::Literal, 1));
}
BENCHMARK(BM_Significance)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Prune(benchmark::State& state) {
  const GaussianCloud cloud = room(static_cast<std::size_t>(state.range(0)));
  const auto scores = compute_significance(cloud, rig(2, 64)).scores;
  const PruneConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(prune(cloud, scores, cfg));
}
BENCHMARK(BM_Prune)->Arg(100'000)->Unit(benchmark::kMillisecond);

void BM_Compress(benchmark::State& state) {
  const GaussianCloud cloud = room(static_cast<std::size_t>(state.range(0)));
  std::size_t bytes = 0;
  for (auto _ : state) {
    const auto out = compress(cloud);
    bytes = out.size();
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["exgs_bytes"] = static_cast<double>(bytes);
}
BENCHMARK(BM_Compress)->Arg(10'000)->Unit(benchmark::kMillisecond);

void BM_Decompress(benchmark::State& state) {
  const auto bytes = compress(room(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(decompress(bytes));
}
BENCHMARK(BM_Decompress)->Arg(10'000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
