#include <benchmark/benchmark.h>

#include <cmath>

#include "scenegen/raycast.hpp"
#include "scenegen/rng.hpp"
#include "scenegen/surfaces.hpp"

using namespace scenegen;

namespace {

std::vector<Ray> random_rays(int n) {
  Rng rng(5);
  std::vector<Ray> rays;
  for (int i = 0; i < n; ++i) {
    const Vec3 o{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Vec3 t{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    rays.push_back({o, (t - o) / length(t - o)});
  }
  return rays;
}

void BM_RaycastBvh(benchmark::State& state) {
  const int stacks = static_cast<int>(state.range(0));
  const MeshSet set({PosedMesh{"s", 0, make_uv_sphere({0, 0, 0}, 1.0, stacks, stacks)}});
  const auto rays = random_rays(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(set.cast(rays[i++ % rays.size()]));
  state.counters["triangles"] = static_cast<double>(set.triangle_count());
}
BENCHMARK(BM_RaycastBvh)->Arg(16)->Arg(64)->Arg(128);

void BM_RaycastLinear(benchmark::State& state) {
  const int stacks = static_cast<int>(state.range(0));
  const MeshSet set({PosedMesh{"s", 0, make_uv_sphere({0, 0, 0}, 1.0, stacks, stacks)}});
  const auto rays = random_rays(1024);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(set.cast_linear(rays[i++ % rays.size()]));
}
BENCHMARK(BM_RaycastLinear)->Arg(16)->Arg(64)->Arg(128);

void BM_Surfaces(benchmark::State& state) {
  const int stacks = static_cast<int>(state.range(0));
  const auto mesh = make_uv_sphere({0, 0, 0}, 1.0, stacks, stacks);
  for (auto _ : state) benchmark::DoNotOptimize(detect_placeable_surfaces(mesh));
}
BENCHMARK(BM_Surfaces)->Arg(32)->Arg(128);

}  // namespace
