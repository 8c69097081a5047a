#include <benchmark/benchmark.h>

#include "scenegen/render.hpp"
#include "scenegen/room_builder.hpp"

using namespace scenegen;

namespace {

Scene room() {
  RoomLayoutSpec spec;
  spec.floor_polygon = {{0, 0}, {5, 0}, {5, 3}, {2.5, 4.5}, {0, 3}};
  spec.wall_height = 2.6;
  spec.openings.push_back({0, 1.0, 0.9, 2.1, 0.0, OpeningKind::kSingleDoor});
  return build_room(spec);
}

void BM_RenderCorner(benchmark::State& state) {
  const Scene s = room();
  const SceneMeshResolver src;
  const SceneRenderer renderer(s, src);
  ViewOptions opt;
  opt.width = opt.height = static_cast<int>(state.range(0));
  const Camera cam = corner_camera(s.bounds, false, opt);
  for (auto _ : state) benchmark::DoNotOptimize(renderer.render(cam));
}
BENCHMARK(BM_RenderCorner)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_RenderPanorama(benchmark::State& state) {
  const Scene s = room();
  const SceneMeshResolver src;
  const SceneRenderer renderer(s, src);
  const PanoCamera cam = center_pano_camera(s.bounds, {});
  for (auto _ : state) benchmark::DoNotOptimize(renderer.render(cam));
}
BENCHMARK(BM_RenderPanorama)->Unit(benchmark::kMillisecond);

}  // namespace
