#include <benchmark/benchmark.h>

#include <string>

#include "scenegen/asset_index.hpp"
#include "scenegen/rng.hpp"

using namespace scenegen;

namespace {

MaterialIndex corpus(int n) {
  Rng rng(3);
  std::vector<MaterialRecord> recs;
  for (int i = 0; i < n; ++i) {
    std::string d;
    for (int k = 0; k < 5; ++k) d += "w" + std::to_string(rng.index(2000)) + " ";
    recs.push_back({"m" + std::to_string(i), d, {}});
  }
  return MaterialIndex::from_records(recs);
}

void BM_Retrieve(benchmark::State& state) {
  const auto idx = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(idx.retrieve("w1 w17 w300", 5));
}
BENCHMARK(BM_Retrieve)->Arg(1000)->Arg(10000)->Arg(100000);

}  // namespace
