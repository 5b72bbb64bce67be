#include <benchmark/benchmark.h>

#include <random>

#include "himap/barycenter.hpp"
#include "himap/datagen.hpp"
#include "himap/ot.hpp"
#include "himap/quantile_map.hpp"

namespace {

himap::PointCloud normal_cloud(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> z;
  std::vector<double> c(n * d);
  for (auto& v : c) v = z(gen);
  return himap::PointCloud(d, std::move(c));
}

void BM_BuildTree(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = static_cast<std::size_t>(state.range(1));
  const auto cloud = normal_cloud(n, d, 1);
  for (auto _ : state) benchmark::DoNotOptimize(himap::build_tree(cloud, himap::default_depth(n)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_BuildTree)->Args({1000, 2})->Args({100000, 2})->Args({100000, 5})->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const auto map = himap::QuantileMap::fit(normal_cloud(100000, 2, 2));
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(2);
  for (auto _ : state) {
    map.evaluate_into(u(gen), out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_Evaluate);

void BM_SampleGrid(benchmark::State& state) {
  const auto map = himap::QuantileMap::fit(normal_cloud(100000, 2, 4));
  const auto g = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(himap::sample_grid(map, g));
}
BENCHMARK(BM_SampleGrid)->Arg(1024)->Arg(65536)->Unit(benchmark::kMicrosecond);

void BM_EllipseBarycenter(benchmark::State& state) {
  const auto clouds = himap::gen_nested_ellipses(30, 1000, 0);
  const auto weights = himap::AffineWeights::uniform(clouds.size());
  for (auto _ : state) {
    std::vector<himap::QuantileMap> maps;
    for (const auto& c : clouds) maps.push_back(himap::QuantileMap::fit(c));
    benchmark::DoNotOptimize(himap::barycenter_map(maps, weights, 1000));
  }
}
BENCHMARK(BM_EllipseBarycenter)->Unit(benchmark::kMillisecond);

void BM_Assignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = normal_cloud(n, 2, 5);
  const auto b = normal_cloud(n, 2, 6);
  for (auto _ : state) benchmark::DoNotOptimize(himap::w2_exact_assignment(a, b));
}
BENCHMARK(BM_Assignment)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
  const auto a = normal_cloud(256, 2, 7);
  const auto b = normal_cloud(256, 2, 8);
  for (auto _ : state) benchmark::DoNotOptimize(himap::sinkhorn_cost(a, b));
}
BENCHMARK(BM_Sinkhorn)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
