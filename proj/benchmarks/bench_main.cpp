#include <benchmark/benchmark.h>

#include "rgglab/decomp.hpp"
#include "rgglab/random.hpp"
#include "rgglab/spectral.hpp"
#include "rgglab/sphere.hpp"
#include "rgglab/walks.hpp"

using namespace rgglab;

static void BM_CapProbability(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cap_probability(0.1, d));
}
BENCHMARK(BM_CapProbability)->Arg(10)->Arg(300)->Arg(5000);

static void BM_CalibrateTau(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(calibrate_tau(0.01, d));
}
BENCHMARK(BM_CalibrateTau)->Arg(10)->Arg(300)->Arg(5000);

static void BM_GeometricGraph(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const UnitVectorSet v = sample_unit_vectors(n, 300, 1);
  const CapParams cap = calibrate_tau(0.01, 300);
  for (auto _ : state) benchmark::DoNotOptimize(geometric_graph(v, cap));
}
BENCHMARK(BM_GeometricGraph)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

static void BM_Eigensolve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Adjacency a = geometric_graph(sample_unit_vectors(n, 100, 2), calibrate_tau(0.05, 100));
  const Eigen::MatrixXd m = a.dense();
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_symmetric(m));
}
BENCHMARK(BM_Eigensolve)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_EarDecomposition(benchmark::State& state) {
  // Wheel: hub 0 joined to a cycle on 1..n-1.
  const auto n = static_cast<Vertex>(state.range(0));
  std::vector<Edge> edges;
  for (Vertex i = 1; i < n; ++i) {
    edges.push_back({0, i});
    edges.push_back(make_edge(i, i + 1 < n ? i + 1 : 1));
  }
  const SimpleGraph g(n, edges);
  for (auto _ : state) benchmark::DoNotOptimize(ear_decomposition(g, 0));
}
BENCHMARK(BM_EarDecomposition)->Arg(64)->Arg(4096);

static void BM_WalkStats(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<unsigned>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(count_walks_by_stats(n, k));
}
BENCHMARK(BM_WalkStats)->Args({5, 6})->Args({4, 8})->Unit(benchmark::kMillisecond);

static void BM_EmbeddedVectors(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  Engine rng = make_engine(3, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sample_embedded_vectors(k, 1000, 0, rng));
}
BENCHMARK(BM_EmbeddedVectors)->Arg(3)->Arg(8);
BENCHMARK_MAIN();
