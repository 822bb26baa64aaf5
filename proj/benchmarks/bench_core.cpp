#include <benchmark/benchmark.h>

#include <random>

#include "cole/engine.hpp"
#include "cole/pagerank.hpp"
#include "cole/rng.hpp"
#include "cole/shapley.hpp"

namespace {

cole::PayoffMatrix random_matrix(int n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> w(static_cast<std::size_t>(n) * n);
  for (double& v : w) v = 10.0 * cole::uniform_double(gen);
  return cole::PayoffMatrix(n, std::move(w));
}

void BM_ExactShapley(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const cole::PayoffMatrix m = random_matrix(n, 7);
  const cole::CharacteristicFunction cf(cole::weighted_pagerank(m).pr, m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cole::exact_shapley(cf, n));
  }
}
BENCHMARK(BM_ExactShapley)->Arg(6)->Arg(8)->Arg(10)->Arg(12);

void BM_McShapley(benchmark::State& state) {
  const cole::PayoffMatrix m = random_matrix(12, 9);
  const cole::CharacteristicFunction cf(cole::weighted_pagerank(m).pr, m);
  const long samples = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cole::mc_shapley(cf, samples, 1));
  }
}
BENCHMARK(BM_McShapley)->Arg(1000)->Arg(10000);

void BM_WeightedPagerank(benchmark::State& state) {
  const cole::PayoffMatrix m = random_matrix(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cole::weighted_pagerank(m));
  }
}
BENCHMARK(BM_WeightedPagerank)->Arg(8)->Arg(32)->Arg(128);

void BM_RunGeneration(benchmark::State& state) {
  const cole::MatrixCoopGame game = cole::gen_dominant_game(4, 1.0);
  cole::EngineConfig cfg;
  for (auto _ : state) {
    state.PauseTiming();
    cole::Population pop =
        cole::Population::initial(cole::Strategy::uniform(game.actions()));
    state.ResumeTiming();
    for (long g = 1; g <= state.range(0); ++g) {
      benchmark::DoNotOptimize(cole::run_generation(pop, game, cfg, 42, g));
    }
  }
}
BENCHMARK(BM_RunGeneration)->Arg(5)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
