#include <benchmark/benchmark.h>

#include "labelagg/labelagg.hpp"

namespace {

using namespace labelagg;

AnnotationMatrix make_matrix(int g, int s, int w) {
  const auto truth = sample_ground_truth(builtin_distribution(g), s, 1);
  const auto workers = sample_expertise(ExpertiseBand::low(g), w, 2);
  return simulate_annotations(truth, workers, 3);
}

void BM_MajorityVote(benchmark::State& state) {
  const auto m = make_matrix(5, int(state.range(0)), int(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(majority_vote(m, TiePolicy::weighted_random, 9));
}
BENCHMARK(BM_MajorityVote)->Args({500, 10})->Args({2000, 40});

void BM_DawidSkene(benchmark::State& state) {
  const auto m = make_matrix(int(state.range(2)), int(state.range(0)), int(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_em(m));
}
BENCHMARK(BM_DawidSkene)->Args({500, 10, 5})->Args({2000, 40, 2})->Args({2000, 40, 20})
    ->Unit(benchmark::kMillisecond);

void BM_CrowdTruth(benchmark::State& state) {
  const auto m = make_matrix(int(state.range(2)), int(state.range(0)), int(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(run_crowdtruth(m));
}
BENCHMARK(BM_CrowdTruth)->Args({500, 10, 5})->Args({2000, 40, 2})->Args({2000, 40, 20})
    ->Unit(benchmark::kMillisecond);

void BM_IncompleteBeta(benchmark::State& state) {
  double x = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(regularized_incomplete_beta(9.0, 0.5, x));
    x = x > 0.98 ? 0.01 : x + 0.013;
  }
}
BENCHMARK(BM_IncompleteBeta);

void BM_RunCell(benchmark::State& state) {
  const auto config = ExperimentConfig::defaults(BandKind::low);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_cell(int(state.range(0)), 1000, 20, BandKind::low, config));
  }
}
BENCHMARK(BM_RunCell)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
