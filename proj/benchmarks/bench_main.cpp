#include <benchmark/benchmark.h>

#include "sspec/moments.hpp"
#include "sspec/spectra.hpp"
#include "sspec/verify.hpp"

using namespace sspec;

namespace {

ParameterVector params_for(const EnsembleKind& kind, std::size_t n) {
  auto stream = RandomStream::substream(1, n);
  return sample_parameters(EntryDistribution::StdNormal, free_parameter_count(kind, n), stream);
}

void BM_DenseEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const EnsembleKind kind{EnsembleFamily::PalindromicToeplitz};
  const auto m = build_matrix(kind, params_for(kind, n), n);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_dense(m));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DenseEigenvalues)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity();

void BM_CirculantEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto p = params_for({EnsembleFamily::CirculantSymmetricToeplitz}, n);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues_circulant(p, n));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CirculantEigenvalues)->RangeMultiplier(2)->Range(64, 4096)->Unit(benchmark::kMicrosecond)->Complexity();

void BM_ExactMoment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        exact_expected_moment({EnsembleFamily::PalindromicToeplitz}, n, 4, EntryDistribution::StdNormal, {.threads = 1}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0) * state.range(0) * state.range(0));
}
BENCHMARK(BM_ExactMoment)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_MatchingCount(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pairing = enumerate_matchings(2)[1];
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        matching_solution_count({EnsembleFamily::PlainSymmetricToeplitz}, pairing, n, {.threads = 1}));
  }
}
BENCHMARK(BM_MatchingCount)->Arg(24)->Arg(48)->Unit(benchmark::kMillisecond);

void BM_CosineSums(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RandomStream stream(3);
  const auto x = sample_parameters(EntryDistribution::StdNormal, n, stream);
  for (auto _ : state) benchmark::DoNotOptimize(cosine_sums_half(x.values));
}
BENCHMARK(BM_CosineSums)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
