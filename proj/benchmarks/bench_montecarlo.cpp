#include <benchmark/benchmark.h>

#include "spavar/montecarlo.hpp"
#include "spavar/synthetic.hpp"
#include "spavar/types.hpp"

namespace {

void BM_EnsembleSimulation(benchmark::State& state) {
  const auto members = static_cast<std::int64_t>(state.range(0));
  const int threads = static_cast<int>(state.range(1));
  const spavar::EpochField field = spavar::synthetic_field(42);
  const spavar::WeightVector w = spavar::WeightVector::uniform(field.size());
  const spavar::ReportingModel rm(0.7);
  spavar::EnsembleSpec spec;
  spec.n_members = members;
  spec.seed = 42;
  spec.threads = threads;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spavar::simulate_epoch_ensemble(field, w, rm, spec));
  }
  state.SetItemsProcessed(state.iterations() * members);
}
BENCHMARK(BM_EnsembleSimulation)
    ->Args({10000, 1})
    ->Args({10000, 4})
    ->Args({100000, 4})
    ->Unit(benchmark::kMillisecond);

void BM_ExactEnumerationEpoch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spavar::EpochField field = spavar::synthetic_field(7, {.n_sites = n});
  const spavar::WeightVector w = spavar::WeightVector::uniform(n);
  const spavar::ReportingModel rm(0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spavar::exact_enumeration_epoch(field, w, rm));
  }
}
BENCHMARK(BM_ExactEnumerationEpoch)->DenseRange(10, 20, 5);

void BM_MomentEnumeration(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spavar::EpochField field = spavar::synthetic_field(7, {.n_sites = n});
  const spavar::FieldStats stats = spavar::FieldStats::degenerate(field);
  const spavar::WeightVector w = spavar::WeightVector::uniform(n);
  const spavar::ReportingModel rm(0.6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spavar::exact_moment_enumeration(w, rm, stats, 2));
  }
}
BENCHMARK(BM_MomentEnumeration)->DenseRange(8, 12, 2);

}  // namespace

BENCHMARK_MAIN();
