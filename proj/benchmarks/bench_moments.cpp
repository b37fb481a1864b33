#include <benchmark/benchmark.h>

#include <vector>

#include "spavar/estimators.hpp"
#include "spavar/field_stats.hpp"
#include "spavar/moments.hpp"
#include "spavar/rng.hpp"
#include "spavar/synthetic.hpp"

namespace {

spavar::FieldStats make_stats(std::size_t n) {
  spavar::rng::Stream stream = spavar::rng::Stream(5).fork(1);
  std::vector<double> mu(n);
  for (double& v : mu) v = stream.next_uniform();
  std::vector<double> second(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double cov = (i == j) ? 1.0 : 0.3 / (1.0 + double(i - j));
      second[i * n + j] = second[j * n + i] = cov + mu[i] * mu[j];
    }
  }
  return {std::move(mu), std::move(second)};
}

void BM_ComputeMomentSetGeneral(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> beta(n, 1.0 / double(n));
  beta[0] *= 1.5;  // break uniformity to exercise the general path
  beta[1] *= 0.5;
  const spavar::WeightVector w(beta);
  const spavar::FieldStats stats = make_stats(n);
  const spavar::ReportingModel rm(0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spavar::compute_moment_set(w, rm, stats));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ComputeMomentSetGeneral)->Range(16, 1024)->Complexity();

void BM_ComputeMomentSetUniform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spavar::WeightVector w = spavar::WeightVector::uniform(n);
  const spavar::FieldStats stats = make_stats(n);
  const spavar::ReportingModel rm(0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spavar::compute_moment_set(w, rm, stats));
  }
}
BENCHMARK(BM_ComputeMomentSetUniform)->Range(16, 1024);

void BM_UniformSecondOrderVariance(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const spavar::EpochField field = spavar::synthetic_field(9, {.n_sites = n});
  const spavar::FieldAggregates agg = spavar::aggregates_from(field);
  const spavar::ReportingModel rm(0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spavar::variance_uniform_second_order(n, rm, agg));
  }
}
BENCHMARK(BM_UniformSecondOrderVariance)->Range(64, 4096);

}  // namespace
