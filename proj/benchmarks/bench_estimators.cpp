#include <benchmark/benchmark.h>

#include "lde/estimators.hpp"
#include "lde/random.hpp"
#include "lde/synth.hpp"

namespace {

struct Fixture {
  lde::EnvTable env;
  lde::Policy pi;
  lde::Dataset data;
  lde::Baseline baseline;
};

Fixture make_fixture(std::size_t n, std::size_t m) {
  lde::Rng rng(1);
  auto env = lde::build_env(lde::RewardKind::kEx11, n, n);
  auto pi = lde::sample_softmax_policy(n, n, rng);
  auto behavior = lde::sample_softmax_policy(n, n, rng);
  auto data = lde::sample_history(env, behavior, m, rng);
  auto baseline = lde::baseline_from_data(data);
  return {std::move(env), std::move(pi), std::move(data), std::move(baseline)};
}

void BM_Estimator(benchmark::State& state) {
  const auto f = make_fixture(static_cast<std::size_t>(state.range(0)), 1);
  const auto e = static_cast<lde::Estimator>(state.range(1));
  for (auto _ : state) {
    const auto terms = lde::record_terms(f.data, f.pi, f.env.n_actions(), f.baseline);
    benchmark::DoNotOptimize(lde::estimate(e, terms));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.data.size()));
  state.SetLabel(std::string(lde::to_string(e)));
}

}  // namespace

BENCHMARK(BM_Estimator)->ArgsProduct({{10, 100}, {0, 1, 2, 3}});
