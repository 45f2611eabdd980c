#include <benchmark/benchmark.h>

#include "lde/random.hpp"
#include "lde/rllogs.hpp"
#include "lde/synth.hpp"

namespace {

void BM_SynthTests(benchmark::State& state) {
  lde::SweepConfig c;
  c.alphas = {0.1};
  c.tests = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(lde::run_sweep(c));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_ProbabilityProxy(benchmark::State& state) {
  const auto horizon = state.range(0);
  lde::Rng rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd a(horizon, 6), b(horizon, 6);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    a.data()[i] = u(rng);
    b.data()[i] = 0.9 * a.data()[i];
  }
  const Eigen::VectorXd low = Eigen::VectorXd::Constant(6, -1.0);
  const Eigen::VectorXd high = Eigen::VectorXd::Constant(6, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lde::probability_proxy(a, b, low, high));
  }
}

}  // namespace

BENCHMARK(BM_SynthTests)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ProbabilityProxy)->Arg(100);
BENCHMARK_MAIN();
