#include <benchmark/benchmark.h>

#include "nppopt/asymptotics.hpp"
#include "nppopt/criteria.hpp"
#include "nppopt/npp.hpp"
#include "nppopt/scenarios.hpp"

using namespace nppopt;

namespace {

const numerics::QuadratureRule& rule() {
  static const auto r = numerics::default_rule();
  return r;
}

void BM_ExactNormalMarginal(benchmark::State& state) {
  const families::NormalSummary cur{30, 2.0, 1.0}, hist{30, 1.5, 1.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(npp::marginal_a0_exact(cur, hist, {1, 1}, npp::InitialPrior::flat(), rule()));
}
BENCHMARK(BM_ExactNormalMarginal);

void BM_ExactBernoulliMarginal(benchmark::State& state) {
  const families::BernoulliSummary cur{30, 15}, hist{30, 21};
  for (auto _ : state)
    benchmark::DoNotOptimize(npp::marginal_a0_exact(cur, hist, {1, 1}, npp::InitialPrior::flat(), rule()));
}
BENCHMARK(BM_ExactBernoulliMarginal);

void BM_KlObjective(benchmark::State& state) {
  const criteria::KlObjective obj(scenarios::normal_kl(1.0), rule());
  for (auto _ : state) benchmark::DoNotOptimize(obj({1.0, 0.4}));
}
BENCHMARK(BM_KlObjective);

void BM_DeriveOptimalKl(benchmark::State& state) {
  const auto cfg = scenarios::normal_kl(1.0);
  for (auto _ : state) benchmark::DoNotOptimize(criteria::derive_optimal_kl(cfg, rule()));
}
BENCHMARK(BM_DeriveOptimalKl)->Unit(benchmark::kMillisecond);

void BM_MseBank(benchmark::State& state) {
  const auto cfg = scenarios::normal_mse(1.0, static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(criteria::MseObjective(cfg, rule()));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 2);
}
BENCHMARK(BM_MseBank)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_MseEvaluate(benchmark::State& state) {
  const criteria::MseObjective obj(scenarios::normal_mse(1.0, 10000, 1), rule());
  for (auto _ : state) benchmark::DoNotOptimize(obj({0.5, 2.0}));
}
BENCHMARK(BM_MseEvaluate)->Unit(benchmark::kMillisecond);

void BM_LaplaceLogistic(benchmark::State& state) {
  numerics::RngStream rng(5, 0);
  const auto d = families::simulate_dataset(Eigen::Vector2d(0.1, 0.5), families::GlmFamily::Logistic,
                                            families::two_arm(), static_cast<std::size_t>(state.range(0)), 1.0, rng);
  for (auto _ : state)
    benchmark::DoNotOptimize(npp::marginal_a0_laplace_glm(d, d, {1, 1}, npp::InitialPrior::vague_normal(2), rule()));
}
BENCHMARK(BM_LaplaceLogistic)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ConvergenceDiagnostic(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        asymptotics::convergence_diagnostic(0.5, 1.0, asymptotics::default_schedule(), 0.05, {1, 1}, rule()));
}
BENCHMARK(BM_ConvergenceDiagnostic);

}  // namespace

BENCHMARK_MAIN();
