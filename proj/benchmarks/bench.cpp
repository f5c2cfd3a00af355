#include <benchmark/benchmark.h>

#include <random>

#include "hv/functionals.hpp"
#include "hv/numerics.hpp"
#include "hv/simulation.hpp"
#include "hv/verification.hpp"

namespace {

void BM_OwensT(benchmark::State& state) {
  double h = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hv::owens_t(h, 3.7));
    h = h > 5.0 ? 0.1 : h + 0.013;
  }
}
BENCHMARK(BM_OwensT);

void BM_HuberFunctionalSkewNormal(benchmark::State& state) {
  const auto d = hv::Distribution::skew_normal(19.0, 6.0, 20.0);
  const hv::HuberParams p(0.5, 1.5, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(hv::huber_functional(d, p));
}
BENCHMARK(BM_HuberFunctionalSkewNormal);

void BM_HuberFunctionalEmpirical(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  std::vector<double> xs(static_cast<std::size_t>(state.range(0)));
  for (double& x : xs) x = z(rng);
  const auto d = hv::Distribution::empirical(xs);
  const hv::HuberParams p(0.3, 1.0, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(hv::huber_functional(d, p));
}
BENCHMARK(BM_HuberFunctionalEmpirical)->Arg(100)->Arg(10000);

void BM_MurphyDiagram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  std::vector<double> ys(n);
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    ys[i] = z(rng);
    a[i] = ys[i] + z(rng);
    b[i] = ys[i] + 0.5 * z(rng);
  }
  const hv::ForecastDataset data(ys, {{"A", a}, {"B", b}});
  const hv::HuberParams p(0.5, 1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hv::murphy_diagram(data, p));
}
BENCHMARK(BM_MurphyDiagram)->Arg(730)->Arg(5000);

void BM_SimulatedDay(benchmark::State& state) {
  const hv::EnvironmentConfig cfg;
  hv::Rng rng(3);
  for (auto _ : state) {
    const auto day = hv::sample_day(cfg, rng);
    benchmark::DoNotOptimize(hv::competitor_quotes(day.forecast, rng));
  }
}
BENCHMARK(BM_SimulatedDay);

}  // namespace

BENCHMARK_MAIN();
