#include <benchmark/benchmark.h>

#include <cmath>

#include "fracvar/fractional_operators.hpp"
#include "fracvar/special_functions.hpp"

using namespace fracvar;

namespace {

GridFunction make_samples(std::size_t n) {
  return GridFunction::sample(Grid(0.0, 1.0, n), [](double x) {
    return std::exp(x) * std::sin(3.0 * x) + x * x;
  });
}

void BM_CaputoLeftL1(benchmark::State& state) {
  const GridFunction f = make_samples(static_cast<std::size_t>(state.range(0)));
  const FracOrder alpha(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(caputo_left(f, alpha));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CaputoLeftL1)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_RlDerivativeLeft(benchmark::State& state) {
  const GridFunction f = make_samples(static_cast<std::size_t>(state.range(0)));
  const FracOrder beta(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rl_derivative_left(f, beta));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RlDerivativeLeft)->RangeMultiplier(2)->Range(128, 2048)->Complexity();

void BM_PointwiseRlIntegral(benchmark::State& state) {
  const auto f = [](double t) { return std::exp(t) + t * t; };
  const FracOrder alpha(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rl_integral_left(f, alpha, 0.0, 1.0));
  }
}
BENCHMARK(BM_PointwiseRlIntegral);

void BM_MittagLeffler(benchmark::State& state) {
  const MLOrder alpha(0.5);
  double z = 0.0;
  for (auto _ : state) {
    z = std::fmod(z + 0.37, 2.0);
    benchmark::DoNotOptimize(mittag_leffler(alpha, z));
  }
}
BENCHMARK(BM_MittagLeffler);

void BM_VerifyIbp(benchmark::State& state) {
  const auto f = [](double x) { return x * x * x - 0.5 * x; };
  const auto g = [](double x) { return 1.0 + x * x; };
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_ibp(f, g, FracOrder(0.5), 0.0, 1.0, 1e-8));
  }
}
BENCHMARK(BM_VerifyIbp);

}  // namespace

BENCHMARK_MAIN();
