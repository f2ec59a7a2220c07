#include <benchmark/benchmark.h>

#include <memory>

#include "fracvar/solver.hpp"
#include "fracvar/special_functions.hpp"

using namespace fracvar;

namespace {

VariationalProblem line_problem() {
  return VariationalProblem{
      Lagrangian::from_expression(Expression::parse("v^2")), FracOrder(0.999),
      FracOrder(0.999), 0.0, 1.0, FixedBoundary{0.0, 1.0}, std::nullopt,
      false};
}

VariationalProblem tracking_problem() {
  auto coeffs = std::make_shared<CoefficientSet>();
  coeffs->add("ybar", std::make_shared<MlAlphaPowerCoefficient>(0.5));
  return VariationalProblem{
      Lagrangian::from_expression(Expression::parse("(v - coeff:ybar)^2"),
                                  coeffs),
      FracOrder(0.5), FracOrder(0.5), 0.0, 1.0,
      FixedBoundary{1.0, mittag_leffler(0.5, 1.0)}, std::nullopt, false};
}

void BM_SolveFixedLine(benchmark::State& state) {
  const VariationalProblem p = line_problem();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fixed(p, n));
  }
}
BENCHMARK(BM_SolveFixedLine)->Arg(65)->Arg(129)->Arg(257);

void BM_SolveFixedTracking(benchmark::State& state) {
  const VariationalProblem p = tracking_problem();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_fixed(p, n));
  }
}
BENCHMARK(BM_SolveFixedTracking)->Arg(65)->Arg(129);

void BM_DiscreteGradient(benchmark::State& state) {
  const VariationalProblem p = tracking_problem();
  const auto n = static_cast<std::size_t>(state.range(0));
  const Grid grid(p.a, p.b, n);
  const DiscreteObjective obj(p.lagrangian, grid, p.alpha, p.beta);
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = 1.0 + grid.node(i);
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj.gradient(y));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DiscreteGradient)->RangeMultiplier(2)->Range(128, 1024)->Complexity();

}  // namespace

BENCHMARK_MAIN();
