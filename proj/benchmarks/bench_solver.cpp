#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "distdeg/approx.hpp"
#include "distdeg/critical_system.hpp"
#include "distdeg/solver.hpp"

using namespace distdeg;

namespace {

VarietySpec curve(const std::string& g) {
  const std::vector<std::string> gens{g};
  return VarietySpec::from_text(2, gens, 1);
}

void BM_SolveCircle(benchmark::State& state) {
  const auto s = build_system(curve("y1^2 + y2^2 - 1"), NormSpec::euclidean(), Formulation::Auto, 0);
  const std::vector<double> x{3.0, 4.0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_at(s, std::span<const double>(x), {}));
}
BENCHMARK(BM_SolveCircle);

void BM_SolveEllipse(benchmark::State& state) {
  const auto s = build_system(curve("y1^2/4 + y2^2 - 1"), NormSpec::euclidean(), Formulation::Auto, 0);
  const std::vector<double> x{0.7, -1.3};
  for (auto _ : state) benchmark::DoNotOptimize(solve_at(s, std::span<const double>(x), {}));
}
BENCHMARK(BM_SolveEllipse);

void BM_SolveCircleL43(benchmark::State& state) {
  const auto s = build_system(curve("y1^2 + y2^2 - 1"), NormSpec::lp(2, 1), Formulation::Auto, 0);
  const std::vector<double> x{0.3, 1.7};
  for (auto _ : state) benchmark::DoNotOptimize(solve_at(s, std::span<const double>(x), {}));
}
BENCHMARK(BM_SolveCircleL43);

void BM_ApproxLineL4(benchmark::State& state) {
  const Approximator approx(curve("y1 - y2"), NormSpec::lp(2, 0), {}, {});
  const std::vector<double> x{0.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(approx(x));
}
BENCHMARK(BM_ApproxLineL4);

void BM_ParsePolynomial(benchmark::State& state) {
  const std::vector<std::string> vars{"y1", "y2", "y3"};
  for (auto _ : state) {
    benchmark::DoNotOptimize(parse_polynomial("(y1 + 2*y2 - y3/3)^4 - y1*y2*y3 + 7", vars));
  }
}
BENCHMARK(BM_ParsePolynomial);

}  // namespace

BENCHMARK_MAIN();
