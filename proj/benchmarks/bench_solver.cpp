#include <benchmark/benchmark.h>

#include "penprec/glasso.hpp"
#include "penprec/penalty.hpp"
#include "penprec/scenario.hpp"
#include "penprec/selector.hpp"

using namespace penprec;

namespace {

SymMatrix tridiagonal_sample(std::size_t p, std::size_t n) {
  RandomStream rng(7);
  const auto chol = cholesky(inverse_spd(cholesky(make_tridiagonal(p))));
  return sample_covariance(sample_mvn(chol, n, rng));
}

void BM_LassoFit(benchmark::State& state) {
  const auto p = static_cast<std::size_t>(state.range(0));
  const SymMatrix s = tridiagonal_sample(p, 2 * p);
  const double lambda = 0.1 * lambda_grid(s)[0];
  const auto w = PenaltyWeights::uniform(p, lambda);
  for (auto _ : state) benchmark::DoNotOptimize(solve_weighted_glasso(s, w));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LassoFit)->RangeMultiplier(2)->Range(5, 80)->Complexity();

void BM_Path(benchmark::State& state) {
  const auto kind = static_cast<PenaltyKind>(state.range(0));
  const SymMatrix s = tridiagonal_sample(20, 100);
  const auto grid = lambda_grid(s);
  PenaltyConfig cfg;
  cfg.kind = kind;
  for (auto _ : state) benchmark::DoNotOptimize(fit_path(s, cfg, grid, SolverOptions{}));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Path)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace
