#include <benchmark/benchmark.h>

#include "penprec/scenario.hpp"
#include "penprec/selector.hpp"

using namespace penprec;

namespace {

// GACV costs one path; exact LOOCV costs n paths.
void BM_Selector(benchmark::State& state) {
  const auto kind = static_cast<SelectorKind>(state.range(0));
  const auto n = static_cast<std::size_t>(state.range(1));
  RandomStream data_rng(11);
  const auto chol = cholesky(inverse_spd(cholesky(make_tridiagonal(10))));
  const DataMatrix d = sample_mvn(chol, n, data_rng);
  const auto grid = lambda_grid(sample_covariance(d), 20);
  PenaltyConfig cfg;
  for (auto _ : state) {
    RandomStream rng(3);
    benchmark::DoNotOptimize(select(d, cfg, kind, grid, SolverOptions{}, rng));
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Selector)
    ->ArgsProduct({{static_cast<long>(SelectorKind::Loocv), static_cast<long>(SelectorKind::Kcv),
                    static_cast<long>(SelectorKind::Gacv), static_cast<long>(SelectorKind::Bic)},
                   {40, 160}})
    ->Unit(benchmark::kMillisecond);

}  // namespace
