#include <benchmark/benchmark.h>

#include "cqmorph/counterexample.hpp"
#include "cqmorph/divergence.hpp"
#include "cqmorph/feasibility.hpp"
#include "cqmorph/linalg.hpp"
#include "cqmorph/sampling.hpp"

namespace {

using namespace cqmorph;

void BM_Eigh(benchmark::State& state) {
  Rng rng = make_rng(1);
  const HermitianOp m = random_hermitian(rng, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(eigh(m));
}
BENCHMARK(BM_Eigh)->Arg(2)->Arg(4)->Arg(8);

void BM_MaxFDivergence(benchmark::State& state) {
  Rng rng = make_rng(2);
  const int dim = static_cast<int>(state.range(0));
  const QuantumPair pair(random_density(rng, dim, dim), random_density(rng, dim, dim - 1));
  const ConvexFn f = power_family(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(max_f_divergence(f, pair));
}
BENCHMARK(BM_MaxFDivergence)->Arg(2)->Arg(4)->Arg(8);

void BM_CqFeasibleForward(benchmark::State& state) {
  Rng rng = make_rng(3);
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const int dim = static_cast<int>(state.range(1));
  const ClassicalPair from(random_prob_vector(rng, n), random_prob_vector(rng, n));
  const CQChannel gamma = random_cq_channel(rng, n, dim, dim);
  const QuantumPair to(DensityOp(gamma.apply(from.p0)), DensityOp(gamma.apply(from.p1)));
  for (auto _ : state) benchmark::DoNotOptimize(cq_feasible(from, to));
}
BENCHMARK(BM_CqFeasibleForward)->Args({3, 2})->Args({4, 3})->Args({6, 4})->Unit(benchmark::kMillisecond);

void BM_BStar(benchmark::State& state) {
  const TriplePoint triple(0.1, 0.3, 0.6);
  const std::vector<double> grid = default_counterexample_grid();
  for (auto _ : state) benchmark::DoNotOptimize(b_star(triple, grid));
}
BENCHMARK(BM_BStar)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
