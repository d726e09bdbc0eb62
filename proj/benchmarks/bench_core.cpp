#include <benchmark/benchmark.h>

#include "freelmi/ballmaps.hpp"
#include "freelmi/boundary.hpp"
#include "freelmi/convexotonic.hpp"

using namespace freelmi;

static void BM_LambdaEval(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(1);
  const MatrixTuple E = rng.tuple(3, 3, 3);
  const MatrixTuple X = rng.tuple(3, n, n);
  for (auto _ : state) benchmark::DoNotOptimize(lambda_eval(E, X));
}
BENCHMARK(BM_LambdaEval)->Arg(2)->Arg(8)->Arg(32);

static void BM_Membership(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Rng rng(2);
  const SpectraballPencil E(rng.tuple(2, 2, 3));
  const MatrixTuple X = rng.tuple(2, n, n).scaled(0.1);
  for (auto _ : state) benchmark::DoNotOptimize(membership(E, X));
}
BENCHMARK(BM_Membership)->Arg(2)->Arg(8)->Arg(32);

static void BM_CoEval(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const ConvexotonicMap p = make_convexotonic_map(polydisc_tuple(3), +1);
  Rng rng(3);
  const MatrixTuple X = rng.tuple(3, n, n).scaled(0.05);
  for (auto _ : state) benchmark::DoNotOptimize(co_eval(p, X));
}
BENCHMARK(BM_CoEval)->Arg(2)->Arg(8)->Arg(32);

static void BM_MinimalReduction(benchmark::State& state) {
  Rng rng(4);
  const MatrixTuple A = rng.tuple(2, 2, 2);
  const HermitianPencil P(A.direct_sum(A).direct_sum(A));
  for (auto _ : state) benchmark::DoNotOptimize(minimal_reduction(P));
}
BENCHMARK(BM_MinimalReduction);

static void BM_FockWitness(benchmark::State& state) {
  const SpectraballPencil E(MatrixTuple({CMatrix::Identity(1, 2), CMatrix::Identity(1, 2).reverse()}));
  const auto M = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fock_boundary_witness(E, M, 5));
}
BENCHMARK(BM_FockWitness)->Arg(1)->Arg(2)->Arg(3);

BENCHMARK_MAIN();
