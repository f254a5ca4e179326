#include <benchmark/benchmark.h>

#include <vector>

#include "slicecov/array.hpp"
#include "slicecov/array_normal.hpp"
#include "slicecov/flip_flop.hpp"
#include "slicecov/glasso.hpp"
#include "slicecov/linalg.hpp"
#include "slicecov/multilinear.hpp"
#include "slicecov/rng.hpp"
#include "slicecov/slicing.hpp"

namespace {

using namespace slicecov;

Matrix bench_spd(Rng& rng, Index n) {
  Matrix b(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) b(r, c) = rng.normal();
  }
  return b * b.transpose() / static_cast<double>(n) + 0.5 * Matrix::Identity(n, n);
}

ArrayNormalModel bench_model(Rng& rng, const std::vector<Index>& dims) {
  ArrayNormalModel model{Array(dims), {}};
  for (Index m : dims) model.components.push_back(spd_sqrt(bench_spd(rng, m)));
  return model;
}

void BM_Rmatmul(benchmark::State& state) {
  const Index m = state.range(0);
  Rng rng(1);
  const ArrayNormalModel model = bench_model(rng, {m, m, m});
  Array x({m, m, m});
  for (Index k = 0; k < x.size(); ++k) x[k] = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rmatmul(model.components, x));
  }
  state.SetItemsProcessed(state.iterations() * x.size());
}
BENCHMARK(BM_Rmatmul)->Arg(8)->Arg(16)->Arg(24);

void BM_FlipFlop(benchmark::State& state) {
  const Index m = state.range(0);
  Rng rng(2);
  const ArrayNormalModel truth = bench_model(rng, {m, m});
  const std::vector<Array> samples = sample(truth, 3, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(flip_flop(samples));
  }
}
BENCHMARK(BM_FlipFlop)->Arg(4)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Glasso(benchmark::State& state) {
  const Index p = state.range(0);
  Rng rng(4);
  const Matrix s = bench_spd(rng, p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(glasso(s, 0.1));
  }
}
BENCHMARK(BM_Glasso)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_ApplyPrecision(benchmark::State& state) {
  const Index m = state.range(0);
  Rng rng(5);
  ArrayNormalModel model = bench_model(rng, {m, m});
  const Index p = m * m;
  CovarianceEstimate est{std::move(model), SlicingPlan{p, {m, m}, {}}, FitReport{}};
  Vector v(p);
  for (Index i = 0; i < p; ++i) v(i) = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_precision(est, v));
  }
  state.SetItemsProcessed(state.iterations() * p);
}
BENCHMARK(BM_ApplyPrecision)->Arg(10)->Arg(20)->Arg(45);

}  // namespace

BENCHMARK_MAIN();
