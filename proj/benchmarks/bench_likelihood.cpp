#include <benchmark/benchmark.h>

#include "symlik/likelihood.hpp"
#include "symlik/special.hpp"
#include "symlik/symbols.hpp"

using namespace symlik;

namespace {

const Family& biv() {
  static const Family f = Family::bivariate_normal(2, 5, 0.5, 0.5, 0.7);
  return f;
}

void BM_bvn_cdf(benchmark::State& state) {
  double x = -1.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bvn_cdf(x, 0.4, 0.7));
    x += 1e-9;
  }
}
BENCHMARK(BM_bvn_cdf);

void BM_interval_loglik(benchmark::State& state) {
  const Family f = Family::normal(0, 1);
  IntervalSymbol sym{-1.1, 1.4, 60, 6, 55};
  for (auto _ : state) benchmark::DoNotOptimize(loglik_interval(sym, f).value);
}
BENCHMARK(BM_interval_loglik);

void BM_rect_full_loglik(benchmark::State& state) {
  RngStream rng(1);
  DataMatrix X = biv().sample(8, rng);
  auto sym = make_rect_minmax(X);
  for (auto _ : state) benchmark::DoNotOptimize(loglik_rect_full(sym, biv()).value);
}
BENCHMARK(BM_rect_full_loglik);

void BM_seq_nest_loglik(benchmark::State& state) {
  RngStream rng(2);
  DataMatrix X = biv().sample(60, rng);
  const int l[] = {6, 5}, u[] = {55, 35}, ax[] = {1, 2};
  auto sym = make_rect_seq_nest(X, l, u, ax);
  for (auto _ : state) benchmark::DoNotOptimize(loglik_rect_seq_nest(sym, biv()).value);
}
BENCHMARK(BM_seq_nest_loglik);

void BM_iter_seg_loglik(benchmark::State& state) {
  RngStream rng(3);
  DataMatrix X = biv().sample(60, rng);
  const int l[] = {6, 3}, u[] = {55, 3}, ax[] = {1, 2};
  auto sym = make_rect_iter_seg(X, l, u, ax);
  for (auto _ : state) benchmark::DoNotOptimize(loglik_rect_iter_seg(sym, biv()).value);
}
BENCHMARK(BM_iter_seg_loglik);

// Cost is a function of the bin count only, not of the underlying n.
void BM_hist_fixed_loglik(benchmark::State& state) {
  const long n = state.range(0);
  const Family f = Family::normal(0, 1);
  std::vector<double> edges;
  for (int i = 0; i <= 20; ++i) edges.push_back(-5.0 + 0.5 * i);
  FixedBinHistogramSymbol sym;
  sym.grids = {edges};
  sym.counts.assign(20, n / 20);
  sym.counts[0] += n % 20;
  sym.n = static_cast<int>(n);
  for (auto _ : state) benchmark::DoNotOptimize(loglik_hist_fixed(sym, f).value);
  state.SetLabel("n=" + std::to_string(n));
}
BENCHMARK(BM_hist_fixed_loglik)->Arg(1000)->Arg(1000000);

void BM_classical_loglik(benchmark::State& state) {
  const Family f = Family::normal(0, 1);
  RngStream rng(4);
  DataMatrix X = f.sample(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(classical_loglik(X, f).value);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_classical_loglik)->Arg(1000)->Arg(1000000);

void BM_config_probs(benchmark::State& state) {
  for (auto _ : state) {
    auto probs = estimate_rect_config_probs(biv(), 5, 10000, RngStream(7));
    benchmark::DoNotOptimize(probs.probs[0]);
  }
}
BENCHMARK(BM_config_probs);

}  // namespace

BENCHMARK_MAIN();
