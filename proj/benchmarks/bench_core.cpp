#include <random>

#include <benchmark/benchmark.h>

#include "quasispec/birkhoff.hpp"
#include "quasispec/eiconal.hpp"
#include "quasispec/models.hpp"
#include "quasispec/speccompare.hpp"
#include "quasispec/torusquant.hpp"

using namespace quasispec;

namespace {

FourierTaylorSymbol random_symbol(int K, int D, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  FourierTaylorSymbol s(K, D);
  for (int m1 = -K; m1 <= K; ++m1)
    for (int m2 = -K; m2 <= K; ++m2)
      for (int a1 = 0; a1 <= D; ++a1)
        for (int a2 = 0; a1 + a2 <= D; ++a2) s.set({m1, m2}, {a1, a2}, cplx(u(rng), u(rng)));
  return s;
}

void BM_StarProduct(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  const HSeries a{random_symbol(K, 6, 1)}, b{random_symbol(K, 6, 2)};
  const TruncationCaps caps{8, 12, 1e-30};
  for (auto _ : state) benchmark::DoNotOptimize(star_product(a, b, 3, caps));
}
BENCHMARK(BM_StarProduct)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_NormalForm(benchmark::State& state) {
  const auto P = benchmark1().operator_symbol(0.1);
  const NormalFormOptions opts{{6, 8, 1e-30}};
  for (auto _ : state) benchmark::DoNotOptimize(normal_form(P, static_cast<int>(state.range(0)), 0.1, opts));
}
BENCHMARK(BM_NormalForm)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_WeylMatrix(benchmark::State& state) {
  const auto b = benchmark1();
  const auto P = b.operator_symbol(0.1);
  const auto w = make_window(static_cast<int>(state.range(0)), 1.0 / 32, b.floquet);
  for (auto _ : state) benchmark::DoNotOptimize(weyl_matrix(P, w));
}
BENCHMARK(BM_WeylMatrix)->Arg(8)->Arg(14)->Arg(22)->Unit(benchmark::kMillisecond);

void BM_Eigs(benchmark::State& state) {
  const auto b = benchmark1();
  const auto A = weyl_matrix(b.operator_symbol(0.1), make_window(static_cast<int>(state.range(0)), 1.0 / 32, b.floquet));
  for (auto _ : state) benchmark::DoNotOptimize(eigs(A));
}
BENCHMARK(BM_Eigs)->Arg(8)->Arg(14)->Arg(22)->Unit(benchmark::kMillisecond);

void BM_EiconalSchema(benchmark::State& state) {
  const auto P = EiconalProblem::from_model(benchmark1(), 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(iterate_schema(P, cplx(0.0, 0.0)));
}
BENCHMARK(BM_EiconalSchema)->Unit(benchmark::kMillisecond);

void BM_Lattice(benchmark::State& state) {
  const auto b = benchmark1();
  const auto nf = normal_form(b.operator_symbol(0.1), 1, 0.1, NormalFormOptions{{6, 8, 1e-30}});
  for (auto _ : state) benchmark::DoNotOptimize(quasi_eigenvalues(nf.p_tilde, 1.0 / 48, b.floquet, b.rect, 0.1));
}
BENCHMARK(BM_Lattice)->Unit(benchmark::kMicrosecond);

void BM_MatchSpectra(benchmark::State& state) {
  const auto b = benchmark1();
  const auto nf = normal_form(b.operator_symbol(0.1), 3, 0.1);
  const auto run = compare_at(b, nf, 1.0 / 32, 0.1);
  std::vector<cplx> oracle;
  for (const auto& p : run.report.pairs) oracle.push_back(p.z_oracle);
  for (auto _ : state) benchmark::DoNotOptimize(match_spectra(run.lattice.points, oracle, b.rect, 0.1));
}
BENCHMARK(BM_MatchSpectra)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
