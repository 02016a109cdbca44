#include <benchmark/benchmark.h>

#include "magtorus/experiments.hpp"
#include "magtorus/random.hpp"

using namespace magtorus;

namespace {

BaseMatrix instance(int n) {
  const Graph g = random_3regular(n, 4);
  return BaseMatrix(g, experiment_matrix(g));
}

MagneticPoint random_point(const Graph& g, Rng& rng) {
  MagneticPoint p = zero_point(whole_graph_partition(g).free_edges());
  for (double& a : p.angles) a = rng.angle();
  return p;
}

void BM_EigHerm(benchmark::State& st) {
  const BaseMatrix h = instance(static_cast<int>(st.range(0)));
  Rng rng(1);
  const CMatrix m = assemble(h, random_point(h.graph(), rng));
  for (auto _ : st) benchmark::DoNotOptimize(eig_herm(m));
}
BENCHMARK(BM_EigHerm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_SupportEnumeration(benchmark::State& st) {
  const Graph g = random_3regular(static_cast<int>(st.range(0)), 4);
  for (auto _ : st) benchmark::DoNotOptimize(admissible_supports_3regular(g));
}
BENCHMARK(BM_SupportEnumeration)->Arg(8)->Arg(12)->Arg(16);

void BM_SigningSweep(benchmark::State& st) {
  const BaseMatrix h = instance(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(surplus_sweep(h));
}
BENCHMARK(BM_SigningSweep)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Hessian(benchmark::State& st) {
  const BaseMatrix h = instance(static_cast<int>(st.range(0)));
  const MagneticPoint p = enumerate_signings(h).front().point();
  for (auto _ : st) benchmark::DoNotOptimize(hessian(h, p, 2));
}
BENCHMARK(BM_Hessian)->Arg(8)->Arg(16)->Arg(32);

}  // namespace
