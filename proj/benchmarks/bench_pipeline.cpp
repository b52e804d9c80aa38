#include <benchmark/benchmark.h>

#include "socv/conditions.hpp"
#include "socv/multipliers.hpp"
#include "socv/registry.hpp"

using namespace socv;

namespace {

struct Pe {
  RegistryEntry e;
  LinearizedSystem lin;
  MultiplierSet set;
  std::vector<VertexForm> g_class;
  DiscretizedCone cone;
};

Pe pe(int N, double T) {
  Pe s{registry("pe", N, T), {}, {}, {}, {}};
  s.lin = linearize(s.e.problem, s.e.reference);
  s.set = find_multipliers(s.e.problem, s.e.reference, 1e-8);
  s.g_class = g_class_vertices(s.e.problem, s.e.reference, s.lin, s.set, 1e-8);
  s.cone = build_cone(s.e.problem, s.e.reference, s.lin, 1e-8);
  return s;
}

}  // namespace

static void BM_Costate(benchmark::State& state) {
  const auto e = registry("pe", static_cast<int>(state.range(0)));
  const LinearizedSystem lin = linearize(e.problem, e.reference);
  VectorXd alpha = VectorXd::Ones(1), beta = VectorXd::Zero(3);
  beta(2) = -1.0;
  for (auto _ : state) benchmark::DoNotOptimize(integrate_costate(e.problem, lin, e.reference, alpha, beta));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Costate)->RangeMultiplier(2)->Range(250, 4000)->Complexity(benchmark::oN);

static void BM_FindMultipliers(benchmark::State& state) {
  const auto e = registry("pe", static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_multipliers(e.problem, e.reference, 1e-8));
}
BENCHMARK(BM_FindMultipliers)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond);

static void BM_GohMatrices(benchmark::State& state) {
  const Pe s = pe(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(goh_matrices(s.e.problem, s.lin, s.e.reference, s.set.vertices[0]));
}
BENCHMARK(BM_GohMatrices)->RangeMultiplier(2)->Range(250, 2000)->Unit(benchmark::kMillisecond);

static void BM_ApplyOmegaP2(benchmark::State& state) {
  const Pe s = pe(static_cast<int>(state.range(0)), 1.0);
  const VectorXd z = VectorXd::Random(s.cone.dim());
  for (auto _ : state) benchmark::DoNotOptimize(apply_omega_P2(s.cone, s.g_class[0].gm, z));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ApplyOmegaP2)->RangeMultiplier(2)->Range(250, 4000)->Complexity(benchmark::oN);

static void BM_AssembleOmegaP2(benchmark::State& state) {
  const Pe s = pe(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_omega_P2(s.cone, s.g_class[0].gm));
}
BENCHMARK(BM_AssembleOmegaP2)->RangeMultiplier(2)->Range(125, 1000)->Unit(benchmark::kMillisecond);

static void BM_Sufficiency(benchmark::State& state) {
  const Pe s = pe(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sufficiency_check(s.cone, s.g_class, s.set.exhaustive));
}
BENCHMARK(BM_Sufficiency)->RangeMultiplier(2)->Range(125, 1000)->Unit(benchmark::kMillisecond);

static void BM_NecessityScan(benchmark::State& state) {
  const Pe s = pe(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(necessity_scan(s.cone, s.g_class, s.set.exhaustive, 200, 1, 1e-8));
  }
}
BENCHMARK(BM_NecessityScan)->Arg(250)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
