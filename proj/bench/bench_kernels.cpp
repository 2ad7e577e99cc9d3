#include <benchmark/benchmark.h>

#include "ainf/lifting.hpp"

using namespace ainf;

namespace {

const RingSpec kQ = RingSpec::rationals();
const RingSpec kF2 = RingSpec::prime_field(2);

void BM_Stasheff(benchmark::State& state) {
  auto ka = builtin("K_ainf", kQ);
  bool parallel = state.range(0) != 0;
  long tuples = 0;
  for (auto _ : state) benchmark::DoNotOptimize(stasheff_violations(ka, {5, 4}, parallel, &tuples));
  state.counters["tuples"] = static_cast<double>(tuples);
}

std::vector<StrictFunctor> dg_catalog(const RingSpec& ring) {
  std::vector<StrictFunctor> out;
  for (const auto* n : {"Psi", "Psi0", "Psi1", "Psi2", "iota", "pi_I", "pi_B", "pi_K", "F_dg", "id:I"})
    out.push_back(catalog_functor(n, ring));
  return out;
}

void BM_ClassifyAll(benchmark::State& state) {
  auto fs = dg_catalog(kQ);
  bool parallel = state.range(0) != 0;
  // hom windows are cached, so this measures the predicates on warm caches
  for (auto _ : state) benchmark::DoNotOptimize(classify_all(fs, {5, 4}, parallel));
}

void BM_OracleSweep(benchmark::State& state) {
  std::vector<StrictFunctor> fs;
  for (const auto* n : {"Psi", "iota", "pi_I", "pi_B", "Psi1", "Psi2"}) fs.push_back(catalog_functor(n, kF2));
  std::vector<GeneratingMap> maps;
  for (const auto* m : {"Q", "S(0)", "S(1)", "R(0)", "R(1)", "F_dg"}) maps.push_back(GeneratingMap::parse(m));
  bool parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(oracle_sweep(fs, maps, 20000, {6, 4}, {3, 4}, parallel));
}

}  // namespace

BENCHMARK(BM_Stasheff)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassifyAll)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OracleSweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
