#include <benchmark/benchmark.h>

#include <random>

#include "rqcm/circuit_mc.hpp"
#include "rqcm/mean_field.hpp"

using namespace rqcm;

namespace {

const LocalMomentOperator& haar_invariant(int t) {
  static const LocalMomentOperator m2 = build_local_moment_operator(GateDistribution::haar_u4(), 2, u2_invariant_basis(2));
  static const LocalMomentOperator m3 = build_local_moment_operator(GateDistribution::haar_u4(), 3, u2_invariant_basis(3));
  return t == 2 ? m2 : m3;
}

}  // namespace

static void BM_AssembleSector(benchmark::State& state) {
  const auto& m = haar_invariant(3);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto s = assemble_symmetric_moment_matrix(m, n);
    benchmark::DoNotOptimize(s.matrix.nonZeros());
  }
  state.counters["dim"] = static_cast<double>(assemble_symmetric_moment_matrix(m, n).dimension());
}
BENCHMARK(BM_AssembleSector)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_IterativeGap(benchmark::State& state) {
  const auto& m = haar_invariant(3);
  SpectralOptions o;
  o.dense_limit = 0;
  o.multiplicity_probe = 0;
  const auto sector = assemble_symmetric_moment_matrix(m, static_cast<int>(state.range(0)));
  const auto fixed = permutation_fixed_vectors(m.basis(), *sector.basis);
  for (auto _ : state) benchmark::DoNotOptimize(spectral_gap(sector, fixed, o).lambda1);
}
BENCHMARK(BM_IterativeGap)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_MeanFieldScan(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  const auto m = build_local_moment_operator(GateDistribution::haar_u4(), t, mean_field_basis(t, true));
  for (auto _ : state) benchmark::DoNotOptimize(leading_coefficient(m).a1);
}
BENCHMARK(BM_MeanFieldScan)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_FiniteAverageApply(benchmark::State& state) {
  const auto dist = GateDistribution::finite_set("cnot", {cnot_gate()}, {1.0});
  const int t = static_cast<int>(state.range(0));
  const auto avg = make_finite_average(dist, t);
  Eigen::VectorXcd v = Eigen::VectorXcd::Random(static_cast<Eigen::Index>(ipow(16, t)));
  for (auto _ : state) benchmark::DoNotOptimize(avg->apply(v).data());
}
BENCHMARK(BM_FiniteAverageApply)->Arg(2)->Arg(3);

static void BM_RandomU4(benchmark::State& state) {
  std::mt19937_64 rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(random_u4(rng).data());
}
BENCHMARK(BM_RandomU4);

static void BM_CircuitCorrelator(benchmark::State& state) {
  const auto a = single_site_pauli(4, 2, 0, 3);
  const auto dist = GateDistribution::haar_u4();
  std::uint64_t seed = 0;
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(circuit_correlator(a, a, sample_circuit(4, depth, dist, ++seed)));
}
BENCHMARK(BM_CircuitCorrelator)->Arg(10)->Arg(30);

BENCHMARK_MAIN();
