#include <benchmark/benchmark.h>

#include "kreisslab/bounds.hpp"
#include "kreisslab/constants.hpp"
#include "kreisslab/dlp.hpp"
#include "kreisslab/linalg.hpp"
#include "kreisslab/rng.hpp"
#include "kreisslab/shift_families.hpp"

using namespace kreisslab;

namespace {

CMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
  Rng rng(seed);
  return rng.gaussian_matrix(n, n);
}

void BM_op_norm(benchmark::State& state) {
  const CMatrix a = random_matrix(state.range(0), 1);
  for (auto _ : state) benchmark::DoNotOptimize(op_norm(a));
}
BENCHMARK(BM_op_norm)->Arg(32)->Arg(128)->Arg(256);

void BM_resolvent(benchmark::State& state) {
  CMatrix a = random_matrix(state.range(0), 2);
  a *= 0.8 / op_norm(a);
  const cd z(1.05, 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(resolvent(a, z));
}
BENCHMARK(BM_resolvent)->Arg(32)->Arg(128)->Arg(256);

void BM_corner_entry(benchmark::State& state) {
  ShiftFamilySpec spec{ShiftVariant::cesaro, 2, 0.05};
  for (auto _ : state) benchmark::DoNotOptimize(corner_entry(spec, state.range(0)));
}
BENCHMARK(BM_corner_entry)->Arg(1000)->Arg(100000);

void BM_shift_power_norm(benchmark::State& state) {
  ShiftFamilySpec spec{ShiftVariant::cesaro, 1, 0.1};
  TruncationSpec trunc{state.range(0)};
  for (auto _ : state)
    benchmark::DoNotOptimize(shift_power_norm(spec, trunc, trunc.N - 1));
}
BENCHMARK(BM_shift_power_norm)->Arg(256)->Arg(1024);

void BM_kreiss_objective(benchmark::State& state) {
  CMatrix a = random_matrix(state.range(0), 3);
  a *= 0.9 / op_norm(a);
  for (auto _ : state) benchmark::DoNotOptimize(kreiss_objective(a, cd(1.01, 0.1)));
}
BENCHMARK(BM_kreiss_objective)->Arg(32)->Arg(64);

void BM_decompose_angle_sweep(benchmark::State& state) {
  const CMatrix t = ritt_test(16, 4.0, 0);
  const VTypeCurve curve = VTypeCurve::power_law(1.0, 0.5, 1.0);
  const EpsilonProfile eps = EpsilonProfile::power(0.5, 1.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(decompose(t, curve, eps, 2, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_decompose_angle_sweep)->Arg(128)->Arg(512);

void BM_mu_dlp(benchmark::State& state) {
  CMatrix t = random_matrix(state.range(0), 4);
  t *= 0.7 / op_norm(t);
  double theta = 0.0;
  for (auto _ : state) {
    theta += 1e-3;
    benchmark::DoNotOptimize(mu_dlp(t, 1.2, theta));
  }
}
BENCHMARK(BM_mu_dlp)->Arg(16)->Arg(64);

} // namespace

BENCHMARK_MAIN();
