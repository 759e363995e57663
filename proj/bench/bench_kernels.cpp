#include <benchmark/benchmark.h>

#include "em1d/kernels.hpp"
#include "em1d/linsolve.hpp"
#include "em1d/nonlinear.hpp"

using namespace em1d;

namespace {

Exec policy(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& st) { st.SetLabel(st.range(1) ? "parallel" : "serial"); }

void BM_green_e_table(benchmark::State& st) {
  const Grid g(200.0 * kPi, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(green_e_table(g, 0.05, policy(st)));
  label(st);
}

void BM_apply_blocks(benchmark::State& st) {
  const Grid g(200.0 * kPi, static_cast<int>(st.range(0)));
  const BlockTable6 table = green_e_table(g, 0.05);
  std::vector<Vec6c> y(static_cast<std::size_t>(g.size()), Vec6c::Ones());
  for (auto _ : st) {
    apply_blocks(table, y, policy(st));
    benchmark::DoNotOptimize(y.data());
  }
  label(st);
}

void BM_source_modes(benchmark::State& st) {
  const Grid g(200.0 * kPi, static_cast<int>(st.range(0)));
  ProfileSpec p = RunConfig::default_nonlinear_profile();
  p.amplitude = 1e-3;
  const PhysState s = make_state(InitProfile(p), g);
  const PressureLaw law;
  for (auto _ : st) benchmark::DoNotOptimize(source_modes(s, law, policy(st)));
  label(st);
}

void BM_step(benchmark::State& st) {
  const Grid g(200.0 * kPi, static_cast<int>(st.range(0)));
  ProfileSpec p = RunConfig::default_nonlinear_profile();
  p.amplitude = 1e-3;
  PhysState s = make_state(InitProfile(p), g);
  const Stepper stepper(g, 0.05, PressureLaw{}, policy(st));
  for (auto _ : st) {
    s = stepper.step(s);
    benchmark::DoNotOptimize(s.t);
  }
  label(st);
}

void args(benchmark::internal::Benchmark* b) {
  for (int n : {1024, 8192})
    for (int par : {0, 1}) b->Args({n, par});
}

}  // namespace

BENCHMARK(BM_green_e_table)->Apply(args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_apply_blocks)->Apply(args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_source_modes)->Apply(args)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_step)->Apply(args)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
