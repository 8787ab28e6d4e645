#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "shiftlab/shiftlab.hpp"

using namespace shiftlab;

namespace {

void BM_ApplyBlockMethod(benchmark::State& st) {
  shiftop::BlockMethodOptions o;
  o.p = {2, 4};
  o.degree = static_cast<int>(st.range(0));
  const auto T = shiftop::build_block_method(o);
  std::mt19937_64 rng(1);
  const auto f = shiftop::random_input(T, rng);
  for (auto _ : st) benchmark::DoNotOptimize(shiftop::apply_T(T, f));
}
BENCHMARK(BM_ApplyBlockMethod)->Arg(4)->Arg(16)->Arg(64);

void BM_ApplyComposition(benchmark::State& st) {
  shiftop::CompositionOptions o;
  o.depth = static_cast<int>(st.range(0));
  const auto T = shiftop::build_composition(o);
  std::mt19937_64 rng(1);
  const auto f = shiftop::random_input(T, rng);
  for (auto _ : st) benchmark::DoNotOptimize(shiftop::apply_T(T, f));
}
BENCHMARK(BM_ApplyComposition)->Arg(6)->Arg(10);

void BM_SupNormCircle(benchmark::State& st) {
  shiftop::GoldenOptions o;
  o.degree = static_cast<int>(st.range(0));
  const auto T = shiftop::build_golden_arc(o);
  std::mt19937_64 rng(2);
  const auto f = shiftop::random_input(T, rng);
  for (auto _ : st) benchmark::DoNotOptimize(funcspace::sup_norm(f, 4096));
}
BENCHMARK(BM_SupNormCircle)->Arg(8)->Arg(32);

void BM_SusoKernel(benchmark::State& st) {
  shiftop::BlockMethodOptions o;
  o.p = {2};
  o.degree = static_cast<int>(st.range(0));
  const auto T = shiftop::build_block_method(o);
  for (auto _ : st) benchmark::DoNotOptimize(verify::suso_constraint_kernel(T));
  st.SetLabel("p = (2)");
}
BENCHMARK(BM_SusoKernel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GoldenKernel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(verify::golden_arc_kernel(static_cast<int>(st.range(0))));
}
BENCHMARK(BM_GoldenKernel)->Arg(16)->Arg(128);

void BM_OrbitRotation(benchmark::State& st) {
  const auto flow = dynamics::make_rotation_flow({kPhi});
  const funcspace::BlockPoint x{1, {0.0}, std::nullopt};
  for (auto _ : st) benchmark::DoNotOptimize(dynamics::orbit_density(flow, x, 1e-3, 100000));
}
BENCHMARK(BM_OrbitRotation)->Unit(benchmark::kMillisecond);

void BM_OrbitBilateralShift(benchmark::State& st) {
  const int depth = static_cast<int>(st.range(0));
  const auto bs = dynamics::make_bilateral_shift(2, 2'000'000, depth, 4);
  for (auto _ : st)
    benchmark::DoNotOptimize(dynamics::orbit_density(bs.flow, bs.seed.base, std::ldexp(1.0, -depth), bs.span + 16));
  st.counters["span"] = static_cast<double>(bs.span);
}
BENCHMARK(BM_OrbitBilateralShift)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
