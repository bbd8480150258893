#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "heisenclone/kernels.hpp"
#include "heisenclone/replication.hpp"
#include "heisenclone/spectra.hpp"

using namespace heisenclone;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) == 0 ? Exec::serial : Exec::parallel; }

Spectrum three_level() {
  return normalize_spectrum(std::vector<RawLevel>{{"0", 0.2}, {"1/3", 0.3}, {"1", 0.5}});
}

void BM_Convolution(benchmark::State& state) {
  auto s = three_level();
  for (auto _ : state) benchmark::DoNotOptimize(n_copy_distribution_convolution(s, 2000, {}, mode(state)));
}

void BM_ShiftedOverlap(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-40.0, 0.0);
  std::vector<double> a(20'000), b(200'000);
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  std::vector<double> out(4'000);
  for (auto _ : state) {
    kernels::shifted_overlap(a, b, 90'000, out, mode(state));
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_Lemma1(benchmark::State& state) {
  auto s = normalize_spectrum(std::vector<RawLevel>{{"0", 0.5}, {"1", 0.5}});
  auto pn = n_copy_distribution(s, 120);
  auto pm = n_copy_distribution(s, 157'744);
  for (auto _ : state)
    benchmark::DoNotOptimize(detail::lemma1_bound(s, pn, pm, 1e-30, max_e_delta(s, 120), mode(state)));
}

}  // namespace

BENCHMARK(BM_Convolution)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShiftedOverlap)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Lemma1)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
