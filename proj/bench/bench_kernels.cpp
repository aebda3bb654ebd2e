// Parallel kernels against their serial references. Run with OMP_NUM_THREADS
// (or SPR_LAB_THREADS via the CLI) set to compare scaling.

#include <benchmark/benchmark.h>

#include <map>
#include <random>
#include <vector>

#include "spr/kernels.hpp"
#include "spr/sidon.hpp"

namespace {

using spr::cplx;

struct Data {
  std::vector<cplx> f, g;
  std::vector<double> w;

  explicit Data(std::size_t n) : f(n), g(n), w(n, 1.0 / static_cast<double>(n)) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> z;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = {z(rng), z(rng)};
      g[i] = {z(rng), z(rng)};
    }
  }
};

const Data& data(std::size_t n) {
  static std::map<std::size_t, Data> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Data(n)).first;
  return it->second;
}

template <bool Parallel>
void BM_inner(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(spr::kernels::inner(d.f, d.g, d.w));
    else
      benchmark::DoNotOptimize(spr::kernels::serial::inner(d.f, d.g, d.w));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_shifted_p4(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  const cplx z = std::polar(1.0, 0.3);
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(spr::kernels::shifted_pow_sum(d.f, d.g, z, d.w, 4.0));
    else
      benchmark::DoNotOptimize(spr::kernels::serial::shifted_pow_sum(d.f, d.g, z, d.w, 4.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_shifted_p3(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  const cplx z = std::polar(1.0, 0.3);
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(spr::kernels::shifted_pow_sum(d.f, d.g, z, d.w, 3.0));
    else
      benchmark::DoNotOptimize(spr::kernels::serial::shifted_pow_sum(d.f, d.g, z, d.w, 3.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_modulus_gap(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(spr::kernels::modulus_gap_pow_sum(d.f, d.g, d.w, 4.0));
    else
      benchmark::DoNotOptimize(spr::kernels::serial::modulus_gap_pow_sum(d.f, d.g, d.w, 4.0));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_quartic_moments(benchmark::State& state) {
  const auto& d = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(spr::kernels::quartic_moments(d.f, d.g, 1.0, d.w));
    else
      benchmark::DoNotOptimize(spr::kernels::serial::quartic_moments(d.f, d.g, 1.0, d.w));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_linear_combination(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  constexpr std::size_t m = 8;
  const auto& d = data(n);
  std::vector<std::span<const cplx>> cols(m, std::span<const cplx>(d.f));
  std::vector<cplx> coeffs(m, cplx(0.5, -0.25));
  std::vector<cplx> out(n);
  for (auto _ : state) {
    if constexpr (Parallel)
      spr::kernels::linear_combination(cols, coeffs, out);
    else
      spr::kernels::serial::linear_combination(cols, coeffs, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<std::int64_t>(m));
}

template <bool Parallel>
void BM_greedy_b2(benchmark::State& state) {
  const int count = static_cast<int>(state.range(0));
  for (auto _ : state) {
    if constexpr (Parallel)
      benchmark::DoNotOptimize(spr::sidon::greedy_bh(2, count));
    else
      benchmark::DoNotOptimize(spr::sidon::greedy_bh_serial(2, count));
  }
}

#define SPR_BENCH_PAIR(name, ...)                              \
  BENCHMARK_TEMPLATE(name, false)->Name(#name "/serial")->__VA_ARGS__; \
  BENCHMARK_TEMPLATE(name, true)->Name(#name "/parallel")->__VA_ARGS__

SPR_BENCH_PAIR(BM_inner, RangeMultiplier(16)->Range(1 << 12, 1 << 20));
SPR_BENCH_PAIR(BM_shifted_p4, RangeMultiplier(16)->Range(1 << 12, 1 << 20));
SPR_BENCH_PAIR(BM_shifted_p3, RangeMultiplier(16)->Range(1 << 12, 1 << 20));
SPR_BENCH_PAIR(BM_modulus_gap, RangeMultiplier(16)->Range(1 << 12, 1 << 20));
SPR_BENCH_PAIR(BM_quartic_moments, RangeMultiplier(16)->Range(1 << 12, 1 << 20));
SPR_BENCH_PAIR(BM_linear_combination, RangeMultiplier(16)->Range(1 << 12, 1 << 20));
SPR_BENCH_PAIR(BM_greedy_b2, Arg(60)->Arg(120));

}  // namespace

BENCHMARK_MAIN();
