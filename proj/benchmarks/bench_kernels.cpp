#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "nslab/field.hpp"
#include "nslab/kernels.hpp"
#include "nslab/linear.hpp"
#include "nslab/lp.hpp"

using namespace nslab;

namespace {

SpectralField bench_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<cplx> c(g.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.on_nyquist(i) || g.xi2(i) == 0.0) continue;
    c[i] = cplx{gauss(rng), gauss(rng)};
  }
  SpectralField f(g, std::move(c));
  hermitize(f);
  return f;
}

State bench_state(const Grid& g, std::uint64_t seed) {
  State s(g);
  s.a = 0.01 * bench_field(g, seed);
  for (int a = 0; a < g.dim(); ++a) s.v.comp[static_cast<std::size_t>(a)] = 0.01 * bench_field(g, seed + 1 + a);
  s.theta = 0.01 * bench_field(g, seed + 7);
  return s;
}

kernels::Exec exec_of(const benchmark::State& state) {
  return state.range(1) ? kernels::Exec::parallel : kernels::Exec::serial;
}

void args_serial_parallel(benchmark::internal::Benchmark* b) {
  b->Args({32, 0})->Args({32, 1})->Args({64, 0})->Args({64, 1});
}

void BM_blocked_sum(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)) * 32768;
  std::vector<double> data(n, 1.00000001);
  for (auto _ : state) {
    const double s = kernels::sum_indexed(n, [&](std::size_t i) { return data[i] * data[i]; },
                                          exec_of(state));
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_blocked_sum)->Apply(args_serial_parallel);

void BM_multiplier_apply(benchmark::State& state) {
  const Grid g = make_grid(3, static_cast<int>(state.range(0)), 2.0 * std::numbers::pi);
  const SpectralField f = bench_field(g, 3);
  const kernels::Exec ex = exec_of(state);
  for (auto _ : state) {
    std::vector<cplx> out(g.size());
    kernels::for_each_index(g.size(), [&](std::size_t i) { out[i] = -g.xi2(i) * f.coeffs()[i]; }, ex);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_multiplier_apply)->Apply(args_serial_parallel);

void BM_block_norm_ladder(benchmark::State& state) {
  const Grid g = make_grid(3, static_cast<int>(state.range(0)), 2.0 * std::numbers::pi);
  const LpPartition part = build_partition(-1, 5, 1);
  const SpectralField f = bench_field(g, 5);
  for (auto _ : state) {
    double acc = 0.0;
    for (int j = part.j_min; j <= part.j_max; ++j) acc += block_lp_norm(f, j, 2.0, part);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_block_norm_ladder)->Args({32, 1})->Args({64, 1});

void BM_dealiased_product(benchmark::State& state) {
  const Grid g = make_grid(3, static_cast<int>(state.range(0)), 2.0 * std::numbers::pi);
  const SpectralField f = bench_field(g, 7);
  const SpectralField h = bench_field(g, 8);
  for (auto _ : state) {
    const SpectralField p = dealiased_product(f, h);
    benchmark::DoNotOptimize(p.coeffs().data());
  }
}
BENCHMARK(BM_dealiased_product)->Args({32, 1})->Args({64, 1});

void BM_semigroup_apply(benchmark::State& state) {
  const Grid g = make_grid(3, static_cast<int>(state.range(0)), 16.0 * std::numbers::pi);
  const DerivedConstants c = derive_constants(ideal_gas_model());
  const State s = bench_state(g, 11);
  const SemigroupTable table = build_semigroup_table(g, 0.1, c, false);
  for (auto _ : state) {
    const State out = apply_semigroup_table(table, s);
    benchmark::DoNotOptimize(out.a.coeffs().data());
  }
}
BENCHMARK(BM_semigroup_apply)->Args({32, 1})->Args({64, 1});

}  // namespace

BENCHMARK_MAIN();
