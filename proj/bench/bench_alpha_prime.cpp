#include <benchmark/benchmark.h>

#include "iltlab/functional.hpp"

using namespace iltlab;

static void run(benchmark::State& st, process_spec spec, bool serial) {
    std::size_t n = static_cast<std::size_t>(st.range(0));
    path2d p = sample_path(spec, 1.0, n, rng_policy{1}, 0);
    double eps = 2.0 / static_cast<double>(n);
    dx1_kernel k = dx1_kernel::make(spec, eps);
    for (auto _ : st) {
        double v = serial ? alpha_prime_serial(p, eps, region_spec::triangle(1.0), k).value
                          : alpha_prime(p, eps, region_spec::triangle(1.0), k).value;
        benchmark::DoNotOptimize(v);
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(n * (n + 1) / 2));
}

static void bm_brownian_tiled(benchmark::State& st) { run(st, process_spec::brownian(), false); }
static void bm_brownian_serial(benchmark::State& st) { run(st, process_spec::brownian(), true); }
static void bm_stable_tiled(benchmark::State& st) { run(st, process_spec::stable(1.5), false); }
static void bm_stable_serial(benchmark::State& st) { run(st, process_spec::stable(1.5), true); }

BENCHMARK(bm_brownian_tiled)->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(bm_brownian_serial)->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(bm_stable_tiled)->RangeMultiplier(2)->Range(256, 2048);
BENCHMARK(bm_stable_serial)->RangeMultiplier(2)->Range(256, 2048);

BENCHMARK_MAIN();
