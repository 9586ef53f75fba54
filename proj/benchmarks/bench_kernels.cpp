// Serial reference vs OpenMP kernels, and the end-to-end RHS pipelines.
#include <benchmark/benchmark.h>

#include <random>

#include "sqg/corpus.hpp"
#include "sqg/dynamics.hpp"
#include "sqg/kernels.hpp"

using namespace sqg;

namespace {

std::vector<kernels::cplx> random_cvec(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    std::vector<kernels::cplx> v(n);
    for (auto& c : v) c = kernels::cplx(nd(rng), nd(rng));
    return v;
}

std::vector<double> random_rvec(std::size_t n) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (auto& x : v) x = nd(rng);
    return v;
}

void bm_scale_real_serial(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto a = random_cvec(n);
    auto m = random_rvec(n);
    std::vector<kernels::cplx> out(n);
    for (auto _ : state) {
        kernels::serial::scale_real(a, m, out);
        benchmark::ClobberMemory();
    }
}

void bm_scale_real_omp(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto a = random_cvec(n);
    auto m = random_rvec(n);
    std::vector<kernels::cplx> out(n);
    for (auto _ : state) {
        kernels::omp::scale_real(a, m, out);
        benchmark::ClobberMemory();
    }
}

void bm_weighted_abs2_serial(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto a = random_cvec(n);
    auto m = random_rvec(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::weighted_abs2_sum(a, m));
}

void bm_weighted_abs2_omp(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto a = random_cvec(n);
    auto m = random_rvec(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::omp::weighted_abs2_sum(a, m));
}

void bm_abs_pow_serial(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto v = random_rvec(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::serial::abs_pow_sum(v, 4.0));
}

void bm_abs_pow_omp(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto v = random_rvec(n);
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::omp::abs_pow_sum(v, 4.0));
}

// End-to-end drift assembly (FFTs dominate) under each dispatch policy.
void bm_rhs_sqg(benchmark::State& state, kernels::Exec exec) {
    kernels::set_default_exec(exec);
    const GridSpec grid{static_cast<int>(state.range(0)), 1.5, 0};
    const PhysicalParams params{1.0, 0.75};
    SpectralField theta = random_band_field(grid, grid.max_mode(), 1.0, 5);
    for (auto _ : state) {
        SpectralField r = rhs_sqg(theta, params);
        benchmark::DoNotOptimize(r.coeffs().data());
    }
    kernels::set_default_exec(kernels::Exec::OpenMP);
}

void bm_rhs_sqg_serial(benchmark::State& state) {
    bm_rhs_sqg(state, kernels::Exec::Serial);
}

void bm_rhs_sqg_omp(benchmark::State& state) {
    bm_rhs_sqg(state, kernels::Exec::OpenMP);
}

}  // namespace

BENCHMARK(bm_scale_real_serial)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_scale_real_omp)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_weighted_abs2_serial)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_weighted_abs2_omp)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_abs_pow_serial)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_abs_pow_omp)->Arg(1 << 14)->Arg(1 << 18);
BENCHMARK(bm_rhs_sqg_serial)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(bm_rhs_sqg_omp)->Arg(32)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
