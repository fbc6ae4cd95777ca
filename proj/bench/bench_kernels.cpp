// OpenMP grid kernels against the serial reference versions.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "mixsteady/kernels.hpp"

using namespace mixsteady;

namespace {

struct Fields {
    GridSpec g;
    ScalarField f, c, a, b;
    explicit Fields(int n) : g{1.0, 1.0, n, n}, f(g.size()), c(g.size()), a(g.size()), b(g.size()) {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> U(0.5, 1.5);
        for (std::size_t p = 0; p < g.size(); ++p) {
            f[p] = U(rng);
            c[p] = U(rng);
        }
    }
};

void threads(benchmark::State& st) { omp_set_num_threads(static_cast<int>(st.range(1))); }

void BM_gradient_omp(benchmark::State& st) {
    Fields d(static_cast<int>(st.range(0)));
    threads(st);
    for (auto _ : st) {
        kernels::gradient(d.g, d.f.data(), d.a.data(), d.b.data());
        benchmark::DoNotOptimize(d.a.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(d.g.size()));
}

void BM_gradient_serial(benchmark::State& st) {
    Fields d(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        serial::gradient(d.g, d.f.data(), d.a.data(), d.b.data());
        benchmark::DoNotOptimize(d.a.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(d.g.size()));
}

void BM_div_c_grad_omp(benchmark::State& st) {
    Fields d(static_cast<int>(st.range(0)));
    threads(st);
    for (auto _ : st) {
        kernels::div_c_grad(d.g, d.c.data(), d.f.data(), d.a.data());
        benchmark::DoNotOptimize(d.a.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(d.g.size()));
}

void BM_div_c_grad_serial(benchmark::State& st) {
    Fields d(static_cast<int>(st.range(0)));
    for (auto _ : st) {
        serial::div_c_grad(d.g, d.c.data(), d.f.data(), d.a.data());
        benchmark::DoNotOptimize(d.a.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(d.g.size()));
}

void BM_integrate_omp(benchmark::State& st) {
    Fields d(static_cast<int>(st.range(0)));
    threads(st);
    for (auto _ : st) benchmark::DoNotOptimize(kernels::integrate(d.g, d.f.data()));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(d.g.size()));
}

void BM_integrate_serial(benchmark::State& st) {
    Fields d(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(serial::integrate(d.g, d.f.data()));
    st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(d.g.size()));
}

void omp_args(benchmark::internal::Benchmark* b) {
    for (int n : {64, 256, 1024})
        for (int t : {1, 2, 4}) b->Args({n, t});
}

}  // namespace

BENCHMARK(BM_gradient_serial)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_gradient_omp)->Apply(omp_args);
BENCHMARK(BM_div_c_grad_serial)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_div_c_grad_omp)->Apply(omp_args);
BENCHMARK(BM_integrate_serial)->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_integrate_omp)->Apply(omp_args);

BENCHMARK_MAIN();
