#include <benchmark/benchmark.h>

#include <omp.h>

#include "pwcanard/continuation.hpp"

using namespace pwc;

namespace {

void BM_branch_serial(benchmark::State& st) {
    const BranchOptions opt{.points = static_cast<int>(st.range(0))};
    for (auto _ : st) benchmark::DoNotOptimize(trace_branch_serial(2.5, 0.1, -1, opt));
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_branch_parallel(benchmark::State& st) {
    const BranchOptions opt{.points = static_cast<int>(st.range(0))};
    for (auto _ : st) benchmark::DoNotOptimize(trace_branch(2.5, 0.1, -1, opt));
    st.SetItemsProcessed(st.iterations() * st.range(0));
    st.counters["threads"] = omp_get_max_threads();
}

} // namespace

BENCHMARK(BM_branch_serial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_branch_parallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
