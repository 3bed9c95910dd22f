#include <benchmark/benchmark.h>

#include "mrp/executor.hpp"
#include "mrp/fixtures.hpp"
#include "mrp/greedy.hpp"
#include "mrp/oneshot.hpp"
#include "mrp/smt.hpp"
#include "mrp/workspace.hpp"

using namespace mrp;

namespace {

const Scenario& fixture(int which) {
    static const Scenario all[] = {tiny_fixture(), warehouse_fixture(), artificial_floor_fixture()};
    return all[which];
}

void BM_Greedy(benchmark::State& st) {
    const auto& s = fixture(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(plan_greedy(s));
}
BENCHMARK(BM_Greedy)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_EncodeOneShot(benchmark::State& st) {
    const auto& s = fixture(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(encode_oneshot(s));
}
BENCHMARK(BM_EncodeOneShot)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EmitSmtlib(benchmark::State& st) {
    const auto p = encode_oneshot(fixture(static_cast<int>(st.range(0))));
    std::size_t bytes = 0;
    for (auto _ : st) {
        auto text = smt::emit_smtlib(p);
        bytes += text.size();
        benchmark::DoNotOptimize(text);
    }
    st.SetBytesProcessed(static_cast<std::int64_t>(bytes));
}
BENCHMARK(BM_EmitSmtlib)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Validate(benchmark::State& st) {
    const auto& s = fixture(static_cast<int>(st.range(0)));
    const auto b = plan_greedy(s);
    for (auto _ : st) benchmark::DoNotOptimize(validate(b, s));
}
BENCHMARK(BM_Validate)->Arg(0)->Arg(1)->Arg(2);

void BM_TravelTime(benchmark::State& st) {
    const auto& s = fixture(1);
    const auto cells = s.workspace.free_cells();
    const auto steps = four_connected_steps();
    std::size_t k = 0;
    for (auto _ : st) {
        const Cell to[] = {cells[(k * 7 + 3) % cells.size()]};
        benchmark::DoNotOptimize(shortest_travel_time(s.workspace, cells[k % cells.size()], to, steps));
        ++k;
    }
}
BENCHMARK(BM_TravelTime);

void BM_SyncSimulation(benchmark::State& st) {
    const auto& s = fixture(1);
    const auto b = plan_greedy(s);
    DelayModel dm;
    dm.jitter_max = 3.0;
    dm.seed = 1;
    for (auto _ : st) benchmark::DoNotOptimize(simulate_with_delays(b, s, dm, 10));
}
BENCHMARK(BM_SyncSimulation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
