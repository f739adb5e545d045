#include <benchmark/benchmark.h>

#include "eov/queueing.hpp"
#include "eov/scenario.hpp"
#include "eov/sim.hpp"

namespace {

eov::ScenarioConfig bench_scenario() {
    eov::ScenarioConfig sc;
    sc.workload.clients = 4;
    sc.workload.per_client_rate = 125.0;
    sc.workload.tx_bits = 3.0 * eov::kBitsPerKb;
    const eov::LinkParams link{0.010, 1e10, 1, false};
    sc.execute.cores = 2;
    sc.execute.core_service_rate = 1000.0;
    sc.execute.link = link;
    sc.order.osn_count = 3;
    sc.order.sequencing_rate = 20000.0;
    sc.order.batch_size = 20;
    sc.order.batch_timeout_s = 1.0;
    sc.order.link_client_to_leader = link;
    sc.order.link_leader_to_followers = link;
    sc.validate.disk = {eov::DiskParams::Kind::SSD, 2000.0, 0.0, 1.0};
    sc.validate.link = link;
    sc.refresh_derived();
    return sc;
}

void BM_ErlangCWait(benchmark::State& state) {
    const int servers = static_cast<int>(state.range(0));
    const eov::QueueLoad load{0.8 * servers * 100.0, 100.0, servers};
    for (auto _ : state)
        benchmark::DoNotOptimize(eov::erlang_c_wait(load));
}
BENCHMARK(BM_ErlangCWait)->Arg(1)->Arg(4)->Arg(16)->Arg(64);

void BM_MdcWait(benchmark::State& state) {
    const int servers = static_cast<int>(state.range(0));
    const eov::QueueLoad load{0.8 * servers * 100.0, 100.0, servers};
    for (auto _ : state)
        benchmark::DoNotOptimize(eov::mdc_wait(load));
}
BENCHMARK(BM_MdcWait)->Arg(1)->Arg(8);

void BM_PipelinePredict(benchmark::State& state) {
    const auto sc = bench_scenario();
    for (auto _ : state)
        benchmark::DoNotOptimize(eov::pipeline_predict(sc));
}
BENCHMARK(BM_PipelinePredict);

void BM_RunSimulation(benchmark::State& state) {
    eov::SimConfig cfg;
    cfg.scenario = bench_scenario();
    cfg.seed = 1;
    cfg.horizon = eov::Horizon::tx_count(state.range(0));
    for (auto _ : state) {
        auto result = eov::run_simulation(cfg);
        benchmark::DoNotOptimize(result.committed);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunSimulation)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
