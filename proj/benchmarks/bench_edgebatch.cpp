#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "edgebatch/engine.hpp"
#include "edgebatch/fuzzy_controller.hpp"
#include "edgebatch/grey_model.hpp"
#include "edgebatch/run_config.hpp"
#include "edgebatch/traffic_tracker.hpp"

using namespace edgebatch;
using namespace std::chrono_literals;

static void BM_GreyFitPredict(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> value(500.0, 1500.0);
    std::vector<double> x(static_cast<std::size_t>(state.range(0)));
    for (double& v : x) v = value(rng);
    for (auto _ : state) benchmark::DoNotOptimize(grey::fit_predict(x, 1));
}
BENCHMARK(BM_GreyFitPredict)->Arg(5)->Arg(8)->Arg(64);

static void BM_FuzzyInfer(benchmark::State& state) {
    const auto rules = fuzzy::RuleTable::expert();
    double c = -0.2;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fuzzy::infer(c, -c * 0.5, rules));
        c = c > 0.2 ? -0.2 : c + 0.0137;
    }
}
BENCHMARK(BM_FuzzyInfer);

static void BM_TrackerReport(benchmark::State& state) {
    TrackerConfig cfg;
    cfg.resample_interval = 10000ms;
    TrafficTracker t(cfg);
    t.start();
    Millis now{0};
    for (auto _ : state) {
        t.report_info({now, 200});
        now += 200ms;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrackerReport);

static void BM_Preset(benchmark::State& state, const char* name) {
    auto cfg = load_preset(name);
    cfg.finalize();
    const auto trace = cfg.trace.build();
    for (auto _ : state) benchmark::DoNotOptimize(run(cfg.engine, trace));
    state.counters["sim_s_per_s"] = benchmark::Counter(static_cast<double>(cfg.engine.duration.count()) / 1000.0,
                                                       benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK_CAPTURE(BM_Preset, exp1, "exp1")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Preset, exp3, "exp3")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Preset, day, "day")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
