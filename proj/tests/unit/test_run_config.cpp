#include <algorithm>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "edgebatch/errors.hpp"
#include "edgebatch/run_config.hpp"

using namespace edgebatch;
using namespace std::chrono_literals;

namespace {

int parse_error_line(const std::string& text) {
    try {
        RunConfig::parse(text);
    } catch (const ParseError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("all five presets ship and finalize") {
    auto names = preset_names();
    std::sort(names.begin(), names.end());
    CHECK(names == std::vector<std::string>{"day", "day-vanilla", "exp1", "exp2", "exp3"});
    for (const auto& n : names) {
        auto cfg = load_preset(n);
        INFO(n);
        CHECK(cfg.name == n);
        CHECK_NOTHROW(cfg.finalize());
    }
    CHECK_THROWS_AS(load_preset("exp4"), ParseError);
}

TEST_CASE("day presets share everything but the mode and interval") {
    auto a = load_preset("day");
    auto v = load_preset("day-vanilla");
    a.finalize();
    v.finalize();
    CHECK(a.engine.mode == EngineMode::adaptive);
    CHECK(v.engine.mode == EngineMode::vanilla);
    CHECK(a.engine.duration == v.engine.duration);
    CHECK(a.engine.duration == 730000ms);
    CHECK(a.trace.time_scale == doctest::Approx(1.0 / 60.0));
    CHECK(a.engine.cost_model.per_record_ms == v.engine.cost_model.per_record_ms);
    CHECK(a.engine.cost_model.fixed_overhead_ms == v.engine.cost_model.fixed_overhead_ms);
}

TEST_CASE("text form round-trips") {
    for (const auto& n : preset_names()) {
        auto cfg = load_preset(n);
        cfg.finalize();
        const auto text = cfg.to_text();
        auto again = RunConfig::parse(text);
        again.finalize();
        CHECK(again.to_text() == text);
    }
}

TEST_CASE("values and comments") {
    const auto cfg = RunConfig::parse(
        "# header\n"
        "run.name = demo   # trailing comment\n"
        "engine.mode = vanilla\n"
        "engine.seed = 42\n"
        "controller.prediction_enabled = off\n"
        "trace.kind = step\n"
        "trace.rate_before = 10\n"
        "trace.rate_after = 2.5e1\n"
        "trace.switch_ms = 5000\n");
    CHECK(cfg.name == "demo");
    CHECK(cfg.engine.mode == EngineMode::vanilla);
    CHECK(cfg.engine.seed == 42);
    CHECK_FALSE(cfg.engine.controller.prediction_enabled);
    CHECK(cfg.trace.rate_after == 25.0);
    CHECK(cfg.trace.switch_at == 5000ms);
}

TEST_CASE("scales accept ratios") {
    const auto cfg = RunConfig::parse("trace.time_scale = 1 / 60\ntrace.rate_scale = 120/2\n");
    CHECK(cfg.trace.time_scale == doctest::Approx(1.0 / 60.0));
    CHECK(cfg.trace.rate_scale == 60.0);
    CHECK(parse_error_line("trace.time_scale = 1/0\n") == 1);
    CHECK(parse_error_line("trace.time_scale = a/6\n") == 1);
}

TEST_CASE("malformed lines report their line number") {
    CHECK(parse_error_line("run.name = x\nengine.nope = 1\n") == 2);
    CHECK(parse_error_line("\n\nengine.seed = -1\n") == 3);
    CHECK(parse_error_line("engine.block_interval_ms = 2.5\n") == 1);
    CHECK(parse_error_line("engine.mode = turbo\n") == 1);
    CHECK(parse_error_line("trace.kind = square\n") == 1);
    CHECK(parse_error_line("controller.prediction_enabled = maybe\n") == 1);
    CHECK(parse_error_line("just some words\n") == 1);
    CHECK(parse_error_line("run.name =\n") == 1);
    CHECK(parse_error_line("trace.mode = lines\n") == 1);
    CHECK(parse_error_line("monitor.smoothing_coefficient = nan\n") == 1);
}

TEST_CASE("invariant violations surface at finalize") {
    auto cfg = RunConfig::parse("engine.initial_batch_interval_ms = 1300\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg = RunConfig::parse("controller.min_interval_ms = 5000\ncontroller.max_interval_ms = 4000\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg = RunConfig::parse("monitor.smoothing_coefficient = 1.5\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg = RunConfig::parse("engine.duration_ms = auto\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg = RunConfig::parse("trace.kind = sinusoid\ntrace.base = 1\ntrace.amplitude = 2\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
    cfg = RunConfig::parse("trace.kind = csv\n");
    CHECK_THROWS_AS(cfg.finalize(), ConfigError);
}

TEST_CASE("csv traces default to the trace length and resolve relative paths") {
    const auto dir = std::filesystem::temp_directory_path() / "edgebatch_run_config_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "t.csv") << "timestamp_s,value\n0,100\n10,200\n";
    std::ofstream(dir / "r.conf") << "trace.kind = csv\ntrace.file = t.csv\ntrace.mode = rate\n";
    auto cfg = RunConfig::load(dir / "r.conf");
    CHECK(cfg.name == "r");
    CHECK(cfg.duration_from_trace);
    cfg.finalize();
    CHECK(cfg.engine.duration == 10000ms);

    std::ofstream(dir / "bad.conf") << "controller.rules_file = missing.csv\n";
    CHECK_THROWS_AS(RunConfig::load(dir / "bad.conf"), IoError);
    CHECK_THROWS_AS(RunConfig::load(dir / "absent.conf"), IoError);
    std::filesystem::remove_all(dir);
}
