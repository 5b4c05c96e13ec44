// edgebatch: run adaptive micro-batch simulations from config files or
// bundled presets and write metrics for plotting.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "edgebatch/errors.hpp"
#include "edgebatch/report.hpp"
#include "edgebatch/run_config.hpp"
#include "edgebatch/summary.hpp"

namespace fs = std::filesystem;
using namespace edgebatch;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitUsage = 2;

fs::path output_dir(const std::string& explicit_out, const std::string& run_name) {
    if (!explicit_out.empty()) return explicit_out;
    const char* env = std::getenv("EDGEBATCH_OUT");
    const fs::path root = env && *env ? fs::path(env) : fs::path("out");
    return root / run_name;
}

void print_summary(const SummaryReport& s, const fs::path& dir) {
    auto opt = [](const auto& v) { return v ? fmt::format("{:.4g}", static_cast<double>(*v)) : std::string("-"); };
    auto opt_ms = [](const std::optional<Millis>& v) { return v ? fmt::format("{} ms", v->count()) : std::string("-"); };
    fmt::print("batches {}  ticks {}  records {}\n", s.batches, s.ticks, s.records_processed);
    fmt::print("prediction error mean {} max {} ({} samples)\n", opt(s.prediction_error_mean),
               opt(s.prediction_error_max), s.prediction_samples);
    fmt::print("convergence {}  interval {}  steady S mean {} max {}\n", opt_ms(s.convergence_time),
               opt_ms(s.converged_interval), opt(s.steady_workload_mean), opt(s.steady_workload_max));
    fmt::print("total delay mean {} ms max {} ms  S mean {:.4g} max {:.4g}\n", opt(s.total_delay_mean_ms),
               opt(s.total_delay_max_ms), s.workload_mean, s.workload_max);
    fmt::print("written to {}\n", dir.string());
}

int execute(RunConfig cfg, const std::string& out) {
    cfg.finalize();
    const RateFunction trace = cfg.trace.build();
    const MetricsLog log = run(cfg.engine, trace);
    const SummaryReport summary = summarize(log);
    const fs::path dir = output_dir(out, cfg.name);
    try {
        write_metrics(log, summary, cfg.name, dir);
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitConfig;
    }
    print_summary(summary, dir);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Micro-batch stream processing simulator with fuzzy batch-interval control"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging to stderr");

    std::string config_file;
    std::string out;
    auto* run_cmd = app.add_subcommand("run", "Run a simulation described by a config file");
    run_cmd->add_option("--config", config_file, "Config file (section.key = value)")->required();
    run_cmd->add_option("--out", out, "Output directory (default: $EDGEBATCH_OUT/<name> or out/<name>)");

    std::string preset;
    bool disable_prediction = false;
    std::optional<std::uint64_t> seed;
    auto* preset_cmd = app.add_subcommand("preset", "Run a bundled experiment preset");
    preset_cmd->add_option("name", preset, "exp1, exp2, exp3, day or day-vanilla")->required();
    preset_cmd->add_flag("--disable-prediction", disable_prediction, "Force the traffic-change input to zero");
    preset_cmd->add_option("--seed", seed, "Override the preset seed");
    preset_cmd->add_option("--out", out, "Output directory (default: $EDGEBATCH_OUT/<name> or out/<name>)");

    auto* validate_cmd = app.add_subcommand("validate", "Check a config file without running it");
    validate_cmd->add_option("--config", config_file, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

    try {
        if (*run_cmd) return execute(RunConfig::load(config_file), out);
        if (*preset_cmd) {
            RunConfig cfg = load_preset(preset);
            if (disable_prediction) {
                cfg.engine.controller.prediction_enabled = false;
                cfg.name += "-noprediction";
            }
            if (seed) cfg.engine.seed = *seed;
            return execute(std::move(cfg), out);
        }
        RunConfig cfg = RunConfig::load(config_file);
        cfg.finalize();
        fmt::print("{}: ok\n", config_file);
        return kExitOk;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what();
        if (e.line() > 0) std::cerr << " (line " << e.line() << ")";
        std::cerr << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        // Output failures are handled in execute(); what reaches here is an
        // unreadable config, trace or rule file.
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
