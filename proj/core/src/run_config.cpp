#include "edgebatch/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "edgebatch/errors.hpp"
#include "edgebatch/resources.hpp"

namespace edgebatch {

namespace {

constexpr std::string_view kBuiltinPrefix = "builtin:";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::int64_t parse_int(std::string_view v, int line) {
    std::int64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ParseError(fmt::format("'{}' is not an integer", v), line);
    }
    return out;
}

double parse_real(std::string_view v, int line) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        throw ParseError(fmt::format("'{}' is not a number", v), line);
    }
    return out;
}

// Accepts a plain number or a ratio such as 1/60.
double parse_scale(std::string_view v, int line) {
    const auto slash = v.find('/');
    if (slash == std::string_view::npos) return parse_real(v, line);
    const double den = parse_real(trim(v.substr(slash + 1)), line);
    if (den == 0.0) throw ParseError(fmt::format("'{}' divides by zero", v), line);
    return parse_real(trim(v.substr(0, slash)), line) / den;
}

bool parse_bool(std::string_view v, int line) {
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ParseError(fmt::format("'{}' is not a boolean", v), line);
}

Millis parse_ms(std::string_view v, int line) { return Millis{parse_int(v, line)}; }

RateFunction::Kind parse_kind(std::string_view v, int line) {
    if (v == "constant") return RateFunction::Kind::constant;
    if (v == "step") return RateFunction::Kind::step;
    if (v == "sinusoid") return RateFunction::Kind::sinusoid;
    if (v == "csv") return RateFunction::Kind::csv_trace;
    throw ParseError(fmt::format("unknown trace kind '{}'", v), line);
}

std::string_view kind_name(RateFunction::Kind k) {
    switch (k) {
        case RateFunction::Kind::constant: return "constant";
        case RateFunction::Kind::step: return "step";
        case RateFunction::Kind::sinusoid: return "sinusoid";
        case RateFunction::Kind::csv_trace: return "csv";
    }
    return "constant";
}

struct ParseContext {
    RunConfig& cfg;
    const std::filesystem::path& base_dir;
    bool duration_set = false;
};

using Setter = std::function<void(ParseContext&, std::string_view, int)>;

const std::map<std::string, Setter, std::less<>>& setters() {
    static const std::map<std::string, Setter, std::less<>> table = {
        {"run.name", [](ParseContext& c, std::string_view v, int) { c.cfg.name = std::string(v); }},
        {"engine.mode",
         [](ParseContext& c, std::string_view v, int line) {
             if (v == "adaptive") {
                 c.cfg.engine.mode = EngineMode::adaptive;
             } else if (v == "vanilla") {
                 c.cfg.engine.mode = EngineMode::vanilla;
             } else {
                 throw ParseError(fmt::format("unknown engine mode '{}'", v), line);
             }
         }},
        {"engine.block_interval_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.block_interval = parse_ms(v, l); }},
        {"engine.initial_batch_interval_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.initial_batch_interval = parse_ms(v, l); }},
        {"engine.control_start_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.control_start = parse_ms(v, l); }},
        {"engine.duration_ms",
         [](ParseContext& c, std::string_view v, int l) {
             c.duration_set = true;
             if (v == "auto") {
                 c.cfg.duration_from_trace = true;
             } else {
                 c.cfg.duration_from_trace = false;
                 c.cfg.engine.duration = parse_ms(v, l);
             }
         }},
        {"engine.seed",
         [](ParseContext& c, std::string_view v, int l) {
             const auto seed = parse_int(v, l);
             if (seed < 0) throw ParseError("seed must be >= 0", l);
             c.cfg.engine.seed = static_cast<std::uint64_t>(seed);
         }},
        {"engine.jitter", [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.jitter = parse_real(v, l); }},
        {"controller.min_interval_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.controller.min_interval = parse_ms(v, l); }},
        {"controller.max_interval_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.controller.max_interval = parse_ms(v, l); }},
        {"controller.control_period_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.controller.control_period = parse_ms(v, l); }},
        {"controller.prediction_enabled",
         [](ParseContext& c, std::string_view v, int l) {
             c.cfg.engine.controller.prediction_enabled = parse_bool(v, l);
         }},
        {"controller.blocks_per_level",
         [](ParseContext& c, std::string_view v, int l) {
             c.cfg.engine.controller.blocks_per_level = static_cast<int>(parse_int(v, l));
         }},
        {"controller.rules_file",
         [](ParseContext& c, std::string_view v, int) {
             c.cfg.rules_file = (c.base_dir / std::string(v)).string();
             c.cfg.engine.rules = fuzzy::RuleTable::load(c.cfg.rules_file);
         }},
        {"monitor.smoothing_coefficient",
         [](ParseContext& c, std::string_view v, int l) {
             c.cfg.engine.monitor.smoothing_coefficient = parse_real(v, l);
         }},
        {"monitor.initial_estimate",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.monitor.initial_estimate = parse_real(v, l); }},
        {"tracker.resample_interval_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.tracker.resample_interval = parse_ms(v, l); }},
        {"tracker.train_num",
         [](ParseContext& c, std::string_view v, int l) {
             c.cfg.engine.tracker.train_num = static_cast<int>(parse_int(v, l));
         }},
        {"tracker.retain_windows",
         [](ParseContext& c, std::string_view v, int l) {
             c.cfg.engine.tracker.retain_windows = static_cast<int>(parse_int(v, l));
         }},
        {"tracker.retrain_every",
         [](ParseContext& c, std::string_view v, int l) {
             c.cfg.engine.tracker.retrain_every = static_cast<int>(parse_int(v, l));
         }},
        {"cost.fixed_overhead_ms",
         [](ParseContext& c, std::string_view v, int l) {
             c.cfg.engine.cost_model.fixed_overhead_ms = parse_real(v, l);
         }},
        {"cost.per_record_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.cost_model.per_record_ms = parse_real(v, l); }},
        {"cost.per_block_ms",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.engine.cost_model.per_block_ms = parse_real(v, l); }},
        {"trace.kind", [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.kind = parse_kind(v, l); }},
        {"trace.rate", [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.rate = parse_real(v, l); }},
        {"trace.rate_before",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.rate_before = parse_real(v, l); }},
        {"trace.rate_after",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.rate_after = parse_real(v, l); }},
        {"trace.switch_ms", [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.switch_at = parse_ms(v, l); }},
        {"trace.base", [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.base = parse_real(v, l); }},
        {"trace.amplitude",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.amplitude = parse_real(v, l); }},
        {"trace.period_ms", [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.period = parse_ms(v, l); }},
        {"trace.file",
         [](ParseContext& c, std::string_view v, int) {
             if (v.starts_with(kBuiltinPrefix) || c.base_dir.empty()) {
                 c.cfg.trace.file = std::string(v);
             } else {
                 c.cfg.trace.file = (c.base_dir / std::string(v)).string();
             }
         }},
        {"trace.mode",
         [](ParseContext& c, std::string_view v, int l) {
             try {
                 c.cfg.trace.mode = parse_trace_mode(v);
             } catch (const ParseError& e) {
                 throw ParseError(e.what(), l);
             }
         }},
        {"trace.time_scale",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.time_scale = parse_scale(v, l); }},
        {"trace.rate_scale",
         [](ParseContext& c, std::string_view v, int l) { c.cfg.trace.rate_scale = parse_scale(v, l); }},
    };
    return table;
}

}  // namespace

TraceFile TraceSpec::load_file() const {
    if (file.empty()) throw ConfigError("trace.file is required for csv traces");
    if (std::string_view(file).starts_with(kBuiltinPrefix)) {
        const auto name = std::string_view(file).substr(kBuiltinPrefix.size());
        const auto text = resources::find(fmt::format("data/{}", name));
        if (!text) throw ConfigError(fmt::format("no builtin trace '{}'", name));
        return TraceFile::parse(*text, mode);
    }
    return TraceFile::load(file, mode);
}

RateFunction TraceSpec::build() const {
    try {
        switch (kind) {
            case RateFunction::Kind::constant: return RateFunction::constant(rate);
            case RateFunction::Kind::step: return RateFunction::step(rate_before, rate_after, switch_at);
            case RateFunction::Kind::sinusoid: return RateFunction::sinusoid(base, amplitude, period);
            case RateFunction::Kind::csv_trace: return RateFunction::from_csv(load_file(), time_scale, rate_scale);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("trace: ") + e.what());
    }
    throw ConfigError("unknown trace kind");
}

RunConfig RunConfig::parse(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    ParseContext ctx{cfg, base_dir};
    const auto& table = setters();

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected 'section.key = value'", line_no);
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (value.empty()) throw ParseError(fmt::format("missing value for '{}'", key), line_no);
        const auto it = table.find(key);
        if (it == table.end()) throw ParseError(fmt::format("unknown key '{}'", key), line_no);
        it->second(ctx, value, line_no);
    }

    if (!ctx.duration_set && cfg.trace.kind == RateFunction::Kind::csv_trace) cfg.duration_from_trace = true;
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig cfg = parse(buf.str(), file.parent_path());
    if (cfg.name.empty()) cfg.name = file.stem().string();
    return cfg;
}

void RunConfig::finalize() {
    engine.controller.block_interval = engine.block_interval;
    if (duration_from_trace) {
        const auto end = trace.build().natural_end_ms();
        if (!end) throw ConfigError("engine.duration_ms = auto needs a csv trace");
        const auto block = engine.block_interval.count();
        if (block <= 0) throw ConfigError("engine.block_interval_ms must be > 0");
        const auto ms = static_cast<std::int64_t>(std::ceil(*end / static_cast<double>(block))) * block;
        engine.duration = Millis{ms};
    }
    trace.build();
    engine.validate();
}

std::string RunConfig::to_text() const {
    const auto& e = engine;
    std::string out;
    auto line = [&out](std::string_view key, const auto& value) { out += fmt::format("{} = {}\n", key, value); };
    line("run.name", name);
    line("engine.mode", to_string(e.mode));
    line("engine.block_interval_ms", e.block_interval.count());
    line("engine.initial_batch_interval_ms", e.initial_batch_interval.count());
    line("engine.control_start_ms", e.control_start.count());
    line("engine.duration_ms", e.duration.count());
    line("engine.seed", e.seed);
    line("engine.jitter", e.jitter);
    line("controller.min_interval_ms", e.controller.min_interval.count());
    line("controller.max_interval_ms", e.controller.max_interval.count());
    line("controller.control_period_ms", e.controller.control_period.count());
    line("controller.prediction_enabled", e.controller.prediction_enabled ? "true" : "false");
    line("controller.blocks_per_level", e.controller.blocks_per_level);
    if (!rules_file.empty()) line("controller.rules_file", rules_file);
    line("monitor.smoothing_coefficient", e.monitor.smoothing_coefficient);
    line("monitor.initial_estimate", e.monitor.initial_estimate);
    line("tracker.resample_interval_ms", e.tracker.resample_interval.count());
    line("tracker.train_num", e.tracker.train_num);
    line("tracker.retain_windows", e.tracker.retain_windows);
    line("tracker.retrain_every", e.tracker.retrain_every);
    line("cost.fixed_overhead_ms", e.cost_model.fixed_overhead_ms);
    line("cost.per_record_ms", e.cost_model.per_record_ms);
    line("cost.per_block_ms", e.cost_model.per_block_ms);
    line("trace.kind", kind_name(trace.kind));
    switch (trace.kind) {
        case RateFunction::Kind::constant: line("trace.rate", trace.rate); break;
        case RateFunction::Kind::step:
            line("trace.rate_before", trace.rate_before);
            line("trace.rate_after", trace.rate_after);
            line("trace.switch_ms", trace.switch_at.count());
            break;
        case RateFunction::Kind::sinusoid:
            line("trace.base", trace.base);
            line("trace.amplitude", trace.amplitude);
            line("trace.period_ms", trace.period.count());
            break;
        case RateFunction::Kind::csv_trace:
            line("trace.file", trace.file);
            line("trace.mode", to_string(trace.mode));
            line("trace.time_scale", trace.time_scale);
            line("trace.rate_scale", trace.rate_scale);
            break;
    }
    return out;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (auto name : resources::names()) {
        if (name.starts_with("presets/") && name.ends_with(".conf")) {
            out.emplace_back(name.substr(8, name.size() - 8 - 5));
        }
    }
    return out;
}

RunConfig load_preset(std::string_view name) {
    const auto text = resources::find(fmt::format("presets/{}.conf", name));
    if (!text) throw ParseError(fmt::format("unknown preset '{}'", name), 0);
    RunConfig cfg = RunConfig::parse(*text);
    if (cfg.name.empty()) cfg.name = std::string(name);
    return cfg;
}

}  // namespace edgebatch
