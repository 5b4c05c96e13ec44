#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edgebatch/engine.hpp"
#include "edgebatch/trace.hpp"

namespace edgebatch {

// Which rate function a run replays, in the units of the config file.
struct TraceSpec {
    RateFunction::Kind kind = RateFunction::Kind::constant;
    double rate = 0.0;  // constant
    double rate_before = 0.0;
    double rate_after = 0.0;
    Millis switch_at{0};
    double base = 0.0;  // sinusoid
    double amplitude = 0.0;
    Millis period{600000};
    std::string file;  // csv; "builtin:<name>" refers to an embedded resource
    TraceMode mode = TraceMode::rate;
    double time_scale = 1.0;
    double rate_scale = 1.0;

    RateFunction build() const;
    TraceFile load_file() const;
};

// A fully resolved experiment: engine parameters plus the input trace.
//
// The text form is one `section.key = value` per line with `#` comments.
// Sections: engine, controller, monitor, tracker, cost, trace.
struct RunConfig {
    std::string name;
    EngineConfig engine;
    TraceSpec trace;
    std::string rules_file;  // empty: built-in expert rules
    bool duration_from_trace = false;

    // ParseError for unknown keys or malformed values. Relative trace and
    // rule file paths are resolved against base_dir.
    static RunConfig parse(std::string_view text, const std::filesystem::path& base_dir = {});
    static RunConfig load(const std::filesystem::path& file);

    // Resolves derived fields and checks every engine invariant
    // (ConfigError). Safe to call repeatedly.
    void finalize();

    std::string to_text() const;
};

std::vector<std::string> preset_names();
// ParseError for an unknown preset.
RunConfig load_preset(std::string_view name);

}  // namespace edgebatch
