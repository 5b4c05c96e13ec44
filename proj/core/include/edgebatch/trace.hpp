#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "edgebatch/time.hpp"

namespace edgebatch {

// How the value column of a trace file is read.
//   rate:  records per second at the row timestamp, linearly interpolated
//   count: records during [this row, next row), spread uniformly
enum class TraceMode { rate, count };

std::string_view to_string(TraceMode mode) noexcept;
TraceMode parse_trace_mode(std::string_view text);

struct TraceRow {
    double timestamp_s = 0.0;
    double value = 0.0;
};

// CSV with a `timestamp_s,value` header. Blank lines and lines starting with
// '#' are skipped. Timestamps must be strictly increasing and values >= 0.
struct TraceFile {
    std::vector<TraceRow> rows;
    TraceMode mode = TraceMode::rate;

    static TraceFile parse(std::string_view text, TraceMode mode);
    static TraceFile load(const std::filesystem::path& file, TraceMode mode);
    std::string to_csv() const;
};

// Input data rate (records per second) as a function of simulated time.
// Every generator is immutable and has an analytic cumulative integral.
class RateFunction {
public:
    enum class Kind { constant, step, sinusoid, csv_trace };

    static RateFunction constant(double rate);
    static RateFunction step(double rate_before, double rate_after, Millis t_switch);
    static RateFunction sinusoid(double base, double amplitude, Millis period);
    // Joint scaling: simulated time = trace time * time_scale, simulated
    // rate = trace rate * rate_scale. rate_scale = 1 / time_scale keeps the
    // total record count unchanged.
    static RateFunction from_csv(const TraceFile& file, double time_scale, double rate_scale);

    Kind kind() const noexcept;

    double rate_at(double t_ms) const;
    double rate_at(Millis t) const { return rate_at(static_cast<double>(t.count())); }

    // Records arriving in [0, t_ms]. Negative t gives 0.
    double cumulative(double t_ms) const;
    double integral(double t0_ms, double t1_ms) const { return cumulative(t1_ms) - cumulative(t0_ms); }

    // For traces: end of the last row's span in simulated ms.
    std::optional<double> natural_end_ms() const;

private:
    struct Constant {
        double rate;
    };
    struct Step {
        double before;
        double after;
        double switch_ms;
    };
    struct Sinusoid {
        double base;
        double amplitude;
        double period_ms;
    };
    struct Piecewise {
        bool linear;
        std::vector<double> knots_ms;    // strictly increasing
        std::vector<double> rates;       // rate at knot (linear) or on [knot, next) (constant)
        std::vector<double> cum;         // records in [knots_ms[0], knots_ms[i]]
        double end_ms;
    };
    using Impl = std::variant<Constant, Step, Sinusoid, Piecewise>;

    explicit RateFunction(Impl impl) : impl_(std::move(impl)) {}

    Impl impl_;
};

}  // namespace edgebatch
