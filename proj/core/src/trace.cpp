#include "edgebatch/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "edgebatch/errors.hpp"

namespace edgebatch {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, int line) {
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty()) {
        throw ParseError(fmt::format("'{}' is not a number", text), line);
    }
    if (!std::isfinite(value)) throw ParseError(fmt::format("'{}' is not finite", text), line);
    return value;
}

void require_non_negative(double rate, const char* what) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw DomainError(fmt::format("{} must be >= 0", what));
}

}  // namespace

std::string_view to_string(TraceMode mode) noexcept { return mode == TraceMode::rate ? "rate" : "count"; }

TraceMode parse_trace_mode(std::string_view text) {
    if (text == "rate") return TraceMode::rate;
    if (text == "count") return TraceMode::count;
    throw ParseError(fmt::format("unknown trace mode '{}' (expected rate or count)", text), 0);
}

TraceFile TraceFile::parse(std::string_view text, TraceMode mode) {
    TraceFile file;
    file.mode = mode;
    bool header_seen = false;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "timestamp_s,value") {
                throw ParseError("expected header 'timestamp_s,value'", line_no);
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError("expected two comma-separated fields", line_no);
        }
        TraceRow row{parse_number(line.substr(0, comma), line_no), parse_number(line.substr(comma + 1), line_no)};
        if (row.timestamp_s < 0.0) throw ParseError("negative timestamp", line_no);
        if (row.value < 0.0) throw ParseError("negative value", line_no);
        if (!file.rows.empty() && row.timestamp_s <= file.rows.back().timestamp_s) {
            throw ParseError("timestamps must be strictly increasing", line_no);
        }
        file.rows.push_back(row);
    }
    if (!header_seen) throw ParseError("trace file is empty", 0);
    if (file.rows.empty()) throw ParseError("trace file has no data rows", line_no);
    if (mode == TraceMode::count && file.rows.size() < 2) {
        throw ParseError("count-mode trace needs at least two rows", line_no);
    }
    return file;
}

TraceFile TraceFile::load(const std::filesystem::path& path, TraceMode mode) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trace file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), mode);
}

std::string TraceFile::to_csv() const {
    std::string out = "timestamp_s,value\n";
    for (const auto& row : rows) out += fmt::format("{},{}\n", row.timestamp_s, row.value);
    return out;
}

RateFunction RateFunction::constant(double rate) {
    require_non_negative(rate, "constant rate");
    return RateFunction(Constant{rate});
}

RateFunction RateFunction::step(double rate_before, double rate_after, Millis t_switch) {
    require_non_negative(rate_before, "step rate_before");
    require_non_negative(rate_after, "step rate_after");
    if (t_switch < Millis{0}) throw DomainError("step switch time must be >= 0");
    return RateFunction(Step{rate_before, rate_after, static_cast<double>(t_switch.count())});
}

RateFunction RateFunction::sinusoid(double base, double amplitude, Millis period) {
    require_non_negative(amplitude, "sinusoid amplitude");
    if (!(base >= amplitude)) throw DomainError("sinusoid would go negative: base must be >= amplitude");
    if (period <= Millis{0}) throw DomainError("sinusoid period must be > 0");
    return RateFunction(Sinusoid{base, amplitude, static_cast<double>(period.count())});
}

RateFunction RateFunction::from_csv(const TraceFile& file, double time_scale, double rate_scale) {
    if (!(time_scale > 0.0) || !(rate_scale > 0.0)) throw DomainError("trace scales must be > 0");
    if (file.rows.empty()) throw DomainError("trace has no rows");

    Piecewise pw;
    pw.linear = file.mode == TraceMode::rate;
    const auto to_ms = [&](double seconds) { return seconds * 1000.0 * time_scale; };
    for (const auto& row : file.rows) pw.knots_ms.push_back(to_ms(row.timestamp_s));

    if (pw.linear) {
        for (const auto& row : file.rows) pw.rates.push_back(row.value * rate_scale);
        pw.end_ms = pw.knots_ms.back();
    } else {
        // Each row's count covers [t_i, t_{i+1}); the last row reuses the
        // preceding spacing.
        const std::size_t n = file.rows.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double span_s = i + 1 < n ? file.rows[i + 1].timestamp_s - file.rows[i].timestamp_s
                                            : file.rows[i].timestamp_s - file.rows[i - 1].timestamp_s;
            pw.rates.push_back(file.rows[i].value / span_s * rate_scale);
        }
        const double last_span = pw.knots_ms[n - 1] - pw.knots_ms[n - 2];
        pw.end_ms = pw.knots_ms.back() + last_span;
    }

    pw.cum.assign(pw.knots_ms.size(), 0.0);
    for (std::size_t i = 1; i < pw.knots_ms.size(); ++i) {
        const double dt_s = (pw.knots_ms[i] - pw.knots_ms[i - 1]) / 1000.0;
        const double area = pw.linear ? 0.5 * (pw.rates[i - 1] + pw.rates[i]) * dt_s : pw.rates[i - 1] * dt_s;
        pw.cum[i] = pw.cum[i - 1] + area;
    }
    return RateFunction(std::move(pw));
}

RateFunction::Kind RateFunction::kind() const noexcept {
    switch (impl_.index()) {
        case 0: return Kind::constant;
        case 1: return Kind::step;
        case 2: return Kind::sinusoid;
        default: return Kind::csv_trace;
    }
}

std::optional<double> RateFunction::natural_end_ms() const {
    if (const auto* pw = std::get_if<Piecewise>(&impl_)) return pw->end_ms;
    return std::nullopt;
}

double RateFunction::rate_at(double t) const {
    return std::visit(
        [t](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.rate;
            } else if constexpr (std::is_same_v<T, Step>) {
                return t < f.switch_ms ? f.before : f.after;
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                return f.base + f.amplitude * std::sin(2.0 * std::numbers::pi * t / f.period_ms);
            } else {
                const auto& k = f.knots_ms;
                if (t <= k.front()) return f.rates.front();
                // Past the last knot the last rate is held.
                if (t >= k.back()) return f.rates.back();
                const auto i = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), t) - k.begin()) - 1;
                if (!f.linear) return f.rates[i];
                const double w = (t - k[i]) / (k[i + 1] - k[i]);
                return f.rates[i] + w * (f.rates[i + 1] - f.rates[i]);
            }
        },
        impl_);
}

double RateFunction::cumulative(double t) const {
    if (t <= 0.0) return 0.0;
    return std::visit(
        [t](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, Constant>) {
                return f.rate * t / 1000.0;
            } else if constexpr (std::is_same_v<T, Step>) {
                if (t <= f.switch_ms) return f.before * t / 1000.0;
                return (f.before * f.switch_ms + f.after * (t - f.switch_ms)) / 1000.0;
            } else if constexpr (std::is_same_v<T, Sinusoid>) {
                const double w = 2.0 * std::numbers::pi / f.period_ms;
                return (f.base * t + f.amplitude * (1.0 - std::cos(w * t)) / w) / 1000.0;
            } else {
                // Area from the trace origin; time before the first knot holds
                // the first rate.
                const auto& k = f.knots_ms;
                const double lead = std::min(t, std::max(0.0, k.front()));
                double area = f.rates.front() * lead / 1000.0;
                if (t <= k.front()) return area;
                if (t >= k.back()) return area + f.cum.back() + f.rates.back() * (t - k.back()) / 1000.0;
                const auto i = static_cast<std::size_t>(std::upper_bound(k.begin(), k.end(), t) - k.begin()) - 1;
                const double dt_s = (t - k[i]) / 1000.0;
                double partial = f.rates[i] * dt_s;
                if (f.linear) {
                    const double r_t = f.rates[i] + (t - k[i]) / (k[i + 1] - k[i]) * (f.rates[i + 1] - f.rates[i]);
                    partial = 0.5 * (f.rates[i] + r_t) * dt_s;
                }
                return area + f.cum[i] + partial;
            }
        },
        impl_);
}

}  // namespace edgebatch
