#include "edgebatch/report.hpp"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "edgebatch/errors.hpp"

namespace edgebatch {

namespace {

// Doubles are written in shortest round-trip form so that anything reading
// the CSV back sees bit-identical values.
template <typename T>
std::string cell(const std::optional<T>& v) {
    return v ? fmt::format("{}", *v) : std::string{};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

template <typename T>
nlohmann::ordered_json or_null(const std::optional<T>& v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json or_null(const std::optional<Millis>& v) {
    return v ? nlohmann::ordered_json(v->count()) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string metrics_csv(const MetricsLog& log) {
    std::string out = kMetricsHeader;
    out += '\n';
    for (const auto& row : log.rows) {
        if (const auto* b = std::get_if<BatchRow>(&row)) {
            const auto& s = b->stats;
            out += fmt::format("{},{},{},{},{},{},{},{},{},,,,,,\n", s.completed_at.count(), s.batch_id,
                               s.interval_used.count(), s.record_count, s.block_count, s.scheduling_delay.count(),
                               s.processing_delay.count(), s.total_delay.count(), b->eta);
        } else {
            const auto& t = std::get<TickRow>(row);
            out += fmt::format("{},,{},,,,,,,{},{},{},{},{},{}\n", t.time.count(), t.interval.count(), t.workload,
                               cell(t.rate_measured), cell(t.rate_predicted), cell(t.traffic_change),
                               cell(t.workload_deviation), cell(t.level));
        }
    }
    return out;
}

std::string summary_json(const SummaryReport& s, const std::string& run_name) {
    nlohmann::ordered_json j;
    j["run"] = {{"name", run_name},
                {"resample_interval_ms", s.resample_interval.count()},
                {"block_interval_ms", s.block_interval.count()},
                {"control_start_ms", s.control_start.count()}};
    j["prediction_error_mean"] = or_null(s.prediction_error_mean);
    j["prediction_error_max"] = or_null(s.prediction_error_max);
    j["prediction_samples"] = s.prediction_samples;
    j["convergence_time_ms"] = or_null(s.convergence_time);
    j["converged_interval_ms"] = or_null(s.converged_interval);
    j["steady_workload_mean"] = or_null(s.steady_workload_mean);
    j["steady_workload_max"] = or_null(s.steady_workload_max);
    j["total_delay_mean_ms"] = or_null(s.total_delay_mean_ms);
    j["total_delay_max_ms"] = or_null(s.total_delay_max_ms);
    j["overload_episodes"] = s.overload_episodes;
    j["overload_recovery_max_ms"] = or_null(s.overload_recovery_max);
    j["overload_unrecovered"] = s.overload_unrecovered;
    j["records_processed"] = s.records_processed;
    j["batches"] = s.batches;
    j["ticks"] = s.ticks;
    j["workload_mean"] = s.workload_mean;
    j["workload_max"] = s.workload_max;
    j["mean_abs_interval_change_ms"] = s.mean_abs_interval_change_ms;
    return j.dump(2) + "\n";
}

void write_metrics(const MetricsLog& log, const SummaryReport& summary, const std::string& run_name,
                   const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());

    write_file(dir / "metrics.csv", metrics_csv(log));
    write_file(dir / "summary.json", summary_json(summary, run_name));

    std::string interval = "time_ms,interval_ms\n";
    std::string workload = "time_ms,workload_S\n";
    std::string rate = "time_ms,rate_measured,rate_predicted\n";
    std::string delay = "time_ms,batch_id,proc_delay_ms,total_delay_ms\n";
    for (const auto& row : log.rows) {
        if (const auto* b = std::get_if<BatchRow>(&row)) {
            const auto& s = b->stats;
            delay += fmt::format("{},{},{},{}\n", s.completed_at.count(), s.batch_id, s.processing_delay.count(),
                                 s.total_delay.count());
        } else {
            const auto& t = std::get<TickRow>(row);
            interval += fmt::format("{},{}\n", t.time.count(), t.interval.count());
            workload += fmt::format("{},{}\n", t.time.count(), t.workload);
            rate += fmt::format("{},{},{}\n", t.time.count(), cell(t.rate_measured), cell(t.rate_predicted));
        }
    }
    write_file(dir / "series_interval.csv", interval);
    write_file(dir / "series_workload.csv", workload);
    write_file(dir / "series_rate.csv", rate);
    write_file(dir / "series_delay.csv", delay);
}

}  // namespace edgebatch
