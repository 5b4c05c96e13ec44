#pragma once

#include <filesystem>
#include <string>

#include "edgebatch/metrics.hpp"
#include "edgebatch/summary.hpp"

namespace edgebatch {

// Column order of metrics.csv.
inline constexpr const char* kMetricsHeader =
    "time_ms,batch_id,interval_ms,records,blocks,sched_delay_ms,proc_delay_ms,total_delay_ms,eta,"
    "workload_S,rate_measured,rate_predicted,C,D,fuzzy_level";

std::string metrics_csv(const MetricsLog& log);
std::string summary_json(const SummaryReport& summary, const std::string& run_name);

// Writes metrics.csv, summary.json and the per-series plot files
// (series_interval.csv, series_workload.csv, series_delay.csv,
// series_rate.csv) into `dir`, creating it when missing. IoError on failure.
void write_metrics(const MetricsLog& log, const SummaryReport& summary, const std::string& run_name,
                   const std::filesystem::path& dir);

}  // namespace edgebatch
