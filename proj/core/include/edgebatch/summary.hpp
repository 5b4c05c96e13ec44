#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edgebatch/metrics.hpp"
#include "edgebatch/time.hpp"

namespace edgebatch {

// Number of consecutive control ticks the interval must hold within one
// block for the run to count as converged.
inline constexpr int kConvergenceTicks = 20;

// Run statistics. Everything here is derived from the batch and tick rows
// plus the three run parameters recorded in MetricsLog, so the numbers can be
// recomputed from metrics.csv.
struct SummaryReport {
    // One-step rate forecast error, one sample per pair of consecutive
    // windows observed at control ticks.
    std::optional<double> prediction_error_mean;
    std::optional<double> prediction_error_max;
    std::int64_t prediction_samples = 0;

    // Relative to control start; empty when the interval never settled.
    std::optional<Millis> convergence_time;
    std::optional<Millis> converged_interval;
    // Workload over the ticks after the converging one to the end of the run.
    std::optional<double> steady_workload_mean;
    std::optional<double> steady_workload_max;

    std::optional<double> total_delay_mean_ms;
    std::optional<double> total_delay_max_ms;

    // Episodes that start at a tick with S > 1 and end at the first tick
    // with S < 1.
    std::int64_t overload_episodes = 0;
    std::optional<Millis> overload_recovery_max;
    bool overload_unrecovered = false;

    std::int64_t records_processed = 0;
    std::int64_t batches = 0;
    std::int64_t ticks = 0;
    double workload_mean = 0.0;              // over all ticks
    double workload_max = 0.0;
    double mean_abs_interval_change_ms = 0;  // between consecutive ticks

    Millis resample_interval{0};
    Millis block_interval{0};
    Millis control_start{0};
};

SummaryReport summarize(const MetricsLog& log);

// Earliest tick at or after `from` that starts kConvergenceTicks ticks whose
// interval stays within one block of its own. Returned relative to `from`.
std::optional<Millis> convergence_time(const std::vector<TickRow>& ticks, Millis from, Millis block_interval);

// One relative error per pair of consecutive windows observed at ticks.
std::vector<double> prediction_errors(const std::vector<TickRow>& ticks, Millis resample_interval);

}  // namespace edgebatch
