#include "edgebatch/workload_monitor.hpp"

#include <cmath>

#include "edgebatch/errors.hpp"

namespace edgebatch {

BatchStats BatchStats::from_times(std::int64_t id, Millis submitted, Millis started, Millis completed,
                                  Millis interval, std::int64_t records, std::int64_t blocks) {
    BatchStats s;
    s.batch_id = id;
    s.submitted_at = submitted;
    s.started_at = started;
    s.completed_at = completed;
    s.processing_delay = completed - started;
    s.scheduling_delay = started - submitted;
    s.total_delay = completed - submitted;
    s.interval_used = interval;
    s.record_count = records;
    s.block_count = blocks;
    return s;
}

double BatchStats::workload() const {
    if (interval_used <= Millis{0}) throw DomainError("batch interval must be > 0");
    if (total_delay <= Millis{0}) throw DomainError("batch total delay must be > 0");
    return static_cast<double>(total_delay.count()) / static_cast<double>(interval_used.count());
}

void MonitorConfig::validate() const {
    if (!(smoothing_coefficient > 0.0 && smoothing_coefficient < 1.0)) {
        throw ConfigError("monitor.smoothing_coefficient must lie in (0, 1)");
    }
    if (!(initial_estimate > 0.0) || !std::isfinite(initial_estimate)) {
        throw ConfigError("monitor.initial_estimate must be > 0");
    }
}

WorkloadMonitor::WorkloadMonitor(MonitorConfig config) : config_(config) {
    config_.validate();
    estimate_.value = config_.initial_estimate;
}

void WorkloadMonitor::on_batch_completed(const BatchStats& stats) {
    if (stats.processing_delay < Millis{0} || stats.scheduling_delay < Millis{0} ||
        stats.total_delay != stats.processing_delay + stats.scheduling_delay) {
        throw DomainError("inconsistent batch delays for batch " + std::to_string(stats.batch_id));
    }
    pending_.push_back(stats.workload());
}

WorkloadEstimate WorkloadMonitor::update_estimate(Millis now) {
    estimate_.as_of = now;
    if (pending_.empty()) return estimate_;
    double sum = 0.0;
    for (double eta : pending_) sum += eta;
    const double mean = sum / static_cast<double>(pending_.size());
    const double a = config_.smoothing_coefficient;
    estimate_.value = a * mean + (1.0 - a) * estimate_.value;
    estimate_.samples_absorbed += static_cast<std::int64_t>(pending_.size());
    pending_.clear();
    return estimate_;
}

}  // namespace edgebatch
