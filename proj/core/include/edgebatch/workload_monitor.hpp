#pragma once

#include <cstdint>
#include <vector>

#include "edgebatch/time.hpp"

namespace edgebatch {

// Timing of one completed batch.
struct BatchStats {
    std::int64_t batch_id = 0;
    Millis submitted_at{0};
    Millis started_at{0};
    Millis completed_at{0};
    Millis processing_delay{0};  // completed - started
    Millis scheduling_delay{0};  // started - submitted
    Millis total_delay{0};       // completed - submitted
    Millis interval_used{0};
    std::int64_t record_count = 0;
    std::int64_t block_count = 0;

    // Builds a record with the three delays derived from the timestamps.
    static BatchStats from_times(std::int64_t id, Millis submitted, Millis started, Millis completed,
                                 Millis interval, std::int64_t records, std::int64_t blocks);

    // eta = total delay / batch interval. DomainError unless interval > 0
    // and total delay > 0.
    double workload() const;
};

struct WorkloadEstimate {
    double value = 1.0;
    Millis as_of{0};
    std::int64_t samples_absorbed = 0;
};

struct MonitorConfig {
    double smoothing_coefficient = 0.3;
    double initial_estimate = 1.0;

    void validate() const;
};

// Exponentially smoothed system workload S(t).
//
// Completed batches contribute their eta to a pending buffer; every
// update_estimate() folds the buffer mean into the estimate:
//
//     S(t) = a * mean(eta) + (1 - a) * S(t-1)
//
// An update with an empty buffer leaves S unchanged.
class WorkloadMonitor {
public:
    explicit WorkloadMonitor(MonitorConfig config = {});

    void on_batch_completed(const BatchStats& stats);
    WorkloadEstimate update_estimate(Millis now);
    const WorkloadEstimate& current() const noexcept { return estimate_; }

    std::size_t pending() const noexcept { return pending_.size(); }
    const MonitorConfig& config() const noexcept { return config_; }

private:
    MonitorConfig config_;
    WorkloadEstimate estimate_;
    std::vector<double> pending_;
};

}  // namespace edgebatch
