#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "edgebatch/time.hpp"
#include "edgebatch/traffic_tracker.hpp"
#include "edgebatch/workload_monitor.hpp"

namespace edgebatch {

struct BatchRow {
    BatchStats stats;
    double eta = 0.0;
};

// One control tick. The controller fields are empty when the controller did
// not act (vanilla mode, or before control start).
struct TickRow {
    Millis time{0};
    Millis interval{0};  // interval in force after the tick
    double workload = 0.0;
    std::optional<double> rate_measured;
    std::optional<double> rate_predicted;
    std::optional<double> traffic_change;
    std::optional<double> workload_deviation;
    std::optional<int> level;
};

// A closed resampling window with the forecast that was made for it when the
// previous window closed.
struct WindowRow {
    ResampledRecord record;
    std::optional<double> predicted_rate;
};

using MetricsRow = std::variant<BatchRow, TickRow>;

struct RecordTotals {
    std::int64_t generated = 0;       // drawn from the rate function
    std::int64_t in_blocks = 0;       // packaged into blocks
    std::int64_t reported = 0;        // accepted by the traffic tracker
    std::int64_t batched = 0;         // moved from blocks into batches
    std::int64_t completed = 0;       // in batches that finished
    std::int64_t in_block_queue = 0;  // at trace end
    std::int64_t in_batch_queue = 0;  // at trace end, waiting
    std::int64_t in_flight = 0;       // at trace end, executing

    bool conserved() const noexcept {
        return generated == in_blocks && in_blocks == reported && in_blocks == batched + in_block_queue &&
               batched == completed + in_batch_queue + in_flight;
    }
};

struct MetricsLog {
    std::vector<MetricsRow> rows;  // batch completions and control ticks, in event order
    std::vector<WindowRow> windows;
    RecordTotals totals;
    Millis resample_interval{0};
    Millis block_interval{0};
    Millis control_start{0};

    std::vector<BatchRow> batches() const;
    std::vector<TickRow> ticks() const;
};

}  // namespace edgebatch
