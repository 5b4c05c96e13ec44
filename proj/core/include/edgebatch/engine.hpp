#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <queue>
#include <random>
#include <vector>

#include "edgebatch/fuzzy_controller.hpp"
#include "edgebatch/metrics.hpp"
#include "edgebatch/time.hpp"
#include "edgebatch/trace.hpp"
#include "edgebatch/traffic_tracker.hpp"
#include "edgebatch/workload_monitor.hpp"

namespace edgebatch {

enum class EngineMode { adaptive, vanilla };

// Stand-in for the cluster that executes a batch job:
//   cost = fixed_overhead + per_record * records + per_block * blocks
// rounded to whole milliseconds, never below 1 ms.
struct JobCostModel {
    double fixed_overhead_ms = 100.0;
    double per_record_ms = 0.0;
    double per_block_ms = 0.0;

    Millis cost(std::int64_t records, std::int64_t blocks) const;
    void validate() const;
};

struct EngineConfig {
    EngineMode mode = EngineMode::adaptive;
    Millis block_interval{200};
    Millis initial_batch_interval{2000};
    Millis control_start{30000};
    Millis duration{300000};
    std::uint64_t seed = 1;
    // Relative standard deviation of multiplicative noise on per-block record
    // counts. 0 disables it and makes arrivals a pure function of the trace.
    double jitter = 0.0;
    ControllerConfig controller;
    fuzzy::RuleTable rules = fuzzy::RuleTable::expert();
    MonitorConfig monitor;
    TrackerConfig tracker;
    JobCostModel cost_model;

    void validate() const;  // ConfigError
};

struct Block {
    std::int64_t block_id = 0;
    std::int64_t record_count = 0;
    Millis created_at{0};
};

struct Batch {
    std::int64_t batch_id = 0;
    std::vector<Block> blocks;
    Millis generated_at{0};
    Millis interval_used{0};

    std::int64_t records() const noexcept;
};

enum class EventKind { BlockBoundary, JobComplete, RateWindowClose, ControlTick, BatchTimerFire, JobStart, TraceEnd };

// Events sharing a timestamp run in this order. The controller sees the
// freshest window and the batches that just completed, and an interval
// change lands before the timer re-arms.
constexpr int phase(EventKind kind) noexcept { return static_cast<int>(kind); }

struct EngineEvent {
    Millis fire_at{0};
    std::int64_t sequence = 0;
    EventKind kind = EventKind::BlockBoundary;
};

struct EventOrder {
    bool operator()(const EngineEvent& a, const EngineEvent& b) const noexcept {
        // priority_queue pops the largest; invert for earliest-first.
        if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
        if (phase(a.kind) != phase(b.kind)) return phase(a.kind) > phase(b.kind);
        return a.sequence > b.sequence;
    }
};

// Discrete-event model of a micro-batch receiver and executor.
//
// Records arrive according to a RateFunction and are cut into blocks every
// block interval. Each block is reported to the traffic tracker and queued.
// When the batch timer fires, all queued blocks become one batch, which a
// single FIFO worker executes for JobCostModel::cost. Completed batches feed
// the workload monitor; in adaptive mode the fuzzy controller retimes the
// batch timer every control period once control_start is reached.
class MicroBatchEngine {
public:
    MicroBatchEngine(EngineConfig config, RateFunction trace);

    // Processes events up to and including TraceEnd and returns the log.
    const MetricsLog& run();
    // Processes every event with fire_at <= until.
    void run_until(Millis until);
    // Processes one event. Returns false once the trace has ended.
    bool step();
    bool finished() const noexcept { return finished_; }

    // Drains the block queue into a batch and re-arms the timer with the
    // interval currently in force.
    Batch timer_fire(Millis now);
    // Starts the head-of-line batch on the idle worker. The returned stats
    // are delivered to the monitor when the matching JobComplete fires.
    BatchStats execute_next(Millis now);
    // New period for the next arming of the batch timer. ModeError in
    // vanilla mode, DomainError when not an admissible interval.
    void set_interval(Millis interval);

    Millis now() const noexcept { return now_; }
    Millis current_interval() const noexcept { return interval_; }
    Millis next_fire() const noexcept { return next_fire_; }
    bool worker_busy() const noexcept { return in_flight_.has_value(); }
    const std::deque<Block>& block_queue() const noexcept { return block_queue_; }
    const std::deque<Batch>& batch_queue() const noexcept { return batch_queue_; }
    const TrafficTracker& tracker() const noexcept { return tracker_; }
    const WorkloadMonitor& monitor() const noexcept { return monitor_; }
    const MetricsLog& log() const noexcept { return log_; }
    const EngineConfig& config() const noexcept { return config_; }
    Millis last_event_time() const noexcept { return now_; }

private:
    void schedule(Millis at, EventKind kind);
    void on_block_boundary(Millis now);
    void on_window_close(Millis now);
    void on_control_tick(Millis now);
    void on_job_complete(Millis now);
    void on_trace_end();
    std::int64_t draw_block_records(Millis start, Millis end);

    EngineConfig config_;
    RateFunction trace_;
    TrafficTracker tracker_;
    WorkloadMonitor monitor_;
    std::optional<FuzzyController> controller_;
    std::mt19937_64 rng_;

    std::priority_queue<EngineEvent, std::vector<EngineEvent>, EventOrder> events_;
    std::int64_t next_sequence_ = 0;
    Millis now_{0};
    bool finished_ = false;

    Millis interval_;
    Millis last_fire_{0};
    Millis next_fire_{0};
    std::int64_t rounded_cumulative_ = 0;
    std::int64_t next_block_id_ = 0;
    std::int64_t next_batch_id_ = 0;
    std::deque<Block> block_queue_;
    std::deque<Batch> batch_queue_;
    std::optional<BatchStats> in_flight_;
    std::optional<double> open_window_prediction_;

    MetricsLog log_;
};

// Convenience wrapper: build an engine, run it, return the log.
MetricsLog run(const EngineConfig& config, const RateFunction& trace);

std::string_view to_string(EngineMode mode) noexcept;

}  // namespace edgebatch
