#include "edgebatch/engine.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "edgebatch/errors.hpp"

namespace edgebatch {

Millis JobCostModel::cost(std::int64_t records, std::int64_t blocks) const {
    const double ms = fixed_overhead_ms + per_record_ms * static_cast<double>(records) +
                      per_block_ms * static_cast<double>(blocks);
    return Millis{std::max<std::int64_t>(1, std::llround(ms))};
}

void JobCostModel::validate() const {
    for (double v : {fixed_overhead_ms, per_record_ms, per_block_ms}) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("cost model coefficients must be finite and >= 0");
    }
}

void EngineConfig::validate() const {
    if (block_interval <= Millis{0}) throw ConfigError("engine.block_interval_ms must be > 0");
    if (controller.block_interval != block_interval) {
        throw ConfigError("controller block interval differs from engine.block_interval_ms");
    }
    controller.validate();
    monitor.validate();
    tracker.validate();
    cost_model.validate();
    if (initial_batch_interval <= Millis{0} || initial_batch_interval % block_interval != Millis{0}) {
        throw ConfigError("engine.initial_batch_interval_ms must be a positive multiple of the block interval");
    }
    if (mode == EngineMode::adaptive && !controller.admissible(initial_batch_interval)) {
        throw ConfigError("engine.initial_batch_interval_ms lies outside [min_interval, max_interval]");
    }
    if (tracker.resample_interval % block_interval != Millis{0}) {
        throw ConfigError("tracker.resample_interval_ms must be a multiple of the block interval");
    }
    if (duration <= Millis{0}) throw ConfigError("engine.duration_ms must be > 0");
    if (control_start < Millis{0}) throw ConfigError("engine.control_start_ms must be >= 0");
    if (!(jitter >= 0.0) || !std::isfinite(jitter)) throw ConfigError("engine.jitter must be >= 0");
}

std::int64_t Batch::records() const noexcept {
    std::int64_t sum = 0;
    for (const auto& b : blocks) sum += b.record_count;
    return sum;
}

std::vector<BatchRow> MetricsLog::batches() const {
    std::vector<BatchRow> out;
    for (const auto& row : rows) {
        if (const auto* b = std::get_if<BatchRow>(&row)) out.push_back(*b);
    }
    return out;
}

std::vector<TickRow> MetricsLog::ticks() const {
    std::vector<TickRow> out;
    for (const auto& row : rows) {
        if (const auto* t = std::get_if<TickRow>(&row)) out.push_back(*t);
    }
    return out;
}

std::string_view to_string(EngineMode mode) noexcept {
    return mode == EngineMode::adaptive ? "adaptive" : "vanilla";
}

MicroBatchEngine::MicroBatchEngine(EngineConfig config, RateFunction trace)
    : config_((config.validate(), std::move(config))),
      trace_(std::move(trace)),
      tracker_(config_.tracker),
      monitor_(config_.monitor),
      rng_(config_.seed),
      interval_(config_.initial_batch_interval) {
    if (config_.mode == EngineMode::adaptive) controller_.emplace(config_.controller, config_.rules);

    log_.resample_interval = config_.tracker.resample_interval;
    log_.block_interval = config_.block_interval;
    log_.control_start = config_.control_start;

    tracker_.start(Millis{0});
    next_fire_ = interval_;
    schedule(config_.block_interval, EventKind::BlockBoundary);
    schedule(next_fire_, EventKind::BatchTimerFire);
    schedule(config_.tracker.resample_interval, EventKind::RateWindowClose);
    schedule(config_.controller.control_period, EventKind::ControlTick);
    schedule(config_.duration, EventKind::TraceEnd);
}

void MicroBatchEngine::schedule(Millis at, EventKind kind) {
    events_.push(EngineEvent{at, next_sequence_++, kind});
}

bool MicroBatchEngine::step() {
    if (finished_ || events_.empty()) return false;
    const EngineEvent ev = events_.top();
    events_.pop();
    now_ = ev.fire_at;
    switch (ev.kind) {
        case EventKind::BlockBoundary: on_block_boundary(now_); break;
        case EventKind::JobComplete: on_job_complete(now_); break;
        case EventKind::RateWindowClose: on_window_close(now_); break;
        case EventKind::ControlTick: on_control_tick(now_); break;
        case EventKind::BatchTimerFire: timer_fire(now_); break;
        case EventKind::JobStart:
            if (!worker_busy() && !batch_queue_.empty()) execute_next(now_);
            break;
        case EventKind::TraceEnd: on_trace_end(); break;
    }
    return !finished_;
}

void MicroBatchEngine::run_until(Millis until) {
    while (!finished_ && !events_.empty() && events_.top().fire_at <= until) step();
}

const MetricsLog& MicroBatchEngine::run() {
    while (step()) {
    }
    return log_;
}

std::int64_t MicroBatchEngine::draw_block_records(Millis start, Millis end) {
    if (config_.jitter > 0.0) {
        const double expected = trace_.integral(static_cast<double>(start.count()), static_cast<double>(end.count()));
        std::normal_distribution<double> noise(0.0, config_.jitter);
        return std::max<std::int64_t>(0, std::llround(expected * (1.0 + noise(rng_))));
    }
    // Rounding the running total keeps the per-block error below one record
    // and the overall count exact.
    const auto total = std::llround(trace_.cumulative(static_cast<double>(end.count())));
    const std::int64_t records = std::max<std::int64_t>(0, total - rounded_cumulative_);
    rounded_cumulative_ += records;
    return records;
}

void MicroBatchEngine::on_block_boundary(Millis now) {
    const Millis start = now - config_.block_interval;
    Block block{next_block_id_++, draw_block_records(start, now), now};
    log_.totals.generated += block.record_count;
    log_.totals.in_blocks += block.record_count;
    tracker_.report_info(TrafficReport{start, block.record_count});
    log_.totals.reported += block.record_count;
    block_queue_.push_back(block);
    schedule(now + config_.block_interval, EventKind::BlockBoundary);
}

void MicroBatchEngine::on_window_close(Millis now) {
    const int closed = tracker_.advance_to(now);
    if (closed > 0) {
        log_.windows.push_back(WindowRow{tracker_.get_latest_record(), open_window_prediction_});
    }
    open_window_prediction_.reset();
    if (tracker_.trained()) open_window_prediction_ = tracker_.predict_rate(1);
    schedule(now + config_.tracker.resample_interval, EventKind::RateWindowClose);
}

void MicroBatchEngine::on_control_tick(Millis now) {
    TickRow row;
    row.time = now;
    if (controller_ && now >= config_.control_start) {
        const ControlDecision d = controller_->control_step(now, interval_, tracker_, monitor_);
        if (d.new_interval != interval_) set_interval(d.new_interval);
        row.workload = d.workload;
        row.rate_measured = d.rate_measured;
        row.rate_predicted = d.rate_predicted;
        row.traffic_change = d.traffic_change;
        row.workload_deviation = d.workload_deviation;
        row.level = d.level;
    } else {
        row.workload = monitor_.update_estimate(now).value;
        if (tracker_.has_records()) {
            row.rate_measured = tracker_.get_latest_record().rate;
            if (!config_.controller.prediction_enabled) {
                row.rate_predicted = row.rate_measured;
            } else if (tracker_.trained()) {
                row.rate_predicted = tracker_.predict_rate(1);
            }
        }
    }
    row.interval = interval_;
    log_.rows.emplace_back(row);
    schedule(now + config_.controller.control_period, EventKind::ControlTick);
}

Batch MicroBatchEngine::timer_fire(Millis now) {
    Batch batch;
    batch.batch_id = next_batch_id_++;
    batch.generated_at = now;
    batch.interval_used = now - last_fire_;
    batch.blocks.assign(block_queue_.begin(), block_queue_.end());
    block_queue_.clear();
    log_.totals.batched += batch.records();
    batch_queue_.push_back(batch);

    last_fire_ = now;
    next_fire_ = now + interval_;
    schedule(next_fire_, EventKind::BatchTimerFire);
    if (!worker_busy()) schedule(now, EventKind::JobStart);
    return batch;
}

BatchStats MicroBatchEngine::execute_next(Millis now) {
    if (worker_busy()) throw DomainError("worker is busy");
    if (batch_queue_.empty()) throw DomainError("batch queue is empty");
    Batch batch = std::move(batch_queue_.front());
    batch_queue_.pop_front();
    const auto records = batch.records();
    const auto blocks = static_cast<std::int64_t>(batch.blocks.size());
    const Millis cost = config_.cost_model.cost(records, blocks);
    in_flight_ = BatchStats::from_times(batch.batch_id, batch.generated_at, now, now + cost, batch.interval_used,
                                        records, blocks);
    schedule(now + cost, EventKind::JobComplete);
    return *in_flight_;
}

void MicroBatchEngine::on_job_complete(Millis now) {
    const BatchStats stats = *in_flight_;
    in_flight_.reset();
    monitor_.on_batch_completed(stats);
    log_.totals.completed += stats.record_count;
    log_.rows.emplace_back(BatchRow{stats, stats.workload()});
    if (!batch_queue_.empty()) schedule(now, EventKind::JobStart);
}

void MicroBatchEngine::set_interval(Millis interval) {
    if (config_.mode == EngineMode::vanilla) throw ModeError("batch interval is fixed in vanilla mode");
    if (!config_.controller.admissible(interval)) {
        throw DomainError(fmt::format("interval {} ms is not a block multiple within [{}, {}]", interval.count(),
                                      config_.controller.min_interval.count(),
                                      config_.controller.max_interval.count()));
    }
    interval_ = interval;
}

void MicroBatchEngine::on_trace_end() {
    finished_ = true;
    tracker_.stop();
    auto& t = log_.totals;
    t.in_block_queue = 0;
    for (const auto& b : block_queue_) t.in_block_queue += b.record_count;
    t.in_batch_queue = 0;
    for (const auto& b : batch_queue_) t.in_batch_queue += b.records();
    t.in_flight = in_flight_ ? in_flight_->record_count : 0;
}

MetricsLog run(const EngineConfig& config, const RateFunction& trace) {
    MicroBatchEngine engine(config, trace);
    return engine.run();
}

}  // namespace edgebatch
