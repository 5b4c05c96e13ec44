#include "edgebatch/traffic_tracker.hpp"

#include <algorithm>
#include <string>

#include <spdlog/spdlog.h>

#include "edgebatch/errors.hpp"

namespace edgebatch {

void TrackerConfig::validate() const {
    if (resample_interval <= Millis{0}) throw ConfigError("tracker.resample_interval_ms must be > 0");
    if (train_num < grey::kMinSeriesLength) {
        throw ConfigError("tracker.train_num must be >= " + std::to_string(grey::kMinSeriesLength));
    }
    if (retain_windows < train_num) throw ConfigError("tracker.retain_windows must be >= tracker.train_num");
    if (retrain_every < 1) throw ConfigError("tracker.retrain_every must be >= 1");
}

TrafficTracker::TrafficTracker(TrackerConfig config) : config_(config) { config_.validate(); }

void TrafficTracker::start(Millis now) {
    running_ = true;
    open_start_ = now;
    open_records_ = 0;
    last_report_time_.reset();
    history_.clear();
    raw_.clear();
    model_.reset();
    closed_since_train_ = 0;
    closed_records_total_ = 0;
    dropped_reports_ = 0;
}

void TrafficTracker::stop() { running_ = false; }

void TrafficTracker::report_info(const TrafficReport& report) {
    if (!running_) throw NotReadyError("traffic tracker is not started");
    if (report.record_count < 0) throw DomainError("report record_count must be >= 0");
    if (report.timestamp < open_start_ || (last_report_time_ && report.timestamp < *last_report_time_)) {
        ++dropped_reports_;
        spdlog::debug("traffic tracker: dropping stale report at {} ms", report.timestamp.count());
        return;
    }
    advance_to(report.timestamp);
    open_records_ += report.record_count;
    last_report_time_ = report.timestamp;
    raw_.push_back(report);
    trim_raw();
}

int TrafficTracker::advance_to(Millis now) {
    int closed = 0;
    while (now >= open_start_ + config_.resample_interval) {
        close_open_window();
        ++closed;
    }
    if (closed > 0) trim_raw();
    return closed;
}

void TrafficTracker::close_open_window() {
    const Millis len = config_.resample_interval;
    ResampledRecord rec;
    rec.window_start = open_start_;
    rec.window_len = len;
    rec.records = open_records_;
    rec.rate = static_cast<double>(open_records_) / to_seconds(len);
    history_.push_back(rec);
    closed_records_total_ += open_records_;

    open_start_ += len;
    open_records_ = 0;

    ++closed_since_train_;
    if (static_cast<int>(history_.size()) >= config_.train_num &&
        closed_since_train_ >= config_.retrain_every) {
        train();
    }
}

void TrafficTracker::trim_raw() {
    // Raw reports are kept for the open window and the one before it.
    const Millis horizon = open_start_ - config_.resample_interval;
    while (!raw_.empty() && raw_.front().timestamp < horizon) raw_.pop_front();
}

std::vector<ResampledRecord> TrafficTracker::resample() const {
    return {history_.begin(), history_.end()};
}

ResampledRecord TrafficTracker::get_latest_record() const {
    if (history_.empty()) throw NotReadyError("no closed traffic window yet");
    return history_.back();
}

void TrafficTracker::cleanup() {
    while (static_cast<int>(history_.size()) > config_.retain_windows) history_.pop_front();
}

const grey::GreyModel& TrafficTracker::train() {
    const auto n = static_cast<std::size_t>(config_.train_num);
    if (history_.size() < n) {
        throw NotReadyError("need " + std::to_string(n) + " closed windows to train, have " +
                            std::to_string(history_.size()));
    }
    std::vector<double> rates;
    rates.reserve(n);
    for (auto it = history_.end() - static_cast<std::ptrdiff_t>(n); it != history_.end(); ++it) {
        rates.push_back(it->rate);
    }
    model_ = grey::fit(rates);
    last_train_time_ = open_start_;
    closed_since_train_ = 0;
    cleanup();
    return *model_;
}

double TrafficTracker::predict_rate(int windows_ahead) const {
    if (windows_ahead < 1) throw DomainError("windows_ahead must be >= 1");
    if (!model_) throw NotReadyError("traffic model has not been trained");
    return std::max(0.0, grey::predict(*model_, model_->train_len + windows_ahead));
}

}  // namespace edgebatch
