#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "edgebatch/grey_model.hpp"
#include "edgebatch/time.hpp"

namespace edgebatch {

// Records received by the receiver during one reporting slice.
struct TrafficReport {
    Millis timestamp{0};
    std::int64_t record_count = 0;
};

// One closed resampling window.
struct ResampledRecord {
    Millis window_start{0};
    Millis window_len{0};
    std::int64_t records = 0;
    double rate = 0.0;  // records per second averaged over the window
};

struct TrackerConfig {
    Millis resample_interval{30000};
    int train_num = 5;
    int retain_windows = 4096;  // resampled history cap applied by cleanup()
    int retrain_every = 1;      // closed windows between automatic retrains

    void validate() const;  // ConfigError on violation
};

// Collects per-slice record counts, buckets them into fixed windows and keeps
// a GM(1,1) model of the per-window rate up to date.
//
// Windows are aligned to the start time passed to start(). A window closes
// when advance_to() (or a report) moves past its end; only closed windows are
// visible through resample() and used for training.
class TrafficTracker {
public:
    explicit TrafficTracker(TrackerConfig config = {});

    void start(Millis now = Millis{0});
    void stop();
    bool running() const noexcept { return running_; }

    // Attributes the report to the window containing its timestamp. Reports
    // that fall in an already closed window, or run backwards in time, are
    // dropped and counted in dropped_reports().
    void report_info(const TrafficReport& report);

    // Closes every window whose end is <= now. Returns the number closed.
    int advance_to(Millis now);

    bool has_records() const noexcept { return !history_.empty(); }
    std::vector<ResampledRecord> resample() const;
    std::vector<ResampledRecord> get_records() const { return resample(); }
    ResampledRecord get_latest_record() const;  // NotReadyError when empty
    void cleanup();

    // Fits the model on the trailing train_num closed windows.
    const grey::GreyModel& train();
    bool trained() const noexcept { return model_.has_value(); }
    const std::optional<grey::GreyModel>& model() const noexcept { return model_; }
    Millis last_train_time() const noexcept { return last_train_time_; }

    // Forecast of the rate `windows_ahead` windows after the newest closed
    // window, clamped at zero. NotReadyError before the first train().
    double predict_rate(int windows_ahead = 1) const;

    const TrackerConfig& config() const noexcept { return config_; }
    std::int64_t open_window_records() const noexcept { return open_records_; }
    Millis open_window_start() const noexcept { return open_start_; }
    std::int64_t closed_records_total() const noexcept { return closed_records_total_; }
    std::int64_t dropped_reports() const noexcept { return dropped_reports_; }
    const std::deque<TrafficReport>& raw_reports() const noexcept { return raw_; }

private:
    void close_open_window();
    void trim_raw();

    TrackerConfig config_;
    bool running_ = false;
    Millis open_start_{0};
    std::int64_t open_records_ = 0;
    std::optional<Millis> last_report_time_;
    std::deque<ResampledRecord> history_;
    std::deque<TrafficReport> raw_;
    std::optional<grey::GreyModel> model_;
    Millis last_train_time_{0};
    int closed_since_train_ = 0;
    std::int64_t closed_records_total_ = 0;
    std::int64_t dropped_reports_ = 0;
};

}  // namespace edgebatch
