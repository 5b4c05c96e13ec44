#include "edgebatch/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace edgebatch {

std::optional<Millis> convergence_time(const std::vector<TickRow>& ticks, Millis from, Millis block_interval) {
    const auto first = std::find_if(ticks.begin(), ticks.end(), [from](const TickRow& t) { return t.time >= from; });
    const auto start = static_cast<std::size_t>(first - ticks.begin());
    for (std::size_t k = start; k + kConvergenceTicks <= ticks.size(); ++k) {
        const Millis anchor = ticks[k].interval;
        bool stable = true;
        for (std::size_t j = k; j < k + kConvergenceTicks; ++j) {
            if (std::abs((ticks[j].interval - anchor).count()) > block_interval.count()) {
                stable = false;
                break;
            }
        }
        if (stable) return ticks[k].time - from;
    }
    return std::nullopt;
}

std::vector<double> prediction_errors(const std::vector<TickRow>& ticks, Millis resample_interval) {
    std::vector<double> out;
    if (resample_interval <= Millis{0}) return out;
    std::optional<std::int64_t> prev_window;
    double prev_prediction = 0.0;
    for (const auto& t : ticks) {
        if (!t.rate_measured || !t.rate_predicted) continue;
        // Windows are aligned to t = 0; the newest closed one at a tick is
        // the one ending at or before it.
        const std::int64_t window = t.time.count() / resample_interval.count() - 1;
        if (prev_window && window == *prev_window + 1 && *t.rate_measured > 0.0) {
            out.push_back(std::abs(prev_prediction - *t.rate_measured) / *t.rate_measured);
        }
        prev_window = window;
        prev_prediction = *t.rate_predicted;
    }
    return out;
}

SummaryReport summarize(const MetricsLog& log) {
    SummaryReport s;
    s.resample_interval = log.resample_interval;
    s.block_interval = log.block_interval;
    s.control_start = log.control_start;

    const auto ticks = log.ticks();
    const auto batches = log.batches();
    s.ticks = static_cast<std::int64_t>(ticks.size());
    s.batches = static_cast<std::int64_t>(batches.size());

    const auto errors = prediction_errors(ticks, log.resample_interval);
    s.prediction_samples = static_cast<std::int64_t>(errors.size());
    if (!errors.empty()) {
        double sum = 0.0;
        double worst = 0.0;
        for (double e : errors) {
            sum += e;
            worst = std::max(worst, e);
        }
        s.prediction_error_mean = sum / static_cast<double>(errors.size());
        s.prediction_error_max = worst;
    }

    s.convergence_time = convergence_time(ticks, log.control_start, log.block_interval);
    if (s.convergence_time) {
        const Millis at = log.control_start + *s.convergence_time;
        double sum = 0.0;
        double worst = 0.0;
        std::int64_t n = 0;
        s.converged_interval = std::find_if(ticks.begin(), ticks.end(), [at](const TickRow& t) {
                                   return t.time >= at;
                               })->interval;
        // The workload reported at the converging tick was measured under the
        // previous interval, so steady state starts at the tick after it.
        for (const auto& t : ticks) {
            if (t.time <= at) continue;
            sum += t.workload;
            worst = std::max(worst, t.workload);
            ++n;
        }
        if (n > 0) {
            s.steady_workload_mean = sum / static_cast<double>(n);
            s.steady_workload_max = worst;
        }
    }

    if (!batches.empty()) {
        double sum = 0.0;
        double worst = 0.0;
        for (const auto& b : batches) {
            const auto d = static_cast<double>(b.stats.total_delay.count());
            sum += d;
            worst = std::max(worst, d);
            s.records_processed += b.stats.record_count;
        }
        s.total_delay_mean_ms = sum / static_cast<double>(batches.size());
        s.total_delay_max_ms = worst;
    }

    bool overloaded = false;
    Millis onset{0};
    double workload_sum = 0.0;
    double change_sum = 0.0;
    std::int64_t changes = 0;
    for (std::size_t i = 0; i < ticks.size(); ++i) {
        const auto& t = ticks[i];
        workload_sum += t.workload;
        s.workload_max = i == 0 ? t.workload : std::max(s.workload_max, t.workload);
        if (!overloaded && t.workload > 1.0) {
            overloaded = true;
            onset = t.time;
            ++s.overload_episodes;
        } else if (overloaded && t.workload < 1.0) {
            overloaded = false;
            const Millis took = t.time - onset;
            s.overload_recovery_max = s.overload_recovery_max ? std::max(*s.overload_recovery_max, took) : took;
        }
        if (i > 0 && t.level) {
            change_sum += static_cast<double>(std::abs((t.interval - ticks[i - 1].interval).count()));
            ++changes;
        }
    }
    s.overload_unrecovered = overloaded;
    if (!ticks.empty()) s.workload_mean = workload_sum / static_cast<double>(ticks.size());
    if (changes > 0) s.mean_abs_interval_change_ms = change_sum / static_cast<double>(changes);
    return s;
}

}  // namespace edgebatch
