#include <algorithm>
#include <random>

#include "doctest.h"
#include "edgebatch/errors.hpp"
#include "edgebatch/workload_monitor.hpp"

using namespace edgebatch;
using namespace std::chrono_literals;

namespace {

BatchStats batch(Millis total, Millis interval, std::int64_t id = 0) {
    return BatchStats::from_times(id, 0ms, 0ms, total, interval, 10, 1);
}

}  // namespace

TEST_CASE("delays derive from the three timestamps") {
    const auto s = BatchStats::from_times(7, 1000ms, 1300ms, 1800ms, 500ms, 42, 3);
    CHECK(s.scheduling_delay == 300ms);
    CHECK(s.processing_delay == 500ms);
    CHECK(s.total_delay == 800ms);
    CHECK(s.workload() == doctest::Approx(1.6));
}

TEST_CASE("workload needs positive interval and delay") {
    CHECK_THROWS_AS(batch(100ms, 0ms).workload(), DomainError);
    CHECK_THROWS_AS(batch(0ms, 100ms).workload(), DomainError);
}

TEST_CASE("an update folds the mean of pending samples") {
    WorkloadMonitor m;
    m.on_batch_completed(batch(800ms, 1000ms));
    m.on_batch_completed(batch(1200ms, 1000ms));
    CHECK(m.pending() == 2);
    const auto e = m.update_estimate(10000ms);
    CHECK(e.value == doctest::Approx(0.3 * 1.0 + 0.7 * 1.0));
    CHECK(e.samples_absorbed == 2);
    CHECK(m.pending() == 0);

    m.on_batch_completed(batch(500ms, 1000ms));
    CHECK(m.update_estimate(20000ms).value == doctest::Approx(0.3 * 0.5 + 0.7 * 1.0));
}

TEST_CASE("an empty update leaves the estimate alone") {
    WorkloadMonitor m({0.5, 2.0});
    const auto e = m.update_estimate(5000ms);
    CHECK(e.value == 2.0);
    CHECK(e.as_of == 5000ms);
    CHECK(e.samples_absorbed == 0);
}

TEST_CASE("the estimate stays inside the hull of its inputs") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> ms(1, 5000);
    WorkloadMonitor m({0.3, 1.0});
    double lo = 1.0;
    double hi = 1.0;
    for (int tick = 0; tick < 200; ++tick) {
        for (int k = 0; k < 3; ++k) {
            const auto b = batch(Millis{ms(rng)}, 1000ms);
            lo = std::min(lo, b.workload());
            hi = std::max(hi, b.workload());
            m.on_batch_completed(b);
        }
        const double s = m.update_estimate(Millis{tick * 1000}).value;
        CHECK(s >= lo - 1e-12);
        CHECK(s <= hi + 1e-12);
    }
}

TEST_CASE("a constant workload is approached geometrically") {
    WorkloadMonitor m({0.3, 1.0});
    double gap = 1.0;
    for (int tick = 1; tick <= 20; ++tick) {
        m.on_batch_completed(batch(2000ms, 1000ms));
        const double s = m.update_estimate(Millis{tick}).value;
        gap *= 0.7;
        CHECK(2.0 - s == doctest::Approx(gap));
    }
}

TEST_CASE("inconsistent batches are rejected") {
    WorkloadMonitor m;
    auto s = batch(1000ms, 1000ms);
    s.total_delay = 900ms;
    CHECK_THROWS_AS(m.on_batch_completed(s), DomainError);
    CHECK(m.pending() == 0);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(WorkloadMonitor({0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(WorkloadMonitor({1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(WorkloadMonitor({0.3, 0.0}), ConfigError);
}
