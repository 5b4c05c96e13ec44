#include "doctest.h"
#include "edgebatch/errors.hpp"
#include "edgebatch/traffic_tracker.hpp"

using namespace edgebatch;
using namespace std::chrono_literals;

namespace {

TrackerConfig cfg(Millis window = 1000ms, int train = 5) {
    TrackerConfig c;
    c.resample_interval = window;
    c.train_num = train;
    return c;
}

// Feeds `per_slice` records every 100 ms over [from, to).
void feed(TrafficTracker& t, Millis from, Millis to, std::int64_t per_slice) {
    for (Millis at = from; at < to; at += 100ms) t.report_info({at, per_slice});
}

}  // namespace

TEST_CASE("windows close on their boundary and report per-second rates") {
    TrafficTracker t(cfg());
    t.start();
    feed(t, 0ms, 1000ms, 5);
    CHECK_FALSE(t.has_records());
    CHECK(t.advance_to(1000ms) == 1);
    const auto r = t.get_latest_record();
    CHECK(r.window_start == 0ms);
    CHECK(r.records == 50);
    CHECK(r.rate == doctest::Approx(50.0));
}

TEST_CASE("silent windows close with zero rate") {
    TrafficTracker t(cfg());
    t.start();
    feed(t, 0ms, 1000ms, 1);
    CHECK(t.advance_to(3500ms) == 3);
    const auto recs = t.resample();
    REQUIRE(recs.size() == 3);
    CHECK(recs[1].rate == 0.0);
    CHECK(recs[2].window_start == 2000ms);
    CHECK(t.open_window_start() == 3000ms);
}

TEST_CASE("stale reports are dropped and counted") {
    TrafficTracker t(cfg());
    t.start();
    t.report_info({500ms, 3});
    t.report_info({400ms, 3});
    CHECK(t.dropped_reports() == 1);
    t.advance_to(2000ms);
    t.report_info({1500ms, 3});
    CHECK(t.dropped_reports() == 2);
    CHECK(t.closed_records_total() == 3);
}

TEST_CASE("reports need a started tracker and non-negative counts") {
    TrafficTracker t(cfg());
    CHECK_THROWS_AS(t.report_info({0ms, 1}), NotReadyError);
    t.start();
    CHECK_THROWS_AS(t.report_info({0ms, -1}), DomainError);
    CHECK_THROWS_AS(t.get_latest_record(), NotReadyError);
}

TEST_CASE("model trains once enough windows closed") {
    TrafficTracker t(cfg());
    t.start();
    feed(t, 0ms, 4000ms, 10);
    t.advance_to(4000ms);
    CHECK_FALSE(t.trained());
    CHECK_THROWS_AS(t.predict_rate(), NotReadyError);
    CHECK_THROWS_AS(t.train(), NotReadyError);
    feed(t, 4000ms, 5000ms, 10);
    t.advance_to(5000ms);
    REQUIRE(t.trained());
    CHECK(t.predict_rate(1) == doctest::Approx(100.0));
    CHECK(t.predict_rate(3) == doctest::Approx(100.0));
    CHECK_THROWS_AS(t.predict_rate(0), DomainError);
}

TEST_CASE("training uses only the trailing windows") {
    TrafficTracker t(cfg(1000ms, 4));
    t.start();
    feed(t, 0ms, 3000ms, 50);
    feed(t, 3000ms, 7000ms, 10);
    t.advance_to(7000ms);
    CHECK(t.predict_rate() == doctest::Approx(100.0));
}

TEST_CASE("forecasts are clamped at zero") {
    TrafficTracker t(cfg());
    t.start();
    for (int w = 0; w < 5; ++w) t.report_info({Millis{w * 1000}, 400 - 95 * w});
    t.advance_to(5000ms);
    CHECK(t.predict_rate(5) >= 0.0);
}

TEST_CASE("cleanup keeps at most retain_windows records") {
    TrackerConfig c = cfg();
    c.retain_windows = 6;
    TrafficTracker t(c);
    t.start();
    feed(t, 0ms, 20000ms, 1);
    t.advance_to(20000ms);
    t.cleanup();
    CHECK(t.resample().size() == 6);
    CHECK(t.resample().back().window_start == 19000ms);
}

TEST_CASE("raw reports only span the open and previous window") {
    TrafficTracker t(cfg());
    t.start();
    feed(t, 0ms, 5000ms, 1);
    for (const auto& r : t.raw_reports()) CHECK(r.timestamp >= 3000ms);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(TrafficTracker(cfg(0ms)), ConfigError);
    CHECK_THROWS_AS(TrafficTracker(cfg(1000ms, 3)), ConfigError);
    TrackerConfig c = cfg();
    c.retain_windows = 2;
    CHECK_THROWS_AS(TrafficTracker{c}, ConfigError);
    c = cfg();
    c.retrain_every = 0;
    CHECK_THROWS_AS(TrafficTracker{c}, ConfigError);
}
