#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"
#include "edgebatch/errors.hpp"
#include "edgebatch/grey_model.hpp"

using namespace edgebatch;

namespace {

struct Params {
    double alpha;
    double mu;
};

// Uncentred least squares on [-z, 1] solved by QR, nothing shared with the
// library's normal-equation route.
Params oracle_fit(const std::vector<double>& x) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::VectorXd acc(n);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) acc(i) = (sum += x[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd B(n - 1, 2);
    Eigen::VectorXd Y(n - 1);
    for (Eigen::Index i = 1; i < n; ++i) {
        B(i - 1, 0) = -0.5 * (acc(i) + acc(i - 1));
        B(i - 1, 1) = 1.0;
        Y(i - 1) = x[static_cast<std::size_t>(i)];
    }
    const Eigen::Vector2d p = B.colPivHouseholderQr().solve(Y);
    return {p(0), p(1)};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("accumulate and difference are inverse") {
    const std::vector<double> x{3, 1, 4, 1, 5, 9};
    const auto acc = grey::accumulate(x);
    CHECK(acc == std::vector<double>{3, 4, 8, 9, 14, 23});
    CHECK(grey::difference(acc) == x);
}

TEST_CASE("accumulate rejects short and non-positive input") {
    CHECK_THROWS_AS(grey::accumulate(std::vector<double>{1, 2, 3}), LengthError);
    CHECK_THROWS_AS(grey::accumulate(std::vector<double>{1, 2, 0, 3}), DomainError);
    CHECK_THROWS_AS(grey::accumulate(std::vector<double>{1, 2, NAN, 3}), DomainError);
}

TEST_CASE("fit matches the QR oracle on random positive series") {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<int> len(5, 8);
    std::uniform_real_distribution<double> value(1.0, 1000.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(static_cast<std::size_t>(len(rng)));
        for (double& v : x) v = value(rng);
        const auto model = grey::fit(x);
        const auto want = oracle_fit(x);
        INFO("trial " << trial);
        CHECK(rel(model.alpha, want.alpha) < 1e-9);
        CHECK(rel(model.mu, want.mu) < 1e-9);
        CHECK(model.shift == 0.0);
        CHECK(model.train_len == static_cast<int>(x.size()));
    }
}

TEST_CASE("geometric series satisfy the difference equation exactly") {
    for (double ratio : {0.8, 0.95, 1.05, 1.3}) {
        std::vector<double> x;
        for (int t = 0; t < 7; ++t) x.push_back(50.0 * std::pow(ratio, t));
        const auto model = grey::fit(x);
        const auto acc = grey::accumulate(x);
        for (std::size_t t = 1; t < x.size(); ++t) {
            const double z = 0.5 * (acc[t] + acc[t - 1]);
            CHECK(std::abs(x[t] + model.alpha * z - model.mu) < 1e-9 * x[t]);
        }
        // Growth maps to a negative development coefficient.
        CHECK((ratio > 1.0) == (model.alpha < 0.0));
    }
}

TEST_CASE("fitted history tracks a smooth exponential") {
    std::vector<double> x;
    for (int t = 0; t < 6; ++t) x.push_back(100.0 * std::exp(0.05 * t));
    const auto model = grey::fit(x);
    for (int t = 2; t <= 6; ++t) CHECK(rel(grey::predict(model, t), x[static_cast<std::size_t>(t - 1)]) < 1e-3);
    CHECK(rel(grey::predict(model, 7), 100.0 * std::exp(0.3)) < 1e-3);
    CHECK(grey::predict(model, 1) == doctest::Approx(x[0]));
}

TEST_CASE("constant series uses the linear limit") {
    const std::vector<double> x(6, 42.0);
    const auto model = grey::fit(x);
    CHECK(model.degenerate());
    CHECK(grey::predict(model, 7) == doctest::Approx(42.0));
    CHECK(grey::fit_predict(x, 3) == std::vector<double>{42.0, 42.0, 42.0});
    CHECK(grey::response(model, 4) == doctest::Approx(168.0));
}

TEST_CASE("windows with zeros are shifted and predictions come back unshifted") {
    const std::vector<double> x{0, 2, 4, 6, 8};
    const auto model = grey::fit(x);
    CHECK(model.shift == 1.0);
    std::vector<double> shifted;
    for (double v : x) shifted.push_back(v + 1.0);
    const auto plain = grey::fit(shifted);
    CHECK(grey::predict(model, 6) == doctest::Approx(grey::predict(plain, 6) - 1.0));

    const auto neg = grey::fit(std::vector<double>{-3, -1, 0, 1, 2});
    CHECK(neg.shift == 4.0);
}

TEST_CASE("invalid steps and horizons") {
    const auto model = grey::fit(std::vector<double>{1, 2, 3, 4, 5});
    CHECK_THROWS_AS(grey::predict(model, 0), DomainError);
    CHECK_THROWS_AS(grey::fit_predict(std::vector<double>{1, 2, 3, 4}, 0), DomainError);
    CHECK_THROWS_AS(grey::fit(std::vector<double>{1, 2, 3}), LengthError);
    CHECK_THROWS_AS(grey::predict(grey::GreyModel{}, 3), DomainError);
}
