#include "edgebatch/grey_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "edgebatch/errors.hpp"

namespace edgebatch::grey {

namespace {

void check_length(std::size_t n) {
    if (n < static_cast<std::size_t>(kMinSeriesLength)) {
        throw LengthError("grey model needs at least " + std::to_string(kMinSeriesLength) +
                          " values, got " + std::to_string(n));
    }
}

void check_finite(std::span<const double> series) {
    for (double v : series) {
        if (!std::isfinite(v)) throw DomainError("grey model input contains a non-finite value");
    }
}

void check_step(const GreyModel& model, int t) {
    if (t < 1) throw DomainError("grey model step must be >= 1, got " + std::to_string(t));
    if (model.train_len < kMinSeriesLength || !std::isfinite(model.alpha) ||
        !std::isfinite(model.mu)) {
        throw DomainError("invalid grey model");
    }
}

}  // namespace

bool GreyModel::degenerate() const noexcept { return std::abs(alpha) < kDegenerateAlpha; }

std::vector<double> accumulate(std::span<const double> series) {
    check_length(series.size());
    check_finite(series);
    std::vector<double> out;
    out.reserve(series.size());
    double sum = 0.0;
    for (double v : series) {
        if (v <= 0.0) throw DomainError("grey model input must be strictly positive");
        sum += v;
        out.push_back(sum);
    }
    return out;
}

std::vector<double> difference(std::span<const double> accumulated) {
    std::vector<double> out;
    out.reserve(accumulated.size());
    for (std::size_t i = 0; i < accumulated.size(); ++i) {
        out.push_back(i == 0 ? accumulated[0] : accumulated[i] - accumulated[i - 1]);
    }
    return out;
}

GreyModel fit(std::span<const double> series) {
    check_length(series.size());
    check_finite(series);

    double shift = 0.0;
    const double lowest = *std::min_element(series.begin(), series.end());
    std::vector<double> values(series.begin(), series.end());
    if (lowest <= 0.0) {
        shift = 1.0 - lowest;
        for (double& v : values) v += shift;
    }

    const auto acc = accumulate(values);
    const std::size_t m = values.size() - 1;

    // Regress x(t) on the background value z(t), t = 2..n. Centred sums keep
    // the 2x2 normal equations well conditioned for large counts.
    std::vector<double> z(m);
    for (std::size_t i = 0; i < m; ++i) z[i] = 0.5 * (acc[i + 1] + acc[i]);
    double z_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        z_mean += z[i];
        y_mean += values[i + 1];
    }
    z_mean /= static_cast<double>(m);
    y_mean /= static_cast<double>(m);

    double szz = 0.0;
    double szy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double dz = z[i] - z_mean;
        szz += dz * dz;
        szy += dz * (values[i + 1] - y_mean);
    }
    if (!(szz > 0.0)) throw FitError("grey model normal equations are singular");

    const double slope = szy / szz;  // x = slope * z + mu, slope = -alpha
    GreyModel model;
    model.alpha = -slope;
    model.mu = y_mean - slope * z_mean;
    model.first_accumulated = acc.front();
    model.train_len = static_cast<int>(values.size());
    model.shift = shift;
    if (!std::isfinite(model.alpha) || !std::isfinite(model.mu)) {
        throw FitError("grey model fit produced non-finite parameters");
    }
    return model;
}

double response(const GreyModel& model, int t) {
    check_step(model, t);
    const double steps = static_cast<double>(t - 1);
    if (model.degenerate()) return model.first_accumulated + model.mu * steps;
    const double steady = model.mu / model.alpha;
    return (model.first_accumulated - steady) * std::exp(-model.alpha * steps) + steady;
}

double predict(const GreyModel& model, int t) {
    check_step(model, t);
    if (t == 1) return response(model, 1) - model.shift;
    if (model.degenerate()) return model.mu - model.shift;
    return response(model, t) - response(model, t - 1) - model.shift;
}

std::vector<double> fit_predict(std::span<const double> series, int horizon) {
    if (horizon < 1) throw DomainError("forecast horizon must be >= 1");
    const GreyModel model = fit(series);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(horizon));
    for (int h = 1; h <= horizon; ++h) out.push_back(predict(model, model.train_len + h));
    return out;
}

}  // namespace edgebatch::grey
