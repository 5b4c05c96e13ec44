#pragma once

// GM(1,1) grey forecasting model.
//
// A short positive series x(1..n) is turned into its accumulated series
// X(t) = x(1) + ... + x(t). The model assumes X follows the whitening equation
//
//     dX/dt + alpha * X = mu
//
// whose discrete form x(t) + alpha * z(t) = mu (t = 2..n, z the mean of two
// consecutive accumulated values) is fitted by ordinary least squares. The
// time response of the continuous equation, differenced, reproduces the
// fitted history for t <= n and forecasts for t > n.

#include <span>
#include <vector>

namespace edgebatch::grey {

inline constexpr int kMinSeriesLength = 4;

// Below this magnitude the development coefficient is treated as zero and
// the time response switches to its linear limit.
inline constexpr double kDegenerateAlpha = 1e-9;

struct GreyModel {
    double alpha = 0.0;              // development coefficient
    double mu = 0.0;                 // grey input
    double first_accumulated = 0.0;  // X(1), on the shifted scale
    int train_len = 0;
    // Added to every observation before fitting when the window held
    // non-positive values; removed again from predictions.
    double shift = 0.0;

    bool degenerate() const noexcept;
};

// Cumulative sum. Requires at least kMinSeriesLength strictly positive,
// finite values (LengthError / DomainError otherwise).
std::vector<double> accumulate(std::span<const double> series);

// Inverse of accumulate: first value, then successive differences.
std::vector<double> difference(std::span<const double> accumulated);

// Least-squares fit of alpha and mu. Windows containing values <= 0 are
// shifted by (1 - min) first. Throws LengthError for short input,
// DomainError for non-finite values and FitError for singular equations.
GreyModel fit(std::span<const double> series);

// Fitted accumulated value at step t >= 1 (shifted scale).
double response(const GreyModel& model, int t);

// Fitted (t <= train_len) or forecast (t > train_len) observation at step t,
// on the caller's original scale.
double predict(const GreyModel& model, int t);

// Forecasts for steps n+1 .. n+horizon of a freshly fitted model.
std::vector<double> fit_predict(std::span<const double> series, int horizon);

}  // namespace edgebatch::grey
