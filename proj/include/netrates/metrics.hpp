#pragma once

#include <span>

namespace netrates {

// Mean absolute error between estimates and true values.
double mae(std::span<const double> est, std::span<const double> truth);

// Symmetric mean absolute percentage error, in [0, 100]. A zero
// estimate of a nonzero truth scores 100%; the 0/0 term scores 0.
double smape(std::span<const double> est, std::span<const double> truth);

struct ErrorSummary {
    double mae = 0.0;
    double smape = 0.0;
    double std_abs_err = 0.0; // sample std of |est - truth|
    long long count = 0;
};

ErrorSummary summarize_errors(std::span<const double> est, std::span<const double> truth);

} // namespace netrates
