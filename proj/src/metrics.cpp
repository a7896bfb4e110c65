#include "netrates/metrics.hpp"

#include <cmath>

#include "netrates/errors.hpp"

namespace netrates {

namespace {

void check_lengths(std::span<const double> est, std::span<const double> truth) {
    if (est.size() != truth.size()) throw DataError("metrics: length mismatch");
    if (est.empty()) throw DataError("metrics: empty input");
}

} // namespace

double mae(std::span<const double> est, std::span<const double> truth) {
    check_lengths(est, truth);
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) sum += std::abs(est[i] - truth[i]);
    return sum / static_cast<double>(est.size());
}

double smape(std::span<const double> est, std::span<const double> truth) {
    check_lengths(est, truth);
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double denom = std::abs(est[i]) + std::abs(truth[i]);
        if (denom > 0.0) sum += std::abs(est[i] - truth[i]) / denom;
        // both zero: perfect estimate, zero contribution
    }
    return 100.0 * sum / static_cast<double>(est.size());
}

ErrorSummary summarize_errors(std::span<const double> est, std::span<const double> truth) {
    check_lengths(est, truth);
    ErrorSummary s;
    s.count = static_cast<long long>(est.size());
    s.mae = mae(est, truth);
    s.smape = smape(est, truth);
    if (s.count > 1) {
        double ss = 0.0;
        for (std::size_t i = 0; i < est.size(); ++i) {
            const double d = std::abs(est[i] - truth[i]) - s.mae;
            ss += d * d;
        }
        s.std_abs_err = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    return s;
}

} // namespace netrates
