#pragma once

#include <stdexcept>
#include <string>

namespace netrates {

// Malformed or inconsistent input data (files, trajectories, graphs).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failure of a numerical procedure (rank deficiency, iteration budgets,
// absorbing starts under an event-count stop).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace netrates
