#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pqsim {

/// Raised by the config parser and by run-time validation of run settings.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a nonlinear solve does not converge; carries the residual tail.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what, std::vector<double> residuals = {})
        : std::runtime_error(what), residual_history(std::move(residuals)) {}
    std::vector<double> residual_history;
};

/// Raised when a structural property the code relies on is observed to fail
/// (monotone iteration decreasing, ordered solves crossing, ...).
struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace pqsim
