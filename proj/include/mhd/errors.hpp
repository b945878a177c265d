#pragma once

#include <stdexcept>
#include <string>

namespace mhd {

/// Raised when a user-supplied callable produces a non-finite value.
struct EvaluationFailure : std::runtime_error {
    explicit EvaluationFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a sparse factorization or solve does not meet the residual target.
struct LinearSolveFailure : std::runtime_error {
    explicit LinearSolveFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the partitioned sweep does not reach its tolerance within maxit.
struct NonConvergence : std::runtime_error {
    NonConvergence(const std::string& what, int iterations_, double last_change_)
        : std::runtime_error(what), iterations(iterations_), last_change(last_change_) {}
    int iterations;
    double last_change;
};

/// Raised when a multi-level history is required but not yet available.
struct InsufficientHistory : std::runtime_error {
    explicit InsufficientHistory(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the local-error estimator prefactor degenerates (R ~ 1/24).
struct EstimatorSingular : std::runtime_error {
    explicit EstimatorSingular(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the step controller cannot produce an acceptable step.
struct AdaptivityFailure : std::runtime_error {
    explicit AdaptivityFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mhd
