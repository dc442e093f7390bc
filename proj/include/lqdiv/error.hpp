#pragma once

#include <stdexcept>
#include <string>

namespace lqdiv {

/// Invalid problem data or configuration. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// ODE integration failure (second-order condition, blow-up, grid mismatch).
/// Maps to CLI exit code 2.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double t)
        : std::runtime_error(what), time_(t) {}
    explicit SolverError(const std::string& what)
        : std::runtime_error(what), time_(-1.0) {}

    /// Time at which integration aborted, or -1 when not time-specific.
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Monte Carlo failure (non-finite state, mismatched inputs). Exit code 3.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lqdiv
