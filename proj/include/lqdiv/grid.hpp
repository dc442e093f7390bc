#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lqdiv {

/// Uniform grid 0 = t_0 < ... < t_N = T with N*h = T.
class TimeGrid {
public:
    /// Throws ValidationError unless T/h is an integer to within 1e-12.
    TimeGrid(double horizon, double step);

    double horizon() const noexcept { return horizon_; }
    double step() const noexcept { return step_; }
    std::size_t intervals() const noexcept { return intervals_; }
    std::size_t nodes() const noexcept { return intervals_ + 1; }
    double time(std::size_t k) const noexcept {
        return k == intervals_ ? horizon_ : static_cast<double>(k) * step_;
    }

    /// Index of the node equal to t (within 1e-9·h), or nodes() if t is off-grid.
    std::size_t node_of(double t) const noexcept;

    bool operator==(const TimeGrid& o) const noexcept {
        return intervals_ == o.intervals_ && horizon_ == o.horizon_ && step_ == o.step_;
    }

private:
    double horizon_;
    double step_;
    std::size_t intervals_;
};

/// Linear interpolation of node values at t ∈ [0, T].
double interpolate_linear(const TimeGrid& grid, std::span<const double> values, double t);

/// Cubic Hermite interpolation using node values and node time-derivatives.
double interpolate_hermite(const TimeGrid& grid, std::span<const double> values,
                           std::span<const double> derivatives, double t);

}  // namespace lqdiv
