#pragma once

#include <utility>
#include <vector>

namespace lqdiv {

/**
 * Deterministic function of time on [0, T]: either a constant or a
 * right-continuous piecewise-constant table.
 *
 * For a table with breakpoints b_0 < b_1 < ... the value at t is the value
 * of the last breakpoint b_k <= t; times before b_0 take the first value.
 */
class TimeFunction {
public:
    struct Piece {
        double time;
        double value;
        bool operator==(const Piece&) const = default;
    };

    TimeFunction() = default;
    TimeFunction(double value) : pieces_{{0.0, value}} {}  // NOLINT: implicit by intent
    explicit TimeFunction(std::vector<Piece> pieces);

    double operator()(double t) const noexcept;

    /// Limit from the left at t. Differs from operator() only at breakpoints.
    double left_limit(double t) const noexcept;

    bool is_constant() const noexcept { return pieces_.size() == 1; }
    const std::vector<Piece>& pieces() const noexcept { return pieces_; }

    double min_value() const noexcept;
    double max_value() const noexcept;

    /// Pointwise sum with another function (breakpoints merged).
    TimeFunction plus(const TimeFunction& other) const;
    /// Pointwise product with another function (breakpoints merged).
    TimeFunction times(const TimeFunction& other) const;
    TimeFunction scaled(double factor) const;

    bool operator==(const TimeFunction&) const = default;

private:
    std::vector<Piece> pieces_{{0.0, 0.0}};
};

}  // namespace lqdiv
