#include "lqdiv/grid.hpp"

#include <algorithm>
#include <cmath>

#include "lqdiv/error.hpp"

namespace lqdiv {

TimeGrid::TimeGrid(double horizon, double step) : horizon_(horizon), step_(step), intervals_(0) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ValidationError("grid horizon must be positive and finite");
    }
    if (!(step > 0.0) || !(step <= horizon)) {
        throw ValidationError("grid step must be in (0, T]");
    }
    const double ratio = horizon / step;
    const double n = std::round(ratio);
    if (std::abs(n * step - horizon) > 1e-12 * std::max(1.0, horizon)) {
        throw ValidationError("grid step must divide the horizon");
    }
    intervals_ = static_cast<std::size_t>(n);
}

std::size_t TimeGrid::node_of(double t) const noexcept {
    if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-15)) return nodes();
    const double k = std::round(t / step_);
    if (std::abs(k * step_ - t) > 1e-9 * step_) return nodes();
    return std::min(static_cast<std::size_t>(k), intervals_);
}

namespace {

void locate(const TimeGrid& grid, double t, std::size_t& k, double& theta) {
    if (!(t >= 0.0) || t > grid.horizon() * (1.0 + 1e-15)) {
        throw ValidationError("time outside [0, T]");
    }
    const double s = t / grid.step();
    auto idx = static_cast<std::size_t>(std::floor(s));
    if (idx >= grid.intervals()) {
        k = grid.intervals() - 1;
        theta = 1.0;
        return;
    }
    k = idx;
    theta = s - static_cast<double>(idx);
}

}  // namespace

double interpolate_linear(const TimeGrid& grid, std::span<const double> values, double t) {
    std::size_t k = 0;
    double theta = 0.0;
    locate(grid, t, k, theta);
    if (theta == 0.0) return values[k];
    if (theta == 1.0) return values[k + 1];
    return values[k] + theta * (values[k + 1] - values[k]);
}

double interpolate_hermite(const TimeGrid& grid, std::span<const double> values,
                           std::span<const double> derivatives, double t) {
    std::size_t k = 0;
    double theta = 0.0;
    locate(grid, t, k, theta);
    if (theta == 0.0) return values[k];
    if (theta == 1.0) return values[k + 1];
    const double h = grid.step();
    const double th2 = theta * theta;
    const double th3 = th2 * theta;
    const double h00 = 2.0 * th3 - 3.0 * th2 + 1.0;
    const double h10 = th3 - 2.0 * th2 + theta;
    const double h01 = -2.0 * th3 + 3.0 * th2;
    const double h11 = th3 - th2;
    return h00 * values[k] + h10 * h * derivatives[k] + h01 * values[k + 1] +
           h11 * h * derivatives[k + 1];
}

}  // namespace lqdiv
