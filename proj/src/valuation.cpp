#include "lqdiv/valuation.hpp"

#include <cmath>
#include <sstream>

#include "lqdiv/error.hpp"

namespace lqdiv {

BarrierRoots barrier_roots(double c, double sigma, double delta_tilde) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ValidationError("barrier roots need sigma > 0");
    }
    if (!(delta_tilde > 0.0) || !std::isfinite(delta_tilde) || !std::isfinite(c)) {
        throw ValidationError("barrier roots need delta_tilde > 0 and finite c");
    }
    const double s2 = sigma * sigma;
    const double disc = std::sqrt(c * c + 2.0 * delta_tilde * s2);
    // Same roots as (−c ± disc)/ς², arranged to avoid cancellation.
    BarrierRoots out{0.0, 0.0, c, sigma, delta_tilde};
    if (c >= 0.0) {
        out.s = (-c - disc) / s2;
        out.r = 2.0 * delta_tilde / (c + disc);
    } else {
        out.r = (-c + disc) / s2;
        out.s = -2.0 * delta_tilde / (disc - c);
    }
    return out;
}

double barrier_value(double x, double b, const BarrierRoots& roots) {
    if (!(b > 0.0)) throw ValidationError("barrier must be > 0");
    if (!(x >= 0.0) || x > b) {
        std::ostringstream msg;
        msg << "barrier value needs 0 <= x <= b (x=" << x << ", b=" << b << ")";
        throw ValidationError(msg.str());
    }
    const double num = std::exp(roots.r * x) - std::exp(roots.s * x);
    const double den = roots.r * std::exp(roots.r * b) - roots.s * std::exp(roots.s * b);
    return num / den;
}

double optimal_barrier(const BarrierRoots& roots) {
    return 2.0 * std::log(-roots.s / roots.r) / (roots.r - roots.s);
}

double pv_affine(const PVCoefficients& pv, double t, double x) {
    return interpolate_linear(pv.grid, pv.f, t) * x + interpolate_linear(pv.grid, pv.g, t);
}

double cost_of_smoothing(const PVCoefficients& pv, const BarrierRoots& roots, double b_star,
                         double t, double x) {
    const double f = interpolate_linear(pv.grid, pv.f, t);
    if (!(std::abs(f) > 1e-8)) {
        throw SolverError("cost of smoothing undefined: f(t) is numerically zero", t);
    }
    const double g = interpolate_linear(pv.grid, pv.g, t);
    return (barrier_value(x, b_star, roots) - g - f * x) / f;
}

std::optional<double> smoothing_breakeven(const PVCoefficients& pv, const BarrierRoots& roots,
                                          double b_star, double t, double lo, double hi) {
    double flo = cost_of_smoothing(pv, roots, b_star, t, lo);
    const double fhi = cost_of_smoothing(pv, roots, b_star, t, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo < 0.0) == (fhi < 0.0)) return std::nullopt;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = cost_of_smoothing(pv, roots, b_star, t, mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace lqdiv
