#pragma once

#include <optional>

#include "lqdiv/riccati.hpp"

namespace lqdiv {

/// Roots r > 0 > s of ½ς²z² + cz − δ̃ = 0.
struct BarrierRoots {
    double r = 0.0;
    double s = 0.0;
    double c = 0.0;
    double sigma = 0.0;
    double delta_tilde = 0.0;
};

/// Throws ValidationError unless ς > 0 and δ̃ > 0.
BarrierRoots barrier_roots(double c, double sigma, double delta_tilde);

/// Expected discounted dividends until ruin under barrier b, for 0 ≤ x ≤ b:
/// (e^{rx} − e^{sx}) / (r e^{rb} − s e^{sb}).
double barrier_value(double x, double b, const BarrierRoots& roots);

/// b* = ln(s²/r²)/(r − s): the minimiser of the denominator r e^{rb} − s e^{sb}.
double optimal_barrier(const BarrierRoots& roots);

/// V^LQ(t, x) = f(t)x + g(t), linear in t between nodes.
double pv_affine(const PVCoefficients& pv, double t, double x);

/// Extra initial surplus ξ with V^LQ(t, x + ξ) = V^b(x). Throws SolverError if |f(t)| ≤ 1e-8.
double cost_of_smoothing(const PVCoefficients& pv, const BarrierRoots& roots, double b_star,
                         double t, double x);

/// Root of ξ(t, ·) in [lo, hi] by bisection, if the endpoints bracket one.
std::optional<double> smoothing_breakeven(const PVCoefficients& pv, const BarrierRoots& roots,
                                          double b_star, double t, double lo, double hi);

}  // namespace lqdiv
