#pragma once

#include <cstdint>
#include <vector>

#include "lqdiv/grid.hpp"
#include "lqdiv/model.hpp"

namespace lqdiv {

struct Qpr {
    double q = 0.0;
    double p = 0.0;
    double r = 0.0;
};

/**
 * Quadratic value function V(t, x) = q(t)x² + p(t)x + r(t) on a grid.
 *
 * dq, dp, dr hold the ODE right-hand sides at the nodes; they are used for
 * Hermite interpolation between nodes, never for verification.
 */
struct RiccatiSolution {
    TimeGrid grid;
    std::vector<double> q, p, r;
    std::vector<double> dq, dp, dr;
    std::uint64_t model_hash = 0;
    std::uint64_t objective_hash = 0;

    double value(std::size_t k, double x) const { return (q[k] * x + p[k]) * x + r[k]; }
};

/// Value-of-dividends coefficients V^LQ(t, x) = f(t)x + g(t).
struct PVCoefficients {
    TimeGrid grid;
    std::vector<double> f, g;
};

/// (q, p, r) at T from the boundary condition V(T,x) = κ(x−x_T)^τ + ΔΓ(T)(x−x0(T))².
Qpr terminal_conditions(const LQObjective& objective, double horizon);

/// Right-hand side (q_t, p_t, r_t) of the coefficient-matched Riccati system.
/// `left` selects left limits of piecewise-constant inputs at breakpoints.
Qpr riccati_rhs(const ModelParams& model, const LQObjective& objective, double t, const Qpr& y,
                bool left = false);

/**
 * Integrates the Riccati system backward from T with fixed-step RK4.
 *
 * Jump models use the optimal lump control; equivalent-diffusion models use
 * their absorbed control. Throws SolverError when γⁱ+2q ≤ 0 while λ > 0, or
 * when the state stops being finite.
 */
RiccatiSolution solve_riccati(const ModelParams& model, const LQObjective& objective,
                              const TimeGrid& grid);

/// Linear interpolation between nodes; exact at nodes.
Qpr eval_qpr(const RiccatiSolution& solution, double t);

/// Hermite-interpolated (q, p): fourth-order accurate between nodes.
Qpr eval_qpr_smooth(const RiccatiSolution& solution, double t);

/**
 * Backward RK4 solve of
 *   f_t = f(δ̃ + l1 + 2q) − (l1 + 2q),
 *   g_t = gδ̃ + f(l0 + p − c) − (l0 + p),   f(T) = g(T) = 0.
 * With jumps (or absorbed jumps) the lump dividends λ·i are included, which
 * adds λ·slope to both rates in the f-equation and λ(p1 − intercept), λ·intercept
 * to the g-equation.
 */
PVCoefficients solve_pv_coefficients(const ModelParams& model, const LQObjective& objective,
                                     const RiccatiSolution& solution, const TimeGrid& grid);

/// Optimal lump control i*(t,x) = (2q x + 2q p1 + p)/(γⁱ + 2q) tabulated on the grid.
LumpControl optimal_lump_control(const RiccatiSolution& solution, const ModelParams& model,
                                 const LQObjective& objective);

/// Jump-free model whose drift gains λ(p1 − i) and variance gains λ(p2 + i² − 2p1 i).
/// Returns the input unchanged when it has no jumps.
ModelParams equivalent_diffusion(const ModelParams& model, const LumpControl& control);

struct SecondOrderStatus {
    bool ok = true;
    double worst_margin = 0.0;  ///< min over nodes with λ>0 of γⁱ+2q
    double worst_time = 0.0;
};

SecondOrderStatus second_order_status(const RiccatiSolution& solution, const ModelParams& model,
                                      const LQObjective& objective);

}  // namespace lqdiv
