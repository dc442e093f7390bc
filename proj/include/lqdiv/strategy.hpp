#pragma once

#include <memory>
#include <string>
#include <variant>

#include "lqdiv/model.hpp"
#include "lqdiv/riccati.hpp"

namespace lqdiv {

/// Optimal LQ policy: rate l0 + p + (l1 + 2q)x, lumps (2qx + 2qp1 + p)/(γⁱ + 2q).
struct LQAffine {
    std::shared_ptr<const RiccatiSolution> solution;
    LQObjective objective;
    double p1 = 0.0;  ///< jump mean used by the lump formula
};

/// Rate l0 + l1·x with no lumps; the surplus reverts to (c − l0)/l1.
struct MeanReverting {
    double l0 = 0.0;
    double l1 = 1.0;
};

/// Pays out everything above b. The payout is singular, so the simulator
/// applies it as an overflow after each step.
struct Barrier {
    double b = 1.0;
};

using Strategy = std::variant<LQAffine, MeanReverting, Barrier>;

/// Builds the LQ strategy, checking the second-order condition where λ > 0.
Strategy make_lq_affine(std::shared_ptr<const RiccatiSolution> solution, const ModelParams& model,
                        const LQObjective& objective);
Strategy make_mean_reverting(double l0, double l1);
Strategy make_barrier(double b);

std::string strategy_tag(const Strategy& s);
/// Compact "name=value;..." description for result tables.
std::string strategy_parameters(const Strategy& s);

/// Continuous dividend rate at (t, x). Negative values are capital injections.
double rate(const Strategy& s, double t, double x);

/// Lump payment at a jump epoch with pre-jump surplus x. Zero except for LQAffine.
double lump(const Strategy& s, double t, double x_pre_jump);

/**
 * HJB residual of V = qx² + px + r at (t, x), with the infimum replaced by
 * the closed-form controls. V_t comes from a fourth-order finite difference
 * of the integrated grid, and the jump expectation is evaluated directly
 * from the jump moments, so the residual checks both the integration and
 * the coefficient matching. Exact at nodes; off-grid t is interpolated.
 */
double hjb_residual(const RiccatiSolution& solution, const ModelParams& model,
                    const LQObjective& objective, double t, double x);

/// Zero-drift surplus level (c − l0 − p)/(l1 + 2q) of the LQ-controlled diffusion.
/// Throws SolverError if l1 + 2q ≤ 0.
double mean_reversion_level(const RiccatiSolution& solution, const ModelParams& model,
                            const LQObjective& objective, double t);

/// l̃1 = c / x̃0.
double mr_benchmark_from_level(double c, double level);

}  // namespace lqdiv
