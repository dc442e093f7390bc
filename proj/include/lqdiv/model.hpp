#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lqdiv/grid.hpp"
#include "lqdiv/time_function.hpp"

namespace lqdiv {

enum class JumpKind { none, normal, exponential, shifted_exponential };

/// Jump-size distribution of the compound Poisson part, with its first two
/// raw moments computed from the parameters.
struct JumpLaw {
    JumpKind kind = JumpKind::none;
    double mean = 0.0;   ///< normal
    double sd = 0.0;     ///< normal
    double rate = 0.0;   ///< exponential families
    double shift = 0.0;  ///< shifted exponential
    int sign = 1;        ///< exponential families: +1 gains, -1 losses
    double p1 = 0.0;
    double p2 = 0.0;
    /// Moments as declared by the user, if any; validate() compares them
    /// against the analytic values.
    std::optional<double> declared_p1;
    std::optional<double> declared_p2;

    static JumpLaw none();
    static JumpLaw normal(double mean, double sd);
    static JumpLaw exponential(double rate, int sign = 1);
    static JumpLaw shifted_exponential(double rate, double shift, int sign = 1);

    /// Maps a uniform in (0, 1) to a jump size by inversion.
    double sample(double uniform) const;

    bool operator==(const JumpLaw&) const = default;
};

/// Analytic (E[Y], E[Y^2]). Throws ValidationError for invalid parameters.
std::pair<double, double> jump_moments(const JumpLaw& law);

const char* to_string(JumpKind kind);

/**
 * Affine lump-sum control i(t, x) = slope(t)·x + intercept(t) tabulated on a
 * grid. Node derivatives are kept so intermediate times can be evaluated by
 * cubic Hermite interpolation.
 */
class LumpControl {
public:
    LumpControl(TimeGrid grid, std::vector<double> slope, std::vector<double> intercept,
                std::vector<double> slope_dt, std::vector<double> intercept_dt);

    /// i(t, x) ≡ value on [0, T].
    static LumpControl constant(const TimeGrid& grid, double value);

    double slope(double t) const;
    double intercept(double t) const;
    double operator()(double t, double x) const { return slope(t) * x + intercept(t); }

    double slope_at(std::size_t k) const noexcept { return slope_[k]; }
    double intercept_at(std::size_t k) const noexcept { return intercept_[k]; }
    const TimeGrid& grid() const noexcept { return grid_; }

private:
    TimeGrid grid_;
    std::vector<double> slope_;
    std::vector<double> intercept_;
    std::vector<double> slope_dt_;
    std::vector<double> intercept_dt_;
};

/// Jumps folded into a jump-free model under a fixed lump control.
struct AbsorbedJumps {
    TimeFunction lambda;
    double p1 = 0.0;
    double p2 = 0.0;
    std::shared_ptr<const LumpControl> control;
};

/// Surplus dynamics dX = c dt + ς dW + dJ − dD on [0, T].
struct ModelParams {
    TimeFunction c{1.0};
    double sigma = 0.0;
    TimeFunction lambda{0.0};
    JumpLaw jumps{};
    double delta = 0.0;        ///< impatience in the LQ objective
    double delta_tilde = 0.05; ///< impatience for dividend valuation
    double horizon = 1.0;
    /// Present only for equivalent-diffusion models.
    std::optional<AbsorbedJumps> absorbed;

    bool has_jumps() const noexcept { return lambda.max_value() > 0.0; }

    /// Drift before dividends, including absorbed jump compensation.
    double drift(double t, double x) const;
    /// Squared diffusion coefficient, including absorbed jump variance.
    double variance(double t, double x) const;
};

/// Linear-quadratic objective weights, benchmarks and terminal constraint.
struct LQObjective {
    TimeFunction l0{0.0};
    TimeFunction l1{0.0};
    TimeFunction x0{0.0};
    TimeFunction gamma{0.0};
    double delta_gamma_T = 0.0;
    TimeFunction gamma_i{1.0};
    double kappa = 0.0;
    int tau = 0;
    double x_T = 0.0;
};

/// All invariant violations of (model, objective); empty means valid.
std::vector<std::string> validate(const ModelParams& model, const LQObjective& objective);
std::vector<std::string> validate(const ModelParams& model);

/// Throws ValidationError listing every violation.
void require_valid(const ModelParams& model, const LQObjective& objective);

std::uint64_t hash_model(const ModelParams& model);
std::uint64_t hash_objective(const LQObjective& objective);

}  // namespace lqdiv
