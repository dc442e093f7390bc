#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lqdiv/model.hpp"
#include "lqdiv/strategy.hpp"

namespace lqdiv {

struct SimConfig {
    std::size_t n_paths = 2500;
    double step = 1.0 / 400.0;
    double horizon = 200.0;
    std::uint64_t seed = 1;
    /// Strategies in one comparison share Brownian increments and jump marks.
    bool common_noise = true;
    /// Overrides the per-strategy default (LQ never stops; others stop at ruin).
    std::optional<bool> stop_at_ruin;
    /// Worker threads; 0 means hardware concurrency. Never affects results.
    unsigned workers = 1;
    /// Each step's Brownian increment is the sum of this many sub-increments,
    /// so a run at step h with refinement 2k shares its path with a run at h/2
    /// with refinement k.
    unsigned noise_refinement = 1;
};

struct PathRecord {
    double pv = 0.0;                    ///< discounted dividends, δ̃
    std::optional<double> ruin_time;    ///< first node time with X ≤ 0, if stopped
    double injected = 0.0;              ///< total magnitude of negative payments
    std::uint32_t n_injections = 0;     ///< steps or jumps with a negative payment
    double objective = 0.0;             ///< LQ objective along the path, if requested
    double terminal_surplus = 0.0;
};

struct SimResult {
    std::vector<PathRecord> records;
    double mean = 0.0;
    double sd = 0.0;
    std::size_t ruin_count = 0;
    std::string strategy;
    std::uint64_t config_hash = 0;

    double standard_error() const;
};

bool default_stop_at_ruin(const Strategy& s);

/**
 * Euler-Maruyama paths of X ← X + (drift − rate)h + √var·ΔW, with compound
 * Poisson jumps by thinning and lump payments at jump epochs. Barrier
 * strategies step uncontrolled and then pay the overflow above b.
 *
 * Payments at rate l over a step are weighted by ∫ e^{−δ̃s} ds over that
 * step; lumps are discounted at their epoch.
 */
SimResult simulate(const ModelParams& model, const Strategy& strategy, double x0,
                   const SimConfig& cfg);

struct ObjectiveEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::vector<double> per_path;
};

/// Monte Carlo estimate of the LQ objective of `strategy` started at x0.
ObjectiveEstimate estimate_lq_objective(const ModelParams& model, const LQObjective& objective,
                                        const Strategy& strategy, double x0,
                                        const SimConfig& cfg);

struct PairedTable {
    std::vector<SimResult> results;  ///< one per strategy, path-aligned

    std::size_t n_paths() const { return results.empty() ? 0 : results.front().records.size(); }
    double pv(std::size_t path, std::size_t strategy) const {
        return results[strategy].records[path].pv;
    }
    bool ruined(std::size_t path, std::size_t strategy) const {
        return results[strategy].records[path].ruin_time.has_value();
    }
};

/// All strategies driven by identical noise per path index. Requires
/// cfg.common_noise. `stop_flags`, when non-empty, overrides stopping per strategy.
PairedTable paired_compare(const ModelParams& model, std::span<const Strategy> strategies,
                           double x0, const SimConfig& cfg,
                           std::span<const bool> stop_flags = {});

}  // namespace lqdiv
