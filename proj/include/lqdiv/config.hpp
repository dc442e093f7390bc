#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lqdiv/model.hpp"
#include "lqdiv/sim.hpp"

namespace lqdiv {

struct StrategySpec {
    std::string type;                  ///< "lq", "mean_reverting" or "barrier"
    double l0 = 0.0;                   ///< mean_reverting
    double l1 = 0.0;                   ///< mean_reverting
    std::optional<double> level;       ///< mean_reverting: l1 = c / level
    std::optional<double> b;           ///< barrier; empty means b*
    std::optional<bool> stop_at_ruin;

    bool operator==(const StrategySpec&) const = default;
};

struct SimulationSection {
    std::size_t n_paths = 2500;
    double step = 1.0 / 400.0;
    std::uint64_t seed = 1;
    std::vector<double> x0_initial;
    std::vector<double> x0_bstar_multiples;
    unsigned workers = 1;
    unsigned noise_refinement = 1;

    bool operator==(const SimulationSection&) const = default;
};

struct OutputSection {
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};

    bool operator==(const OutputSection&) const = default;
};

struct ExperimentConfig {
    ModelParams model;
    LQObjective objective;
    std::vector<StrategySpec> strategies;
    SimulationSection simulation;
    OutputSection output;
};

/// Parses and validates a JSON document. Unknown keys are rejected.
/// Throws ValidationError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON; parse_config(emit_config(c)) reproduces c.
std::string emit_config(const ExperimentConfig& config);

/// Hash of the canonical document, used to tag emitted files.
std::uint64_t config_hash(const ExperimentConfig& config);

SimConfig sim_config(const ExperimentConfig& config);

/// Simulation start points: x0_initial followed by multiples of b* (needs ς, δ̃ > 0).
std::vector<double> initial_surpluses(const ExperimentConfig& config);

bool same_values(const ExperimentConfig& a, const ExperimentConfig& b);

}  // namespace lqdiv
