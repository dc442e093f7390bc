#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "lqdiv/config.hpp"

namespace lqdiv {

/// riccati.csv (t,q,p,r) and pv.csv (t,f,g) on the simulation grid.
void cmd_solve(const ExperimentConfig& config, const std::filesystem::path& out,
               std::ostream& log);

/// summary.csv plus paths_x<i>.csv per initial surplus, all strategies on common noise.
void cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& out,
                  std::ostream& log);

struct SweepRange {
    std::string parameter;  ///< l0, l1 or x0
    double from = 0.0;
    double to = 1.0;
    std::size_t points = 11;
    /// Surplus at which V^LQ(0, ·) is reported; defaults to the first initial surplus.
    std::optional<double> x;
};

/// sweep.csv: parameter, value, x, v_lq, status. Solver failures are recorded per row.
void cmd_sweep(const ExperimentConfig& config, const SweepRange& range,
               const std::filesystem::path& out, std::ostream& log);

/// Ladder of initial surpluses in units of b*.
struct CostLadder {
    double from = 0.01;
    double to = 1.0;
    std::size_t points = 100;
};

/// cost.csv: x, V_b, V_LQ, xi. Prints the break-even surplus when bracketed.
void cmd_cost(const ExperimentConfig& config, const CostLadder& ladder,
              const std::filesystem::path& out, std::ostream& log);

struct VerifyOptions {
    double tolerance = 1e-4;              ///< on |residual| / (1 + |V|)
    double equivalence_tolerance = 1e-6;  ///< on max |Δq|, |Δp|, |Δr|
    double perturb_q = 0.0;               ///< relative corruption of q before checking
};

struct VerifyReport {
    double max_residual = 0.0;  ///< max |residual| / (1 + |V|)
    double worst_t = 0.0;
    double worst_x = 0.0;
    std::optional<double> equivalence_deviation;
    bool passed = true;
};

/// verify.csv with one row per check. Never throws on a failed check.
VerifyReport cmd_verify(const ExperimentConfig& config, const VerifyOptions& options,
                        const std::filesystem::path& out, std::ostream& log);

}  // namespace lqdiv
