#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lqdiv/commands.hpp"
#include "lqdiv/config.hpp"
#include "lqdiv/error.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> paths;
    std::optional<double> step;
    std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "Experiment config (JSON)")->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", c.out, "Output directory (default: config output.directory)");
    cmd->add_option("--seed", c.seed, "Override simulation.seed");
    cmd->add_option("--paths", c.paths, "Override simulation.n_paths")->check(CLI::PositiveNumber);
    cmd->add_option("--step", c.step, "Override simulation.step")->check(CLI::PositiveNumber);
    cmd->add_option("--workers", c.workers, "Worker threads, 0 = all cores");
}

lqdiv::ExperimentConfig load(const Common& c) {
    auto cfg = lqdiv::load_config(c.config);
    if (c.seed) cfg.simulation.seed = *c.seed;
    if (c.paths) cfg.simulation.n_paths = *c.paths;
    if (c.step) cfg.simulation.step = *c.step;
    if (c.workers) cfg.simulation.workers = *c.workers;
    if (!c.out.empty()) cfg.output.directory = c.out;
    // Overrides go through the same validation as the file.
    return lqdiv::parse_config(lqdiv::emit_config(cfg));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LQ dividend control: Riccati solver, valuation and Monte Carlo comparison"};
    app.require_subcommand(1);

    Common solve_opts, sim_opts, sweep_opts, cost_opts, verify_opts;
    auto* solve = app.add_subcommand("solve", "Riccati and PV coefficient tables");
    add_common(solve, solve_opts);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo comparison of strategies");
    add_common(simulate, sim_opts);

    lqdiv::SweepRange range;
    double sweep_x = 0.0;
    auto* sweep = app.add_subcommand("sweep", "V^LQ(0, x) against a benchmark parameter");
    add_common(sweep, sweep_opts);
    sweep->add_option("--param", range.parameter, "l0, l1 or x0")
        ->required()
        ->check(CLI::IsMember({"l0", "l1", "x0"}));
    sweep->add_option("--from", range.from)->required();
    sweep->add_option("--to", range.to)->required();
    sweep->add_option("--points", range.points)->capture_default_str();
    auto* sweep_x_opt = sweep->add_option("--x", sweep_x, "Initial surplus (default: first x0)");

    lqdiv::CostLadder ladder;
    auto* cost = app.add_subcommand("cost", "Cost of smoothing xi(0, x) on a ladder in units of b*");
    add_common(cost, cost_opts);
    cost->add_option("--from", ladder.from)->capture_default_str();
    cost->add_option("--to", ladder.to)->capture_default_str();
    cost->add_option("--points", ladder.points)->capture_default_str();

    lqdiv::VerifyOptions vopt;
    auto* verify = app.add_subcommand("verify", "HJB residual and jump/diffusion consistency");
    add_common(verify, verify_opts);
    verify->add_option("--tolerance", vopt.tolerance)->capture_default_str();
    verify->add_option("--equivalence-tolerance", vopt.equivalence_tolerance)
        ->capture_default_str();
    verify->add_option("--perturb-q", vopt.perturb_q, "Relative corruption of q (sensitivity probe)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*solve) {
            const auto cfg = load(solve_opts);
            lqdiv::cmd_solve(cfg, cfg.output.directory, std::cout);
        } else if (*simulate) {
            const auto cfg = load(sim_opts);
            lqdiv::cmd_simulate(cfg, cfg.output.directory, std::cout);
        } else if (*sweep) {
            const auto cfg = load(sweep_opts);
            if (*sweep_x_opt) range.x = sweep_x;
            lqdiv::cmd_sweep(cfg, range, cfg.output.directory, std::cout);
        } else if (*cost) {
            const auto cfg = load(cost_opts);
            lqdiv::cmd_cost(cfg, ladder, cfg.output.directory, std::cout);
        } else if (*verify) {
            const auto cfg = load(verify_opts);
            if (!lqdiv::cmd_verify(cfg, vopt, cfg.output.directory, std::cout).passed) return 2;
        }
    } catch (const lqdiv::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const lqdiv::SolverError& e) {
        std::cerr << "solver failure: " << e.what();
        if (e.time() >= 0.0) std::cerr << " (t=" << e.time() << ")";
        std::cerr << "\n";
        return 2;
    } catch (const lqdiv::SimulationError& e) {
        std::cerr << "simulation failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
