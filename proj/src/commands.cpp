#include "lqdiv/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>

#include "lqdiv/csv.hpp"
#include "lqdiv/error.hpp"
#include "lqdiv/riccati.hpp"
#include "lqdiv/strategy.hpp"
#include "lqdiv/valuation.hpp"

namespace lqdiv {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + (dir / name).string());
    return out;
}

std::string provenance(const ExperimentConfig& c) {
    return "config_hash=" + hex64(config_hash(c)) + ",seed=" + std::to_string(c.simulation.seed);
}

TimeGrid solve_grid(const ExperimentConfig& c) {
    return TimeGrid(c.model.horizon, c.simulation.step);
}

std::optional<double> try_optimal_barrier(const ModelParams& m) {
    if (!(m.sigma > 0.0) || !(m.delta_tilde > 0.0) || !m.c.is_constant()) return std::nullopt;
    return optimal_barrier(barrier_roots(m.c(0.0), m.sigma, m.delta_tilde));
}

BarrierRoots diffusion_roots(const ExperimentConfig& c) {
    if (c.model.has_jumps()) throw ValidationError("this command needs a diffusion-only model");
    if (!c.model.c.is_constant()) throw ValidationError("this command needs a constant drift c");
    return barrier_roots(c.model.c(0.0), c.model.sigma, c.model.delta_tilde);
}

}  // namespace

void cmd_solve(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    const TimeGrid grid = solve_grid(c);
    const RiccatiSolution sol = solve_riccati(c.model, c.objective, grid);
    const PVCoefficients pv = solve_pv_coefficients(c.model, c.objective, sol, grid);
    const std::string tag = provenance(c);

    auto rf = open_output(out, "riccati.csv");
    CsvWriter rw(rf);
    rw.comment(tag).header({"t", "q", "p", "r"});
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
        rw.cell(grid.time(k)).cell(sol.q[k]).cell(sol.p[k]).cell(sol.r[k]).end_row();
    }
    auto pf = open_output(out, "pv.csv");
    CsvWriter pw(pf);
    pw.comment(tag).header({"t", "f", "g"});
    for (std::size_t k = 0; k < grid.nodes(); ++k) {
        pw.cell(grid.time(k)).cell(pv.f[k]).cell(pv.g[k]).end_row();
    }

    const std::size_t n = grid.intervals();
    log << "terminal q(T)=" << format_number(sol.q[n]) << " p(T)=" << format_number(sol.p[n])
        << " r(T)=" << format_number(sol.r[n]) << "\n";
    const auto so = second_order_status(sol, c.model, c.objective);
    if (c.model.has_jumps()) {
        log << "second-order condition " << (so.ok ? "ok" : "violated")
            << ": min gamma_i+2q=" << format_number(so.worst_margin)
            << " at t=" << format_number(so.worst_time) << "\n";
    } else {
        log << "second-order condition ok: no jumps\n";
    }
    log << "l1+2q(0)=" << format_number(c.objective.l1(0.0) + 2.0 * sol.q[0])
        << " l0+p(0)=" << format_number(c.objective.l0(0.0) + sol.p[0]) << "\n";
}

void cmd_simulate(const ExperimentConfig& c, const fs::path& out, std::ostream& log) {
    if (c.strategies.empty()) throw ValidationError("config.strategies is empty");
    const std::vector<double> xs = initial_surpluses(c);
    if (xs.empty()) {
        throw ValidationError("simulation needs x0_initial or x0_bstar_multiples");
    }
    const SimConfig sim = sim_config(c);
    const std::optional<double> b_star = try_optimal_barrier(c.model);

    std::vector<Strategy> strategies;
    std::vector<char> flags;
    std::shared_ptr<const RiccatiSolution> solution;
    for (const auto& spec : c.strategies) {
        if (spec.type == "lq") {
            if (!solution) {
                solution = std::make_shared<const RiccatiSolution>(
                    solve_riccati(c.model, c.objective, solve_grid(c)));
            }
            strategies.push_back(make_lq_affine(solution, c.model, c.objective));
        } else if (spec.type == "mean_reverting") {
            const double l1 =
                spec.level ? mr_benchmark_from_level(c.model.c(0.0), *spec.level) : spec.l1;
            strategies.push_back(make_mean_reverting(spec.l0, l1));
        } else {
            if (!spec.b && !b_star) {
                throw ValidationError("b = \"optimal\" needs sigma > 0, delta_tilde > 0 and "
                                      "constant c");
            }
            strategies.push_back(make_barrier(spec.b ? *spec.b : *b_star));
        }
        flags.push_back(spec.stop_at_ruin.value_or(default_stop_at_ruin(strategies.back())));
    }
    // std::vector<bool> is not contiguous, so the flags go through a plain array.
    auto stop = std::make_unique<bool[]>(flags.size());
    std::copy(flags.begin(), flags.end(), stop.get());

    const std::string tag = provenance(c);
    auto sf = open_output(out, "summary.csv");
    CsvWriter sw(sf);
    sw.comment(tag).header(
        {"x", "strategy", "mean", "sd", "b_star", "ruin_count", "parameters"});

    for (std::size_t i = 0; i < xs.size(); ++i) {
        const PairedTable table = paired_compare(c.model, strategies, xs[i], sim,
                                                 std::span<const bool>(stop.get(), flags.size()));
        auto pf = open_output(out, "paths_x" + std::to_string(i) + ".csv");
        CsvWriter pw(pf);
        pw.comment(tag + ",x=" + format_number(xs[i]))
            .header({"path_id", "strategy", "pv", "ruin_time", "n_injections"});
        for (std::size_t s = 0; s < strategies.size(); ++s) {
            const SimResult& res = table.results[s];
            sw.cell(xs[i]).cell(res.strategy).cell(res.mean).cell(res.sd);
            if (b_star) {
                sw.cell(*b_star);
            } else {
                sw.empty();
            }
            sw.cell(static_cast<std::uint64_t>(res.ruin_count))
                .cell(strategy_parameters(strategies[s]))
                .end_row();
            for (std::size_t p = 0; p < res.records.size(); ++p) {
                const PathRecord& r = res.records[p];
                pw.cell(static_cast<std::uint64_t>(p)).cell(res.strategy).cell(r.pv);
                if (r.ruin_time) {
                    pw.cell(*r.ruin_time);
                } else {
                    pw.empty();
                }
                pw.cell(static_cast<std::uint64_t>(r.n_injections)).end_row();
            }
            log << "x=" << format_number(xs[i]) << " " << res.strategy
                << " mean=" << format_number(res.mean) << " sd=" << format_number(res.sd)
                << " ruined=" << res.ruin_count << "/" << res.records.size() << "\n";
        }
    }
}

void cmd_sweep(const ExperimentConfig& c, const SweepRange& range, const fs::path& out,
               std::ostream& log) {
    if (c.model.has_jumps()) throw ValidationError("sweep needs a diffusion-only model");
    if (range.parameter != "l0" && range.parameter != "l1" && range.parameter != "x0") {
        throw ValidationError("sweep parameter must be l0, l1 or x0");
    }
    if (range.points == 0) throw ValidationError("sweep needs at least one point");
    double x = 0.0;
    if (range.x) {
        x = *range.x;
    } else {
        const auto xs = initial_surpluses(c);
        if (xs.empty()) throw ValidationError("sweep needs --x or an initial surplus in config");
        x = xs.front();
    }
    const TimeGrid grid = solve_grid(c);

    auto f = open_output(out, "sweep.csv");
    CsvWriter w(f);
    w.comment(provenance(c)).header({"parameter", "value", "x", "v_lq", "status"});
    for (std::size_t i = 0; i < range.points; ++i) {
        const double v = range.points == 1
                             ? range.from
                             : range.from + (range.to - range.from) * static_cast<double>(i) /
                                                static_cast<double>(range.points - 1);
        LQObjective o = c.objective;
        if (range.parameter == "l0") o.l0 = v;
        if (range.parameter == "l1") o.l1 = v;
        if (range.parameter == "x0") o.x0 = v;
        w.cell(range.parameter).cell(v).cell(x);
        try {
            require_valid(c.model, o);
            const RiccatiSolution sol = solve_riccati(c.model, o, grid);
            const PVCoefficients pv = solve_pv_coefficients(c.model, o, sol, grid);
            w.cell(pv_affine(pv, 0.0, x)).cell("ok");
        } catch (const SolverError& e) {
            w.empty().cell(std::string("solver_error: ") + e.what());
            log << range.parameter << "=" << format_number(v) << ": " << e.what() << "\n";
        } catch (const ValidationError& e) {
            w.empty().cell(std::string("invalid: ") + e.what());
            log << range.parameter << "=" << format_number(v) << ": " << e.what() << "\n";
        }
        w.end_row();
    }
}

void cmd_cost(const ExperimentConfig& c, const CostLadder& ladder, const fs::path& out,
              std::ostream& log) {
    const BarrierRoots roots = diffusion_roots(c);
    if (ladder.points == 0) throw ValidationError("cost ladder needs at least one point");
    if (ladder.from < 0.0 || ladder.to > 1.0 || ladder.from > ladder.to) {
        throw ValidationError("cost ladder must lie in [0, 1] in units of b*");
    }
    const double b = optimal_barrier(roots);
    const TimeGrid grid = solve_grid(c);
    const RiccatiSolution sol = solve_riccati(c.model, c.objective, grid);
    const PVCoefficients pv = solve_pv_coefficients(c.model, c.objective, sol, grid);

    auto f = open_output(out, "cost.csv");
    CsvWriter w(f);
    w.comment(provenance(c)).header({"x", "V_b", "V_LQ", "xi"});
    for (std::size_t i = 0; i < ladder.points; ++i) {
        const double m = ladder.points == 1
                             ? ladder.from
                             : ladder.from + (ladder.to - ladder.from) * static_cast<double>(i) /
                                                 static_cast<double>(ladder.points - 1);
        const double x = m * b;
        w.cell(x)
            .cell(barrier_value(x, b, roots))
            .cell(pv_affine(pv, 0.0, x))
            .cell(cost_of_smoothing(pv, roots, b, 0.0, x))
            .end_row();
    }
    log << "b*=" << format_number(b) << "\n";
    if (const auto root = smoothing_breakeven(pv, roots, b, 0.0, 0.0, b)) {
        log << "xi=0 at x=" << format_number(*root) << "\n";
    } else {
        log << "xi does not change sign on [0, b*]\n";
    }
}

VerifyReport cmd_verify(const ExperimentConfig& c, const VerifyOptions& opt, const fs::path& out,
                        std::ostream& log) {
    const TimeGrid grid = solve_grid(c);
    RiccatiSolution sol = solve_riccati(c.model, c.objective, grid);
    if (opt.perturb_q != 0.0) {
        for (double& q : sol.q) q *= 1.0 + opt.perturb_q;
    }

    VerifyReport rep;
    const double x_scale = std::max({1.0, c.objective.x0.max_value(), c.objective.x_T});
    const std::size_t stride = std::max<std::size_t>(1, grid.intervals() / 400);
    for (std::size_t k = 0; k < grid.nodes(); k += stride) {
        const double t = grid.time(k);
        for (int j = 0; j <= 40; ++j) {
            const double x = 0.1 * j * x_scale;
            const double res = hjb_residual(sol, c.model, c.objective, t, x);
            const double scaled = std::abs(res) / (1.0 + std::abs(sol.value(k, x)));
            if (!(scaled <= rep.max_residual)) {
                rep.max_residual = scaled;
                rep.worst_t = t;
                rep.worst_x = x;
            }
        }
    }
    const bool residual_ok = rep.max_residual <= opt.tolerance;

    bool equivalence_ok = true;
    if (c.model.has_jumps()) {
        const RiccatiSolution jump = solve_riccati(c.model, c.objective, grid);
        const LumpControl control = optimal_lump_control(jump, c.model, c.objective);
        const ModelParams eq = equivalent_diffusion(c.model, control);
        const RiccatiSolution diff = solve_riccati(eq, c.objective, grid);
        double dev = 0.0;
        for (std::size_t k = 0; k < grid.nodes(); ++k) {
            dev = std::max({dev, std::abs(jump.q[k] - diff.q[k]), std::abs(jump.p[k] - diff.p[k]),
                            std::abs(jump.r[k] - diff.r[k])});
        }
        rep.equivalence_deviation = dev;
        equivalence_ok = dev <= opt.equivalence_tolerance;
    }
    rep.passed = residual_ok && equivalence_ok;

    auto f = open_output(out, "verify.csv");
    CsvWriter w(f);
    w.comment(provenance(c)).header({"check", "value", "tolerance", "pass"});
    w.cell("hjb_residual").cell(rep.max_residual).cell(opt.tolerance)
        .cell(residual_ok ? "true" : "false").end_row();
    if (rep.equivalence_deviation) {
        w.cell("jump_vs_diffusion").cell(*rep.equivalence_deviation)
            .cell(opt.equivalence_tolerance).cell(equivalence_ok ? "true" : "false").end_row();
    }

    log << "max scaled HJB residual " << format_number(rep.max_residual) << " at t="
        << format_number(rep.worst_t) << " x=" << format_number(rep.worst_x) << " ("
        << (residual_ok ? "pass" : "FAIL") << ", tolerance " << format_number(opt.tolerance)
        << ")\n";
    if (rep.equivalence_deviation) {
        log << "jump vs equivalent diffusion max |dq,dp,dr| "
            << format_number(*rep.equivalence_deviation) << " ("
            << (equivalence_ok ? "pass" : "FAIL") << ")\n";
    }
    log << (rep.passed ? "verify: pass\n" : "verify: FAIL\n");
    return rep;
}

}  // namespace lqdiv
