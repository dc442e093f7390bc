#include "lqdiv/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "lqdiv/error.hpp"
#include "lqdiv/hash.hpp"
#include "lqdiv/random.hpp"

namespace lqdiv {

double SimResult::standard_error() const {
    return records.empty() ? 0.0 : sd / std::sqrt(static_cast<double>(records.size()));
}

bool default_stop_at_ruin(const Strategy& s) { return !std::holds_alternative<LQAffine>(s); }

namespace {

/// Left-endpoint coefficient tables for steps k = 0..N-1.
struct Tables {
    std::size_t steps = 0;
    double h = 0.0;
    double horizon = 0.0;
    std::vector<double> c, w, wd;
    std::vector<double> alpha, beta;         // LQ rate intercept/slope
    std::vector<double> l0, l1, x0, gamma;   // objective
    std::vector<double> lam_a, slope, icpt;  // absorbed jumps
    double terminal_discount = 1.0;          // e^{−δT}
};

double step_weight(double rate, double t0, double t1) {
    if (rate == 0.0) return t1 - t0;
    return (std::exp(-rate * t0) - std::exp(-rate * t1)) / rate;
}

struct Context {
    const ModelParams& model;
    const SimConfig& cfg;
    const Strategy& strategy;
    const LQObjective* objective;
    double x0 = 0.0;
    bool stop_at_ruin = false;
    std::uint64_t seed = 0;
    double lambda_bar = 0.0;
    Tables tab;
};

Tables build_tables(const ModelParams& m, const Strategy& s, const LQObjective* o,
                    const TimeGrid& grid) {
    Tables tab;
    tab.steps = grid.intervals();
    tab.h = grid.step();
    tab.horizon = grid.horizon();
    const std::size_t n = tab.steps;
    tab.c.resize(n);
    tab.w.resize(n);
    tab.wd.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = grid.time(k), t1 = grid.time(k + 1);
        tab.c[k] = m.c(t0);
        tab.w[k] = step_weight(m.delta_tilde, t0, t1);
        tab.wd[k] = step_weight(m.delta, t0, t1);
    }
    if (const auto* lq = std::get_if<LQAffine>(&s)) {
        const auto& sol = *lq->solution;
        tab.alpha.resize(n);
        tab.beta.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = grid.time(k);
            tab.alpha[k] = lq->objective.l0(t) + sol.p[k];
            tab.beta[k] = lq->objective.l1(t) + 2.0 * sol.q[k];
        }
    }
    if (o) {
        tab.l0.resize(n);
        tab.l1.resize(n);
        tab.x0.resize(n);
        tab.gamma.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = grid.time(k);
            tab.l0[k] = o->l0(t);
            tab.l1[k] = o->l1(t);
            tab.x0[k] = o->x0(t);
            tab.gamma[k] = o->gamma(t);
        }
        tab.terminal_discount = std::exp(-m.delta * grid.horizon());
    }
    if (m.absorbed && m.absorbed->lambda.max_value() > 0.0) {
        tab.lam_a.resize(n);
        tab.slope.resize(n);
        tab.icpt.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = grid.time(k);
            tab.lam_a[k] = m.absorbed->lambda(t);
            tab.slope[k] = m.absorbed->control->slope(t);
            tab.icpt[k] = m.absorbed->control->intercept(t);
        }
    }
    return tab;
}

double terminal_penalty(const LQObjective& o, double horizon, double x) {
    const double dx = x - o.x0(horizon);
    double v = o.delta_gamma_T * dx * dx;
    if (o.tau == 1) v += o.kappa * (x - o.x_T);
    if (o.tau == 2) v += o.kappa * (x - o.x_T) * (x - o.x_T);
    return v;
}

void record_payment(PathRecord& rec, double amount) {
    if (amount < 0.0) {
        rec.injected -= amount;
        ++rec.n_injections;
    }
}

template <typename S>
PathRecord run_path(const Context& ctx, const S& strat, std::size_t path) {
    constexpr bool is_lq = std::is_same_v<S, LQAffine>;
    constexpr bool is_barrier = std::is_same_v<S, Barrier>;

    const auto& m = ctx.model;
    const auto& tab = ctx.tab;
    const LQObjective* obj = ctx.objective;
    const double h = tab.h;
    const unsigned refine = ctx.cfg.noise_refinement;
    const double sub_sd = std::sqrt(h / refine);
    const double sigma2 = m.sigma * m.sigma;
    const bool absorbed = !tab.lam_a.empty();
    const double ab_p1 = absorbed ? m.absorbed->p1 : 0.0;
    const double ab_p2 = absorbed ? m.absorbed->p2 : 0.0;

    const CounterStream brown(ctx.seed, path, CounterStream::brownian);
    const CounterStream jumps(ctx.seed, path, CounterStream::jumps);
    std::uint64_t jump_counter = 0;
    double next_epoch = INFINITY;
    auto draw_epoch = [&](double from) {
        next_epoch = from - std::log(jumps.uniform(3 * jump_counter)) / ctx.lambda_bar;
    };
    if (ctx.lambda_bar > 0.0) draw_epoch(0.0);

    PathRecord rec;
    double x = ctx.x0;
    if constexpr (is_barrier) {
        if (x > strat.b) {
            rec.pv += x - strat.b;
            x = strat.b;
        }
    }
    if (ctx.stop_at_ruin && x <= 0.0) {
        rec.ruin_time = 0.0;
        rec.terminal_surplus = x;
        return rec;
    }

    for (std::size_t k = 0; k < tab.steps; ++k) {
        const double t1 = k + 1 == tab.steps ? tab.horizon : static_cast<double>(k + 1) * h;

        double l = 0.0;
        if constexpr (is_lq) {
            l = tab.alpha[k] + tab.beta[k] * x;
        } else if constexpr (!is_barrier) {
            l = strat.l0 + strat.l1 * x;
        }
        rec.pv += l * tab.w[k];
        record_payment(rec, l);

        double drift = tab.c[k] - l;
        double var = sigma2;
        if (absorbed) {
            const double lam = tab.lam_a[k];
            const double i = tab.slope[k] * x + tab.icpt[k];
            drift += lam * (ab_p1 - i);
            var += lam * (ab_p2 + i * i - 2.0 * ab_p1 * i);
            // Compensator of the lump dividends and their penalty.
            rec.pv += lam * i * tab.w[k];
            if (obj) rec.objective += 0.5 * obj->gamma_i(static_cast<double>(k) * h) * lam * i * i *
                                      tab.wd[k];
        }
        if (obj) {
            const double track = l - tab.l0[k] - tab.l1[k] * x;
            const double dev = x - tab.x0[k];
            rec.objective += 0.5 * (track * track + tab.gamma[k] * dev * dev) * tab.wd[k];
        }

        double dz = 0.0;
        if (refine == 1) {
            dz = brown.normal(k);
        } else {
            const std::uint64_t base = static_cast<std::uint64_t>(k) * refine;
            for (unsigned j = 0; j < refine; ++j) dz += brown.normal(base + j);
        }
        double xn = x + drift * h + std::sqrt(var) * sub_sd * dz;

        while (next_epoch <= t1) {
            const double tau = next_epoch;
            const double u_accept = jumps.uniform(3 * jump_counter + 1);
            const double u_mark = jumps.uniform(3 * jump_counter + 2);
            ++jump_counter;
            draw_epoch(tau);
            if (!(u_accept * ctx.lambda_bar < m.lambda(tau))) continue;
            const double y = m.jumps.sample(u_mark);
            double i = 0.0;
            if constexpr (is_lq) i = lump(ctx.strategy, tau, xn);
            xn += y - i;
            if (i != 0.0) {
                rec.pv += std::exp(-m.delta_tilde * tau) * i;
                record_payment(rec, i);
                if (obj) {
                    rec.objective += 0.5 * obj->gamma_i(tau) * i * i * std::exp(-m.delta * tau);
                }
            }
        }

        if constexpr (is_barrier) {
            if (xn > strat.b) {
                rec.pv += (xn - strat.b) * tab.w[k] / h;
                xn = strat.b;
            }
        }
        if (!std::isfinite(xn)) {
            throw SimulationError("non-finite surplus on path " + std::to_string(path) +
                                  " at t=" + std::to_string(t1));
        }
        x = xn;
        if (ctx.stop_at_ruin && x <= 0.0) {
            rec.ruin_time = t1;
            break;
        }
    }
    rec.terminal_surplus = x;
    if (obj && !rec.ruin_time) {
        rec.objective += tab.terminal_discount * terminal_penalty(*obj, tab.horizon, x);
    }
    return rec;
}

std::uint64_t config_hash(const ModelParams& model, const Strategy& s, double x0,
                          const SimConfig& cfg, bool stop) {
    Fnv1a h;
    h.add(hash_model(model))
        .add(static_cast<std::uint64_t>(cfg.n_paths))
        .add(cfg.step)
        .add(cfg.horizon)
        .add(cfg.seed)
        .add(static_cast<std::uint64_t>(cfg.noise_refinement))
        .add(static_cast<std::uint64_t>(stop))
        .add(x0)
        .add(strategy_tag(s))
        .add(strategy_parameters(s));
    if (const auto* lq = std::get_if<LQAffine>(&s)) {
        h.add(lq->solution->model_hash).add(lq->solution->objective_hash);
    }
    return h.value();
}

unsigned worker_count(const SimConfig& cfg) {
    unsigned w = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                  : cfg.workers;
    return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(1, cfg.n_paths)));
}

SimResult run(const ModelParams& model, const Strategy& strategy, double x0, const SimConfig& cfg,
              std::uint64_t seed, bool stop, const LQObjective* objective) {
    require_valid(model, objective ? *objective : LQObjective{});
    if (cfg.n_paths == 0) throw SimulationError("n_paths must be >= 1");
    if (cfg.noise_refinement == 0) throw SimulationError("noise_refinement must be >= 1");
    if (!std::isfinite(x0)) throw SimulationError("initial surplus must be finite");
    if (std::abs(cfg.horizon - model.horizon) > 1e-12 * std::max(1.0, model.horizon)) {
        throw SimulationError("simulation horizon does not match the model horizon");
    }
    const TimeGrid grid(cfg.horizon, cfg.step);
    if (const auto* lq = std::get_if<LQAffine>(&strategy)) {
        if (!(lq->solution->grid == grid)) {
            throw SimulationError("Riccati solution grid does not match the simulation grid");
        }
    }
    if (model.absorbed && !(model.absorbed->control->grid() == grid)) {
        throw SimulationError("absorbed lump control grid does not match the simulation grid");
    }

    Context ctx{model, cfg, strategy, objective, x0, stop, seed,
                model.has_jumps() ? model.lambda.max_value() : 0.0,
                build_tables(model, strategy, objective, grid)};

    SimResult res;
    res.records.resize(cfg.n_paths);
    res.strategy = strategy_tag(strategy);
    res.config_hash = config_hash(model, strategy, x0, cfg, stop);

    const unsigned workers = worker_count(cfg);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](std::size_t begin, std::size_t end) {
        try {
            std::visit(
                [&](const auto& s) {
                    for (std::size_t i = begin; i < end; ++i) res.records[i] = run_path(ctx, s, i);
                },
                strategy);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (workers <= 1) {
        work(0, cfg.n_paths);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (cfg.n_paths + workers - 1) / workers;
        for (std::size_t b = 0; b < cfg.n_paths; b += chunk) {
            pool.emplace_back(work, b, std::min(cfg.n_paths, b + chunk));
        }
    }
    if (failure) std::rethrow_exception(failure);

    double sum = 0.0;
    for (const auto& r : res.records) {
        sum += r.pv;
        if (r.ruin_time) ++res.ruin_count;
    }
    const double n = static_cast<double>(res.records.size());
    res.mean = sum / n;
    double ss = 0.0;
    for (const auto& r : res.records) ss += (r.pv - res.mean) * (r.pv - res.mean);
    res.sd = res.records.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return res;
}

}  // namespace

SimResult simulate(const ModelParams& model, const Strategy& strategy, double x0,
                   const SimConfig& cfg) {
    const bool stop = cfg.stop_at_ruin.value_or(default_stop_at_ruin(strategy));
    return run(model, strategy, x0, cfg, cfg.seed, stop, nullptr);
}

ObjectiveEstimate estimate_lq_objective(const ModelParams& model, const LQObjective& objective,
                                        const Strategy& strategy, double x0,
                                        const SimConfig& cfg) {
    const bool stop = cfg.stop_at_ruin.value_or(default_stop_at_ruin(strategy));
    const SimResult res = run(model, strategy, x0, cfg, cfg.seed, stop, &objective);
    ObjectiveEstimate est;
    est.per_path.reserve(res.records.size());
    double sum = 0.0;
    for (const auto& r : res.records) {
        est.per_path.push_back(r.objective);
        sum += r.objective;
    }
    const double n = static_cast<double>(est.per_path.size());
    est.mean = sum / n;
    double ss = 0.0;
    for (double v : est.per_path) ss += (v - est.mean) * (v - est.mean);
    est.standard_error = est.per_path.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return est;
}

PairedTable paired_compare(const ModelParams& model, std::span<const Strategy> strategies,
                           double x0, const SimConfig& cfg, std::span<const bool> stop_flags) {
    if (!cfg.common_noise) throw SimulationError("paired comparison requires common noise");
    if (!stop_flags.empty() && stop_flags.size() != strategies.size()) {
        throw SimulationError("one stop-at-ruin flag per strategy expected");
    }
    PairedTable table;
    table.results.reserve(strategies.size());
    for (std::size_t i = 0; i < strategies.size(); ++i) {
        const bool stop = !stop_flags.empty()
                              ? stop_flags[i]
                              : cfg.stop_at_ruin.value_or(default_stop_at_ruin(strategies[i]));
        table.results.push_back(run(model, strategies[i], x0, cfg, cfg.seed, stop, nullptr));
    }
    return table;
}

}  // namespace lqdiv
