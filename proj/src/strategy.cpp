#include "lqdiv/strategy.hpp"

#include <cmath>
#include <sstream>

#include "lqdiv/csv.hpp"
#include "lqdiv/error.hpp"

namespace lqdiv {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Strategy make_lq_affine(std::shared_ptr<const RiccatiSolution> solution, const ModelParams& model,
                        const LQObjective& objective) {
    if (!solution) throw ValidationError("LQ strategy needs a Riccati solution");
    const auto status = second_order_status(*solution, model, objective);
    if (!status.ok) {
        throw SolverError("second-order condition gamma_i + 2q > 0 fails", status.worst_time);
    }
    return LQAffine{std::move(solution), objective, model.jumps.p1};
}

Strategy make_mean_reverting(double l0, double l1) {
    if (!(l1 > 0.0)) throw ValidationError("mean-reverting strategy needs l1 > 0");
    if (!(l0 >= 0.0)) throw ValidationError("mean-reverting strategy needs l0 >= 0");
    return MeanReverting{l0, l1};
}

Strategy make_barrier(double b) {
    if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("barrier needs b > 0");
    return Barrier{b};
}

std::string strategy_tag(const Strategy& s) {
    return std::visit(overloaded{[](const LQAffine&) { return std::string("lq"); },
                                 [](const MeanReverting&) { return std::string("mean_reverting"); },
                                 [](const Barrier&) { return std::string("barrier"); }},
                      s);
}

std::string strategy_parameters(const Strategy& s) {
    return std::visit(
        overloaded{[](const LQAffine& lq) {
                       return "l0=" + format_number(lq.objective.l0(0.0)) +
                              ";l1=" + format_number(lq.objective.l1(0.0)) +
                              ";x0=" + format_number(lq.objective.x0(0.0));
                   },
                   [](const MeanReverting& mr) {
                       return "l0=" + format_number(mr.l0) + ";l1=" + format_number(mr.l1);
                   },
                   [](const Barrier& b) { return "b=" + format_number(b.b); }},
        s);
}

double rate(const Strategy& s, double t, double x) {
    return std::visit(overloaded{[&](const LQAffine& lq) {
                                     const Qpr v = eval_qpr(*lq.solution, t);
                                     return lq.objective.l0(t) + v.p +
                                            (lq.objective.l1(t) + 2.0 * v.q) * x;
                                 },
                                 [&](const MeanReverting& mr) { return mr.l0 + mr.l1 * x; },
                                 [](const Barrier&) { return 0.0; }},
                      s);
}

double lump(const Strategy& s, double t, double x) {
    const auto* lq = std::get_if<LQAffine>(&s);
    if (!lq) return 0.0;
    const Qpr v = eval_qpr(*lq->solution, t);
    const double a = lq->objective.gamma_i(t) + 2.0 * v.q;
    if (!(a > 0.0)) throw SolverError("second-order condition violated for lump payment", t);
    return (2.0 * v.q * x + 2.0 * v.q * lq->p1 + v.p) / a;
}

namespace {

/// Fourth-order finite difference of node values at node k.
double node_derivative(std::span<const double> y, std::size_t k, double h) {
    const std::size_t n = y.size();
    if (n < 5) throw SolverError("finite-difference derivative needs at least 5 nodes");
    if (k >= 2 && k + 2 < n) {
        return (-y[k + 2] + 8.0 * y[k + 1] - 8.0 * y[k - 1] + y[k - 2]) / (12.0 * h);
    }
    if (k == 0) {
        return (-25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]) / (12.0 * h);
    }
    if (k == 1) {
        return (-3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]) / (12.0 * h);
    }
    if (k == n - 2) {
        return (3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]) /
               (12.0 * h);
    }
    return (25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] +
            3.0 * y[n - 5]) /
           (12.0 * h);
}

Qpr time_derivative(const RiccatiSolution& s, double t) {
    const auto& g = s.grid;
    const double h = g.step();
    auto at_node = [&](std::size_t k) {
        return Qpr{node_derivative(s.q, k, h), node_derivative(s.p, k, h),
                   node_derivative(s.r, k, h)};
    };
    if (const std::size_t k = g.node_of(t); k < g.nodes()) return at_node(k);
    const auto k = static_cast<std::size_t>(std::floor(t / h));
    const double theta = t / h - static_cast<double>(k);
    const Qpr lo = at_node(k);
    const Qpr hi = at_node(k + 1);
    return {lo.q + theta * (hi.q - lo.q), lo.p + theta * (hi.p - lo.p),
            lo.r + theta * (hi.r - lo.r)};
}

}  // namespace

double hjb_residual(const RiccatiSolution& s, const ModelParams& m, const LQObjective& o,
                    double t, double x) {
    const Qpr v = eval_qpr(s, t);
    const Qpr dv = time_derivative(s, t);
    const double val = (v.q * x + v.p) * x + v.r;
    const double vx = 2.0 * v.q * x + v.p;
    const double vxx = 2.0 * v.q;
    const double vt = (dv.q * x + dv.p) * x + dv.r;

    const double l0 = o.l0(t), l1 = o.l1(t), x0 = o.x0(t), gamma = o.gamma(t);
    const double l_opt = l0 + l1 * x + vx;
    const double track = l_opt - l0 - l1 * x;
    double h = vt - m.delta * val + 0.5 * track * track + 0.5 * gamma * (x - x0) * (x - x0) +
               vx * (m.c(t) - l_opt) + 0.5 * vxx * m.sigma * m.sigma;

    const double gi = o.gamma_i(t);
    if (const double lambda = m.lambda(t); lambda > 0.0) {
        const double i = (vx + 2.0 * v.q * m.jumps.p1) / (gi + 2.0 * v.q);
        const double z = x - i;
        // E[V(t, z + Y)] from the first two moments of Y.
        const double expected =
            v.q * (z * z + 2.0 * z * m.jumps.p1 + m.jumps.p2) + v.p * (z + m.jumps.p1) + v.r;
        h += 0.5 * gi * i * i * lambda + lambda * (expected - val);
    }
    if (m.absorbed) {
        const auto& ab = *m.absorbed;
        if (const double lambda = ab.lambda(t); lambda > 0.0) {
            const double i = (*ab.control)(t, x);
            h += 0.5 * gi * i * i * lambda + vx * lambda * (ab.p1 - i) +
                 0.5 * vxx * lambda * (ab.p2 + i * i - 2.0 * ab.p1 * i);
        }
    }
    return h;
}

double mean_reversion_level(const RiccatiSolution& s, const ModelParams& m, const LQObjective& o,
                            double t) {
    const Qpr v = eval_qpr(s, t);
    const double slope = o.l1(t) + 2.0 * v.q;
    if (!(slope > 0.0)) {
        std::ostringstream msg;
        msg << "mean-reversion level undefined: l1 + 2q = " << slope << " <= 0 at t=" << t;
        throw SolverError(msg.str(), t);
    }
    return (m.c(t) - o.l0(t) - v.p) / slope;
}

double mr_benchmark_from_level(double c, double level) {
    if (!(level > 0.0)) throw ValidationError("reversion level must be > 0");
    return c / level;
}

}  // namespace lqdiv
