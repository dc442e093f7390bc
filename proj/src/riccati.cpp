#include "lqdiv/riccati.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "lqdiv/error.hpp"

namespace lqdiv {

namespace {

double at(const TimeFunction& f, double t, bool left) { return left ? f.left_limit(t) : f(t); }

struct State3 {
    double a, b, c;
};

State3 axpy(const State3& y, double h, const State3& k) {
    return {y.a + h * k.a, y.b + h * k.b, y.c + h * k.c};
}

void require_finite(const State3& y, double t) {
    if (!std::isfinite(y.a) || !std::isfinite(y.b) || !std::isfinite(y.c)) {
        std::ostringstream msg;
        msg << "non-finite state at t=" << t;
        throw SolverError(msg.str(), t);
    }
}

/// One backward RK4 step from t_hi to t_hi − h. Stage coefficients at the
/// upper end use left limits so breakpoints on nodes do not leak.
template <typename Rhs>
State3 rk4_backward(const Rhs& rhs, double t_hi, double h, const State3& y) {
    const double t_mid = t_hi - 0.5 * h;
    const double t_lo = t_hi - h;
    const State3 k1 = rhs(t_hi, y, true);
    const State3 k2 = rhs(t_mid, axpy(y, -0.5 * h, k1), false);
    const State3 k3 = rhs(t_mid, axpy(y, -0.5 * h, k2), false);
    const State3 k4 = rhs(t_lo, axpy(y, -h, k3), false);
    return {y.a - h / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a),
            y.b - h / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b),
            y.c - h / 6.0 * (k1.c + 2.0 * k2.c + 2.0 * k3.c + k4.c)};
}

void check_grid(const TimeGrid& grid, const ModelParams& model) {
    if (std::abs(grid.horizon() - model.horizon) > 1e-12 * std::max(1.0, model.horizon)) {
        throw SolverError("grid horizon does not match the model horizon");
    }
}

}  // namespace

Qpr terminal_conditions(const LQObjective& o, double horizon) {
    const double dg = o.delta_gamma_T;
    const double xb = o.x0(horizon);
    Qpr y{dg, -2.0 * dg * xb, dg * xb * xb};
    switch (o.tau) {
        case 0: break;
        case 1:
            y.p += o.kappa;
            y.r -= o.kappa * o.x_T;
            break;
        case 2:
            y.q += o.kappa;
            y.p -= 2.0 * o.kappa * o.x_T;
            y.r += o.kappa * o.x_T * o.x_T;
            break;
        default: throw ValidationError("tau must be in {0,1,2}");
    }
    return y;
}

Qpr riccati_rhs(const ModelParams& m, const LQObjective& o, double t, const Qpr& y, bool left) {
    const double c = at(m.c, t, left);
    const double l0 = at(o.l0, t, left);
    const double l1 = at(o.l1, t, left);
    const double x0 = at(o.x0, t, left);
    const double gamma = at(o.gamma, t, left);
    const double s2 = m.sigma * m.sigma;
    const double q = y.q;
    const double p = y.p;

    Qpr d{m.delta * q + 2.0 * q * q + 2.0 * q * l1 - 0.5 * gamma,
          m.delta * p + 2.0 * p * q + p * l1 - 2.0 * q * (c - l0) + gamma * x0,
          m.delta * y.r + 0.5 * p * p - p * (c - l0) - 0.5 * gamma * x0 * x0 - q * s2};

    const double lambda = at(m.lambda, t, left);
    if (lambda > 0.0) {
        // Jump term minimised over the lump payment.
        const double gi = at(o.gamma_i, t, left);
        const double a = gi + 2.0 * q;
        if (!(a > 0.0)) {
            std::ostringstream msg;
            msg << "second-order condition gamma_i + 2q > 0 violated at t=" << t
                << " (gamma_i + 2q = " << a << ")";
            throw SolverError(msg.str(), t);
        }
        const double p1 = m.jumps.p1;
        const double p2 = m.jumps.p2;
        const double pp = p + 2.0 * q * p1;
        d.q += 2.0 * lambda * q * q / a;
        d.p += -2.0 * lambda * q * p1 + 2.0 * lambda * q * pp / a;
        d.r += -lambda * p * p1 - lambda * q * p2 + 0.5 * lambda * pp * pp / a;
    }
    if (m.absorbed) {
        // Jump term evaluated at a fixed affine lump control i = ax + b.
        const auto& ab = *m.absorbed;
        const double la = at(ab.lambda, t, left);
        if (la > 0.0) {
            const double gi = at(o.gamma_i, t, left);
            const double sa = ab.control->slope(t);
            const double sb = ab.control->intercept(t);
            const double p1 = ab.p1;
            const double p2 = ab.p2;
            d.q += la * (-0.5 * gi * sa * sa + 2.0 * q * sa - q * sa * sa);
            d.p += la * (-gi * sa * sb - 2.0 * q * (p1 - sb) + p * sa - 2.0 * q * sa * (sb - p1));
            d.r += la * (-0.5 * gi * sb * sb - p * (p1 - sb) - q * (p2 + sb * sb - 2.0 * p1 * sb));
        }
    }
    return d;
}

RiccatiSolution solve_riccati(const ModelParams& model, const LQObjective& objective,
                              const TimeGrid& grid) {
    require_valid(model, objective);
    check_grid(grid, model);

    const std::size_t n = grid.nodes();
    RiccatiSolution sol{grid, std::vector<double>(n), std::vector<double>(n),
                        std::vector<double>(n), std::vector<double>(n),
                        std::vector<double>(n), std::vector<double>(n),
                        hash_model(model), hash_objective(objective)};

    auto rhs = [&](double t, const State3& y, bool left) {
        const Qpr d = riccati_rhs(model, objective, t, {y.a, y.b, y.c}, left);
        return State3{d.q, d.p, d.r};
    };
    auto store = [&](std::size_t k, const State3& y, bool left) {
        sol.q[k] = y.a;
        sol.p[k] = y.b;
        sol.r[k] = y.c;
        const State3 d = rhs(grid.time(k), y, left);
        sol.dq[k] = d.a;
        sol.dp[k] = d.b;
        sol.dr[k] = d.c;
    };

    const Qpr term = terminal_conditions(objective, grid.horizon());
    State3 y{term.q, term.p, term.r};
    const std::size_t last = grid.intervals();
    store(last, y, true);
    const double h = grid.step();
    for (std::size_t k = last; k-- > 0;) {
        y = rk4_backward(rhs, grid.time(k + 1), h, y);
        require_finite(y, grid.time(k));
        store(k, y, false);
    }
    // Terminal values are assigned, not integrated.
    sol.q[last] = term.q;
    sol.p[last] = term.p;
    sol.r[last] = term.r;
    return sol;
}

Qpr eval_qpr(const RiccatiSolution& s, double t) {
    return {interpolate_linear(s.grid, s.q, t), interpolate_linear(s.grid, s.p, t),
            interpolate_linear(s.grid, s.r, t)};
}

Qpr eval_qpr_smooth(const RiccatiSolution& s, double t) {
    return {interpolate_hermite(s.grid, s.q, s.dq, t), interpolate_hermite(s.grid, s.p, s.dp, t),
            interpolate_hermite(s.grid, s.r, s.dr, t)};
}

PVCoefficients solve_pv_coefficients(const ModelParams& model, const LQObjective& objective,
                                     const RiccatiSolution& sol, const TimeGrid& grid) {
    if (!(sol.grid == grid)) throw SolverError("Riccati solution grid does not match");
    check_grid(grid, model);

    const double dt = model.delta_tilde;
    auto rhs = [&](double t, const State3& y, bool left) {
        const Qpr v = eval_qpr_smooth(sol, t);
        const double c = at(model.c, t, left);
        const double l0 = at(objective.l0, t, left);
        const double l1 = at(objective.l1, t, left);
        double lambda = 0.0, slope = 0.0, icpt = 0.0, p1 = 0.0;
        if (at(model.lambda, t, left) > 0.0) {
            lambda = at(model.lambda, t, left);
            p1 = model.jumps.p1;
            const double a = at(objective.gamma_i, t, left) + 2.0 * v.q;
            slope = 2.0 * v.q / a;
            icpt = (v.p + 2.0 * v.q * p1) / a;
        } else if (model.absorbed && at(model.absorbed->lambda, t, left) > 0.0) {
            lambda = at(model.absorbed->lambda, t, left);
            p1 = model.absorbed->p1;
            slope = model.absorbed->control->slope(t);
            icpt = model.absorbed->control->intercept(t);
        }
        const double beta = l1 + 2.0 * v.q + lambda * slope;
        return State3{y.a * (dt + beta) - beta,
                      y.b * dt + y.a * (l0 + v.p - c - lambda * (p1 - icpt)) -
                          (l0 + v.p + lambda * icpt),
                      0.0};
    };

    const std::size_t n = grid.nodes();
    PVCoefficients pv{grid, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    State3 y{0.0, 0.0, 0.0};
    for (std::size_t k = grid.intervals(); k-- > 0;) {
        y = rk4_backward(rhs, grid.time(k + 1), grid.step(), y);
        require_finite(y, grid.time(k));
        pv.f[k] = y.a;
        pv.g[k] = y.b;
    }
    return pv;
}

LumpControl optimal_lump_control(const RiccatiSolution& sol, const ModelParams& model,
                                 const LQObjective& objective) {
    const auto& grid = sol.grid;
    const std::size_t n = grid.nodes();
    std::vector<double> a(n, 0.0), b(n, 0.0), da(n, 0.0), db(n, 0.0);
    const double p1 = model.jumps.p1;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = grid.time(k);
        const double gi = k == grid.intervals() ? objective.gamma_i.left_limit(t)
                                                : objective.gamma_i(t);
        const double big_a = gi + 2.0 * sol.q[k];
        if (!(big_a > 0.0)) {
            if (model.lambda(t) > 0.0) {
                throw SolverError("second-order condition violated while tabulating lump control",
                                  t);
            }
            continue;
        }
        const double num = sol.p[k] + 2.0 * sol.q[k] * p1;
        a[k] = 2.0 * sol.q[k] / big_a;
        b[k] = num / big_a;
        da[k] = 2.0 * sol.dq[k] * gi / (big_a * big_a);
        db[k] = ((sol.dp[k] + 2.0 * sol.dq[k] * p1) * big_a - num * 2.0 * sol.dq[k]) /
                (big_a * big_a);
    }
    return LumpControl(grid, std::move(a), std::move(b), std::move(da), std::move(db));
}

ModelParams equivalent_diffusion(const ModelParams& model, const LumpControl& control) {
    if (model.absorbed) throw ValidationError("model is already an equivalent diffusion");
    if (!model.has_jumps()) return model;
    ModelParams out = model;
    out.absorbed = AbsorbedJumps{model.lambda, model.jumps.p1, model.jumps.p2,
                                 std::make_shared<const LumpControl>(control)};
    out.lambda = TimeFunction(0.0);
    out.jumps = JumpLaw::none();
    return out;
}

SecondOrderStatus second_order_status(const RiccatiSolution& sol, const ModelParams& model,
                                      const LQObjective& objective) {
    SecondOrderStatus st;
    bool any = false;
    for (std::size_t k = 0; k < sol.grid.nodes(); ++k) {
        const double t = sol.grid.time(k);
        const double lam = model.absorbed ? model.absorbed->lambda(t) : model.lambda(t);
        if (!(lam > 0.0)) continue;
        const double margin = objective.gamma_i(t) + 2.0 * sol.q[k];
        if (!any || margin < st.worst_margin) {
            st.worst_margin = margin;
            st.worst_time = t;
            any = true;
        }
    }
    st.ok = !any || st.worst_margin > 0.0;
    return st;
}

}  // namespace lqdiv
