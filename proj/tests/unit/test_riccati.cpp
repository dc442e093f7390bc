#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "lqdiv/error.hpp"
#include "lqdiv/riccati.hpp"

using namespace lqdiv;

namespace {

double max_gap(const std::vector<double>& coarse, const std::vector<double>& fine,
               std::size_t ratio) {
    double gap = 0.0;
    for (std::size_t k = 0; k < coarse.size(); ++k) {
        gap = std::max(gap, std::abs(coarse[k] - fine[k * ratio]));
    }
    return gap;
}

}  // namespace

TEST_CASE("terminal conditions") {
    LQObjective o;
    o.delta_gamma_T = 2.0;
    o.x0 = 1.5;
    auto y = terminal_conditions(o, 1.0);
    CHECK(y.q == 2.0);
    CHECK(y.p == -6.0);
    CHECK(y.r == doctest::Approx(4.5));

    o = LQObjective{};
    o.kappa = 3.0;
    o.x_T = 2.0;
    o.tau = 1;
    y = terminal_conditions(o, 1.0);
    CHECK(y.q == 0.0);
    CHECK(y.p == 3.0);
    CHECK(y.r == -6.0);
    o.tau = 2;
    y = terminal_conditions(o, 1.0);
    CHECK(y.q == 3.0);
    CHECK(y.p == -12.0);
    CHECK(y.r == 12.0);
    o.tau = 0;
    y = terminal_conditions(o, 1.0);
    CHECK(y.q == 0.0);
    CHECK(y.p == 0.0);
    CHECK(y.r == 0.0);
}

TEST_CASE("long horizon reaches the stationary solution") {
    const auto m = fixtures::baseline_model();
    const auto o = fixtures::baseline_objective();
    const TimeGrid g(m.horizon, 1.0 / 400.0);
    const auto sol = solve_riccati(m, o, g);

    // Stationary q solves 2q² + (δ + 2 l1) q − γ/2 = 0.
    const double l1 = o.l1(0.0), x0 = o.x0(0.0), gamma = 1.0, delta = m.delta;
    const double b = delta + 2.0 * l1;
    const double q_inf = (-b + std::sqrt(b * b + 4.0 * gamma)) / 4.0;
    const double p_inf = (2.0 * q_inf * 1.0 - gamma * x0) / (delta + 2.0 * q_inf + l1);
    CHECK(sol.q[0] == doctest::Approx(q_inf).epsilon(1e-10));
    CHECK(sol.p[0] == doctest::Approx(p_inf).epsilon(1e-10));
    CHECK(sol.q.back() == 0.0);
    CHECK(sol.p.back() == 0.0);
    CHECK(sol.r.back() == 0.0);
    // Coefficients the rate rule relies on.
    CHECK(o.l1(0.0) + 2.0 * sol.q[0] > o.l1(0.0));
    CHECK(o.l0(0.0) + sol.p[0] < 0.0);
    CHECK(sol.model_hash == hash_model(m));
}

TEST_CASE("zero weights give zero coefficients") {
    auto m = fixtures::baseline_model(10.0);
    LQObjective o;
    const TimeGrid g(m.horizon, 0.1);
    const auto sol = solve_riccati(m, o, g);
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        CHECK(sol.q[k] == 0.0);
        CHECK(sol.p[k] == 0.0);
        CHECK(sol.r[k] == 0.0);
    }
}

TEST_CASE("PV coefficients with q = p = 0 match the closed form") {
    auto m = fixtures::baseline_model(30.0);
    LQObjective o;
    o.l0 = 0.2;
    o.l1 = 0.4;
    const TimeGrid g(m.horizon, 1.0 / 100.0);
    const auto sol = solve_riccati(m, o, g);
    const auto pv = solve_pv_coefficients(m, o, sol, g);
    const double a = m.delta_tilde + 0.4;
    const double d = m.delta_tilde;
    const double c = 1.0, l0 = 0.2, l1 = 0.4;
    for (std::size_t k = 0; k < g.nodes(); k += 100) {
        const double s = m.horizon - g.time(k);
        const double f = l1 / a * (1.0 - std::exp(-a * s));
        // g solves g' = d g + f (l0 − c) − l0 backward from 0.
        const double k1 = l1 / a * (l0 - c) - l0;
        const double k2 = -l1 / a * (l0 - c);
        const double gv = -k1 / d * (1.0 - std::exp(-d * s)) -
                          k2 / (a - d) * (std::exp(-d * s) - std::exp(-a * s));
        CHECK(pv.f[k] == doctest::Approx(f).epsilon(1e-10));
        CHECK(pv.g[k] == doctest::Approx(gv).epsilon(1e-9));
    }
}

TEST_CASE("RK4 convergence order") {
    const auto m = fixtures::baseline_model(20.0);
    auto o = fixtures::baseline_objective();
    o.delta_gamma_T = 0.5;
    const double h = 0.25;
    const auto s1 = solve_riccati(m, o, TimeGrid(m.horizon, h));
    const auto s2 = solve_riccati(m, o, TimeGrid(m.horizon, h / 2));
    const auto s4 = solve_riccati(m, o, TimeGrid(m.horizon, h / 4));
    const auto p1 = solve_pv_coefficients(m, o, s1, s1.grid);
    const auto p2 = solve_pv_coefficients(m, o, s2, s2.grid);
    const auto p4 = solve_pv_coefficients(m, o, s4, s4.grid);
    CHECK(max_gap(s1.q, s4.q, 4) / max_gap(s2.q, s4.q, 2) >= 12.0);
    CHECK(max_gap(s1.p, s4.p, 4) / max_gap(s2.p, s4.p, 2) >= 12.0);
    CHECK(max_gap(s1.r, s4.r, 4) / max_gap(s2.r, s4.r, 2) >= 12.0);
    CHECK(max_gap(p1.f, p4.f, 4) / max_gap(p2.f, p4.f, 2) >= 12.0);
    CHECK(max_gap(p1.g, p4.g, 4) / max_gap(p2.g, p4.g, 2) >= 12.0);
}

TEST_CASE("equivalent diffusion reproduces the jump solution") {
    const auto m = fixtures::jump_model(50.0);
    const auto o = fixtures::baseline_objective();
    const TimeGrid g(m.horizon, 1.0 / 100.0);
    const auto jump = solve_riccati(m, o, g);
    const auto control = optimal_lump_control(jump, m, o);
    const auto eq = equivalent_diffusion(m, control);
    CHECK_FALSE(eq.has_jumps());
    REQUIRE(eq.absorbed.has_value());
    const auto diff = solve_riccati(eq, o, g);
    double dev = 0.0;
    for (std::size_t k = 0; k < g.nodes(); ++k) {
        dev = std::max({dev, std::abs(jump.q[k] - diff.q[k]), std::abs(jump.p[k] - diff.p[k]),
                        std::abs(jump.r[k] - diff.r[k])});
    }
    CHECK(dev <= 1e-6);

    const auto pj = solve_pv_coefficients(m, o, jump, g);
    const auto pd = solve_pv_coefficients(eq, o, diff, g);
    CHECK(pj.f[0] == doctest::Approx(pd.f[0]).epsilon(1e-6));
    CHECK(pj.g[0] == doctest::Approx(pd.g[0]).epsilon(1e-6));

    CHECK_THROWS_AS(equivalent_diffusion(eq, control), ValidationError);
    const auto plain = fixtures::baseline_model(50.0);
    CHECK(equivalent_diffusion(plain, control).lambda == plain.lambda);
}

TEST_CASE("jumps change the solution") {
    const auto o = fixtures::baseline_objective();
    const TimeGrid g(50.0, 1.0 / 100.0);
    const auto a = solve_riccati(fixtures::baseline_model(50.0), o, g);
    const auto b = solve_riccati(fixtures::jump_model(50.0), o, g);
    CHECK(std::abs(a.p[0] - b.p[0]) > 1e-3);
}

TEST_CASE("second-order condition failure aborts with the offending time") {
    auto m = fixtures::jump_model(5.0);
    auto o = fixtures::baseline_objective();
    o.gamma_i = 0.0;
    const TimeGrid g(m.horizon, 0.01);
    try {
        solve_riccati(m, o, g);
        FAIL("expected SolverError");
    } catch (const SolverError& e) {
        CHECK(e.time() == doctest::Approx(5.0));
    }
}

TEST_CASE("grid must match the model horizon") {
    CHECK_THROWS_AS(solve_riccati(fixtures::baseline_model(10.0), fixtures::baseline_objective(),
                                  TimeGrid(5.0, 0.1)),
                    SolverError);
}

TEST_CASE("piecewise inputs") {
    auto m = fixtures::baseline_model(10.0);
    auto o = fixtures::baseline_objective();
    o.x0 = TimeFunction({{0.0, 1.884}, {5.0, 3.0}});
    const TimeGrid g(m.horizon, 0.01);
    const auto sol = solve_riccati(m, o, g);
    // q does not depend on x0; p sees the benchmark change.
    const auto ref = solve_riccati(m, fixtures::baseline_objective(), g);
    CHECK(sol.q[0] == doctest::Approx(ref.q[0]).epsilon(1e-14));
    CHECK(sol.p[0] != doctest::Approx(ref.p[0]));
}

TEST_CASE("interpolation is exact at nodes") {
    const auto m = fixtures::baseline_model(10.0);
    const auto o = fixtures::baseline_objective();
    const TimeGrid g(m.horizon, 0.5);
    const auto sol = solve_riccati(m, o, g);
    CHECK(eval_qpr(sol, 2.5).q == sol.q[5]);
    CHECK(eval_qpr_smooth(sol, 2.5).p == sol.p[5]);
    const double mid = eval_qpr_smooth(sol, 2.75).q;
    CHECK(mid > std::min(sol.q[5], sol.q[6]) - 1e-3);
}
