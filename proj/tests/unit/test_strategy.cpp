#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "fixtures.hpp"
#include "lqdiv/error.hpp"
#include "lqdiv/strategy.hpp"

using namespace lqdiv;

namespace {

std::shared_ptr<const RiccatiSolution> solve(const ModelParams& m, const LQObjective& o,
                                             double h) {
    return std::make_shared<const RiccatiSolution>(solve_riccati(m, o, TimeGrid(m.horizon, h)));
}

double max_scaled_residual(const RiccatiSolution& s, const ModelParams& m, const LQObjective& o) {
    double worst = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, s.grid.intervals() / 200);
    for (std::size_t k = 0; k < s.grid.nodes(); k += stride) {
        for (double x = 0.0; x <= 4.0; x += 0.25) {
            const double r = hjb_residual(s, m, o, s.grid.time(k), x);
            worst = std::max(worst, std::abs(r) / (1.0 + std::abs(s.value(k, x))));
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("LQ rate and lump formulas") {
    const auto m = fixtures::jump_model(20.0);
    const auto o = fixtures::baseline_objective();
    const auto sol = solve(m, o, 0.01);
    const Strategy s = make_lq_affine(sol, m, o);
    const double q = sol->q[0], p = sol->p[0];
    CHECK(rate(s, 0.0, 1.3) == doctest::Approx(o.l0(0.0) + p + (o.l1(0.0) + 2.0 * q) * 1.3));
    CHECK(lump(s, 0.0, 1.3) ==
          doctest::Approx((2.0 * q * 1.3 + 2.0 * q * 0.5 + p) / (1.0 + 2.0 * q)));
    CHECK(strategy_tag(s) == "lq");
}

TEST_CASE("mean-reverting and barrier strategies") {
    const Strategy mr = make_mean_reverting(0.1, 0.5);
    CHECK(rate(mr, 3.0, 2.0) == doctest::Approx(1.1));
    CHECK(lump(mr, 3.0, 2.0) == 0.0);
    CHECK(strategy_tag(mr) == "mean_reverting");
    const Strategy b = make_barrier(1.25);
    CHECK(lump(b, 0.0, 5.0) == 0.0);
    CHECK(strategy_tag(b) == "barrier");
    CHECK(strategy_parameters(b) == "b=1.25");
    CHECK_THROWS_AS(make_barrier(0.0), ValidationError);
}

TEST_CASE("mean reversion level") {
    const auto m = fixtures::baseline_model();
    const auto o = fixtures::baseline_objective();
    const auto sol = solve(m, o, 1.0 / 400.0);
    const double level = mean_reversion_level(*sol, m, o, 0.0);
    // Zero drift at the level.
    CHECK(1.0 - rate(make_lq_affine(sol, m, o), 0.0, level) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(level > 0.0);
    CHECK(mr_benchmark_from_level(1.0, 1.884) == doctest::Approx(1.0 / 1.884));
    CHECK_THROWS_AS(mr_benchmark_from_level(1.0, 0.0), ValidationError);

    LQObjective neg = o;
    neg.l1 = -5.0;
    neg.gamma = 0.0;
    const auto flat = solve(m, neg, 0.5);
    CHECK_THROWS_AS(mean_reversion_level(*flat, m, neg, 0.0), SolverError);
}

TEST_CASE("HJB residual") {
    SUBCASE("baseline problem") {
        const auto m = fixtures::baseline_model();
        const auto o = fixtures::baseline_objective();
        const auto sol = solve(m, o, 1.0 / 400.0);
        CHECK(max_scaled_residual(*sol, m, o) <= 1e-4);
    }
    SUBCASE("jump problem") {
        const auto m = fixtures::jump_model(20.0);
        const auto o = fixtures::baseline_objective();
        const auto sol = solve(m, o, 1.0 / 400.0);
        CHECK(max_scaled_residual(*sol, m, o) <= 1e-4);
    }
    SUBCASE("terminal constraint") {
        const auto m = fixtures::baseline_model(10.0);
        auto o = fixtures::baseline_objective();
        o.tau = 2;
        o.kappa = 3.0;
        o.x_T = 1.0;
        o.delta_gamma_T = 0.5;
        const auto sol = solve(m, o, 1.0 / 400.0);
        CHECK(max_scaled_residual(*sol, m, o) <= 1e-4);
    }
    SUBCASE("zero penalty is exactly zero") {
        const auto m = fixtures::baseline_model(10.0);
        const LQObjective o;
        const auto sol = solve(m, o, 0.1);
        for (std::size_t k = 0; k < sol->grid.nodes(); k += 7) {
            CHECK(hjb_residual(*sol, m, o, sol->grid.time(k), 1.7) == 0.0);
        }
    }
    SUBCASE("corrupted q is detected") {
        const auto m = fixtures::baseline_model();
        const auto o = fixtures::baseline_objective();
        auto bad = solve_riccati(m, o, TimeGrid(m.horizon, 1.0 / 400.0));
        for (double& q : bad.q) q *= 1.01;
        CHECK(max_scaled_residual(bad, m, o) > 1e-3);
    }
    SUBCASE("off-grid times are interpolated") {
        const auto m = fixtures::baseline_model(10.0);
        const auto o = fixtures::baseline_objective();
        const auto sol = solve(m, o, 1.0 / 100.0);
        const double r = hjb_residual(*sol, m, o, 3.3333, 1.0);
        CHECK(std::abs(r) < 1e-4);
    }
}
