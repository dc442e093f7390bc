#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lqdiv/error.hpp"
#include "lqdiv/valuation.hpp"

using namespace lqdiv;

namespace {

PVCoefficients baseline_pv() {
    const auto m = fixtures::baseline_model();
    const auto o = fixtures::baseline_objective();
    const TimeGrid g(m.horizon, 1.0 / 100.0);
    return solve_pv_coefficients(m, o, solve_riccati(m, o, g), g);
}

}  // namespace

TEST_CASE("barrier exponents solve the characteristic equation") {
    const auto r = barrier_roots(1.0, 0.5, 0.05);
    CHECK(r.r > 0.0);
    CHECK(r.s < 0.0);
    for (double z : {r.r, r.s}) {
        CHECK(0.5 * 0.25 * z * z + z - 0.05 == doctest::Approx(0.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(barrier_roots(1.0, 0.0, 0.05), ValidationError);
    CHECK_THROWS_AS(barrier_roots(1.0, 0.5, 0.0), ValidationError);
}

TEST_CASE("optimal barrier") {
    const auto roots = barrier_roots(1.0, 0.5, 0.05);
    const double b = optimal_barrier(roots);
    CHECK(b == doctest::Approx(1.256).epsilon(0.001 / 1.256));

    // Grid search: b* maximises V^b(x) for any fixed x below it.
    double best_b = 0.0, best_v = -1.0;
    for (int i = 1; i <= 40000; ++i) {
        const double bb = 0.3 + i * 5e-5;
        const double v = barrier_value(0.3, bb, roots);
        if (v > best_v) {
            best_v = v;
            best_b = bb;
        }
    }
    CHECK(std::abs(best_b - b) < 1e-4);

    // Smooth fit: V_x(b*) = 1 at the optimal barrier.
    const double eps = 1e-6;
    const double vx = (barrier_value(b, b, roots) - barrier_value(b - eps, b, roots)) / eps;
    CHECK(vx == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("barrier value") {
    const auto roots = barrier_roots(1.0, 0.5, 0.05);
    const double b = optimal_barrier(roots);
    CHECK(barrier_value(0.0, b, roots) == 0.0);
    CHECK(barrier_value(b, b, roots) == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(barrier_value(0.5, b, roots) < barrier_value(0.6, b, roots));
    CHECK_THROWS_AS(barrier_value(b + 0.1, b, roots), ValidationError);
    CHECK_THROWS_AS(barrier_value(-0.1, b, roots), ValidationError);
}

TEST_CASE("affine PV and cost of smoothing") {
    const auto pv = baseline_pv();
    const auto roots = barrier_roots(1.0, 0.5, 0.05);
    const double b = optimal_barrier(roots);
    const double x = 0.5 * b;
    CHECK(pv_affine(pv, 0.0, x) == doctest::Approx(pv.f[0] * x + pv.g[0]));
    CHECK(pv_affine(pv, 0.0, x) == doctest::Approx(18.727).epsilon(0.2 / 18.727));

    const double xi = cost_of_smoothing(pv, roots, b, 0.0, x);
    CHECK(pv_affine(pv, 0.0, x + xi) == doctest::Approx(barrier_value(x, b, roots)));

    CHECK(cost_of_smoothing(pv, roots, b, 0.0, 0.1 * b) < 0.0);
    double prev = cost_of_smoothing(pv, roots, b, 0.0, 0.3 * b);
    for (int i = 7; i <= 20; ++i) {
        const double cur = cost_of_smoothing(pv, roots, b, 0.0, i / 20.0 * b);
        CHECK(cur > prev);
        prev = cur;
    }

    const auto root = smoothing_breakeven(pv, roots, b, 0.0, 0.0, b);
    REQUIRE(root.has_value());
    CHECK(std::abs(cost_of_smoothing(pv, roots, b, 0.0, *root)) < 1e-8);
    CHECK_FALSE(smoothing_breakeven(pv, roots, b, 0.0, 0.5 * b, b).has_value());

    PVCoefficients flat = pv;
    std::fill(flat.f.begin(), flat.f.end(), 0.0);
    CHECK_THROWS_AS(cost_of_smoothing(flat, roots, b, 0.0, x), SolverError);
}
