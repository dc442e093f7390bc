#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lqdiv/error.hpp"
#include "lqdiv/random.hpp"

using namespace lqdiv;

namespace {

bool has_message(const std::vector<std::string>& v, const std::string& needle) {
    for (const auto& s : v) {
        if (s.find(needle) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("validate") {
    SUBCASE("baseline parameters are valid") {
        CHECK(validate(fixtures::baseline_model(), fixtures::baseline_objective()).empty());
    }
    SUBCASE("tau outside {0,1,2}") {
        auto o = fixtures::baseline_objective();
        o.tau = 3;
        CHECK(has_message(validate(fixtures::baseline_model(), o), "tau must be in {0,1,2}"));
        CHECK_THROWS_AS(require_valid(fixtures::baseline_model(), o), ValidationError);
    }
    SUBCASE("declared moment contradicts the law") {
        auto m = fixtures::jump_model();
        m.jumps.declared_p1 = 0.4;
        const auto v = validate(m);
        CHECK(has_message(v, "p1=0.4"));
        CHECK(has_message(v, "0.5"));
    }
    SUBCASE("jump intensity without a jump law") {
        auto m = fixtures::baseline_model();
        m.lambda = 1.0;
        CHECK_FALSE(validate(m).empty());
    }
    SUBCASE("negative weights and benchmarks") {
        auto o = fixtures::baseline_objective();
        o.gamma = -1.0;
        o.x0 = -0.5;
        CHECK(validate(fixtures::baseline_model(), o).size() >= 2);
    }
    SUBCASE("horizon and impatience") {
        auto m = fixtures::baseline_model();
        m.horizon = 0.0;
        m.delta_tilde = 0.0;
        CHECK(validate(m).size() >= 2);
    }
}

TEST_CASE("jump moments") {
    const auto [e1, e2] = jump_moments(JumpLaw::exponential(2.0, 1));
    CHECK(e1 == doctest::Approx(0.5));
    CHECK(e2 == doctest::Approx(0.5));
    const auto [n1, n2] = jump_moments(JumpLaw::normal(0.0, 1.0));
    CHECK(n1 == 0.0);
    CHECK(n2 == 1.0);
    const auto [s1, s2] = jump_moments(JumpLaw::shifted_exponential(2.0, 1.0, -1));
    CHECK(s1 == doctest::Approx(-1.5));
    CHECK(s2 == doctest::Approx(2.5));
    CHECK_THROWS_AS(jump_moments(JumpLaw::exponential(0.0)), ValidationError);
}

TEST_CASE("sampled moments match the analytic ones") {
    const JumpLaw laws[] = {JumpLaw::exponential(2.0, 1), JumpLaw::normal(0.3, 0.7),
                            JumpLaw::shifted_exponential(4.0, 0.5, -1)};
    for (const auto& law : laws) {
        const CounterStream rng(7, 0, CounterStream::jumps);
        constexpr int n = 1'000'000;
        double s1 = 0.0, s2 = 0.0, s4 = 0.0;
        for (int k = 0; k < n; ++k) {
            const double y = law.sample(rng.uniform(k));
            s1 += y;
            s2 += y * y;
            s4 += y * y * y * y;
        }
        s1 /= n;
        s2 /= n;
        s4 /= n;
        // Five standard errors of each sample moment.
        const double se1 = std::sqrt((law.p2 - law.p1 * law.p1) / n);
        const double se2 = std::sqrt((s4 - s2 * s2) / n);
        CHECK(std::abs(s1 - law.p1) < 5.0 * se1);
        CHECK(std::abs(s2 - law.p2) < 5.0 * se2);
    }
}

TEST_CASE("inverse normal cdf") {
    CHECK(inverse_normal_cdf(0.5) == 0.0);
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-14));
    CHECK(inverse_normal_cdf(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.2) == doctest::Approx(-inverse_normal_cdf(0.8)).epsilon(1e-15));
}

TEST_CASE("counter streams") {
    const CounterStream a(1, 0, CounterStream::brownian);
    const CounterStream b(1, 1, CounterStream::brownian);
    const CounterStream c(1, 0, CounterStream::jumps);
    CHECK(a.bits(0) == CounterStream(1, 0, CounterStream::brownian).bits(0));
    CHECK(a.bits(0) != b.bits(0));
    CHECK(a.bits(0) != c.bits(0));
    double mean = 0.0;
    for (int k = 0; k < 100000; ++k) mean += a.normal(k);
    CHECK(std::abs(mean / 100000) < 0.02);
}

TEST_CASE("lump control") {
    const TimeGrid g(1.0, 0.25);
    const auto l = LumpControl::constant(g, 0.3);
    CHECK(l(0.6, 5.0) == doctest::Approx(0.3));
    CHECK_THROWS_AS(LumpControl(g, {1.0}, {1.0}, {0.0}, {0.0}), ValidationError);
}

TEST_CASE("model hash is sensitive to parameters") {
    auto a = fixtures::baseline_model();
    auto b = a;
    CHECK(hash_model(a) == hash_model(b));
    b.sigma = 0.5000001;
    CHECK(hash_model(a) != hash_model(b));
    auto o = fixtures::baseline_objective();
    auto o2 = o;
    o2.kappa = 1.0;
    CHECK(hash_objective(o) != hash_objective(o2));
}
