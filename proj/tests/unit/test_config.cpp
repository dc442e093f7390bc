#include <doctest.h>

#include <string>

#include "lqdiv/config.hpp"
#include "lqdiv/error.hpp"

using namespace lqdiv;

namespace {

const char* const kBaseline = R"({
  "model": {"c": 1, "sigma": 0.5, "delta": 0.05, "delta_tilde": 0.05, "T": 200},
  "objective": {"l0": 0, "l1": 0.530785562632696, "x0": 1.884, "gamma": 1},
  "strategies": [
    {"type": "barrier", "b": "optimal"},
    {"type": "mean_reverting", "l0": 0, "level": 1.884},
    {"type": "lq"}
  ],
  "simulation": {"n_paths": 2500, "step": 0.0025, "seed": 1,
                 "x0_bstar_multiples": [0.1, 0.5, 1, 1.5, 2]}
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

}  // namespace

TEST_CASE("parse baseline config") {
    const auto c = parse_config(kBaseline);
    CHECK(c.model.sigma == 0.5);
    CHECK(c.model.horizon == 200.0);
    CHECK(c.objective.x0(0.0) == 1.884);
    REQUIRE(c.strategies.size() == 3);
    CHECK_FALSE(c.strategies[0].b.has_value());
    CHECK(*c.strategies[1].level == 1.884);
    CHECK(c.simulation.n_paths == 2500);
    const auto xs = initial_surpluses(c);
    REQUIRE(xs.size() == 5);
    CHECK(xs[1] == doctest::Approx(0.628).epsilon(1e-3));
    const auto sim = sim_config(c);
    CHECK(sim.horizon == 200.0);
    CHECK(sim.step == 0.0025);
}

TEST_CASE("round trip") {
    auto c = parse_config(kBaseline);
    c.model.lambda = TimeFunction({{0.0, 0.5}, {100.0, 1.0}});
    c.model.jumps = JumpLaw::shifted_exponential(2.0, 0.1, -1);
    c.model.jumps.declared_p1 = c.model.jumps.p1;
    c.objective.l0 = TimeFunction({{0.0, 0.1}, {50.0, 0.2}});
    c.objective.tau = 2;
    c.objective.kappa = 10.0;
    c.strategies[2].stop_at_ruin = true;
    const std::string once = emit_config(c);
    const auto back = parse_config(once);
    CHECK(same_values(c, back));
    CHECK(emit_config(back) == once);
    CHECK(config_hash(c) == config_hash(back));
}

TEST_CASE("config hash ignores workers and output") {
    auto a = parse_config(kBaseline);
    auto b = a;
    b.simulation.workers = 8;
    b.output.directory = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.simulation.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("rejected documents") {
    CHECK_THROWS_AS(parse_config("{"), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(kBaseline, "\"sigma\"", "\"sigmaa\"")), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(kBaseline, "\"gamma\": 1", "\"gamma\": 1, \"tau\": 3")),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(replace(kBaseline, "\"optimal\"", "\"best\"")), ValidationError);
    CHECK_THROWS_AS(parse_config(replace(kBaseline, "\"step\": 0.0025", "\"step\": 0.003")),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(replace(kBaseline, "{\"type\": \"lq\"}", "{\"type\": \"greedy\"}")),
                    ValidationError);
    CHECK_THROWS_AS(parse_config(replace(kBaseline, "\"level\": 1.884", "\"level\": 1.884, \"l1\": 1")),
                    ValidationError);
    CHECK_THROWS_AS(
        parse_config(replace(kBaseline, "\"T\": 200",
                             "\"T\": 200, \"lambda\": 1, \"jumps\": {\"kind\": \"exponential\", "
                             "\"rate\": 2, \"p1\": 0.4}")),
        ValidationError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}

TEST_CASE("piecewise time functions") {
    const auto c = parse_config(replace(kBaseline, "\"c\": 1", "\"c\": [[0, 1], [100, 1.5]]"));
    CHECK(c.model.c(99.0) == 1.0);
    CHECK(c.model.c(100.0) == 1.5);
    CHECK_THROWS_AS(parse_config(replace(kBaseline, "\"c\": 1", "\"c\": [[0, 1], [0, 2]]")),
                    ValidationError);
}
