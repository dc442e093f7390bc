#include "lqdiv/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lqdiv/error.hpp"
#include "lqdiv/hash.hpp"
#include "lqdiv/valuation.hpp"

namespace lqdiv {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> allowed) {
    if (!obj.is_object()) throw ValidationError(where + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (!allowed.count(key)) throw ValidationError("unknown key " + where + "." + key);
    }
}

double number(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ValidationError(where + "." + key + " must be a number");
    return v.get<double>();
}

template <typename Int>
Int integer(const json& obj, const std::string& where, const char* key, Int fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || (std::is_unsigned_v<Int> && v.get<std::int64_t>() < 0)) {
        throw ValidationError(where + "." + key + " must be a non-negative integer");
    }
    return v.get<Int>();
}

TimeFunction time_function(const json& obj, const std::string& where, const char* key,
                           const TimeFunction& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    const std::string name = where + "." + key;
    if (v.is_number()) return TimeFunction(v.get<double>());
    if (!v.is_array() || v.empty()) {
        throw ValidationError(name + " must be a number or a list of [t, value] pairs");
    }
    std::vector<TimeFunction::Piece> pieces;
    for (const auto& item : v) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
            throw ValidationError(name + " entries must be [t, value] pairs");
        }
        pieces.push_back({item[0].get<double>(), item[1].get<double>()});
    }
    return TimeFunction(std::move(pieces));
}

json emit_time_function(const TimeFunction& f) {
    if (f.is_constant()) return f.pieces().front().value;
    json arr = json::array();
    for (const auto& p : f.pieces()) arr.push_back({p.time, p.value});
    return arr;
}

std::vector<double> number_list(const json& obj, const std::string& where, const char* key) {
    std::vector<double> out;
    if (!obj.contains(key)) return out;
    const auto& v = obj.at(key);
    if (!v.is_array()) throw ValidationError(where + "." + key + " must be a list of numbers");
    for (const auto& item : v) {
        if (!item.is_number()) throw ValidationError(where + "." + key + " must hold numbers");
        out.push_back(item.get<double>());
    }
    return out;
}

JumpLaw parse_jumps(const json& j) {
    reject_unknown(j, "model.jumps", {"kind", "mean", "sd", "rate", "shift", "sign", "p1", "p2"});
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        throw ValidationError("model.jumps.kind must be a string");
    }
    const auto kind = j.at("kind").get<std::string>();
    const std::string w = "model.jumps";
    const int sign = integer<int>(j, w, "sign", 1);
    JumpLaw law;
    if (kind == "none") {
        law = JumpLaw::none();
    } else if (kind == "normal") {
        law = JumpLaw::normal(number(j, w, "mean", 0.0), number(j, w, "sd", 1.0));
    } else if (kind == "exponential") {
        law = JumpLaw::exponential(number(j, w, "rate", 1.0), sign);
    } else if (kind == "shifted_exponential") {
        law = JumpLaw::shifted_exponential(number(j, w, "rate", 1.0), number(j, w, "shift", 0.0),
                                           sign);
    } else {
        throw ValidationError("model.jumps.kind must be none, normal, exponential or "
                              "shifted_exponential");
    }
    if (j.contains("p1")) law.declared_p1 = number(j, w, "p1", 0.0);
    if (j.contains("p2")) law.declared_p2 = number(j, w, "p2", 0.0);
    return law;
}

json emit_jumps(const JumpLaw& law) {
    json j;
    j["kind"] = to_string(law.kind);
    switch (law.kind) {
        case JumpKind::none: break;
        case JumpKind::normal:
            j["mean"] = law.mean;
            j["sd"] = law.sd;
            break;
        case JumpKind::shifted_exponential:
            j["shift"] = law.shift;
            [[fallthrough]];
        case JumpKind::exponential:
            j["rate"] = law.rate;
            j["sign"] = law.sign;
            break;
    }
    if (law.declared_p1) j["p1"] = *law.declared_p1;
    if (law.declared_p2) j["p2"] = *law.declared_p2;
    return j;
}

ModelParams parse_model(const json& j) {
    reject_unknown(j, "model", {"c", "sigma", "lambda", "jumps", "delta", "delta_tilde", "T"});
    ModelParams m;
    const std::string w = "model";
    m.c = time_function(j, w, "c", m.c);
    m.sigma = number(j, w, "sigma", m.sigma);
    m.lambda = time_function(j, w, "lambda", m.lambda);
    if (j.contains("jumps")) m.jumps = parse_jumps(j.at("jumps"));
    m.delta = number(j, w, "delta", m.delta);
    m.delta_tilde = number(j, w, "delta_tilde", m.delta_tilde);
    m.horizon = number(j, w, "T", m.horizon);
    return m;
}

LQObjective parse_objective(const json& j) {
    reject_unknown(j, "objective", {"l0", "l1", "x0", "gamma", "delta_gamma_T", "gamma_i",
                                    "kappa", "tau", "x_T"});
    LQObjective o;
    const std::string w = "objective";
    o.l0 = time_function(j, w, "l0", o.l0);
    o.l1 = time_function(j, w, "l1", o.l1);
    o.x0 = time_function(j, w, "x0", o.x0);
    o.gamma = time_function(j, w, "gamma", o.gamma);
    o.delta_gamma_T = number(j, w, "delta_gamma_T", o.delta_gamma_T);
    o.gamma_i = time_function(j, w, "gamma_i", o.gamma_i);
    o.kappa = number(j, w, "kappa", o.kappa);
    o.tau = integer<int>(j, w, "tau", o.tau);
    o.x_T = number(j, w, "x_T", o.x_T);
    return o;
}

StrategySpec parse_strategy(const json& j, std::size_t index) {
    const std::string w = "strategies[" + std::to_string(index) + "]";
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ValidationError(w + ".type must be a string");
    }
    StrategySpec s;
    s.type = j.at("type").get<std::string>();
    if (s.type == "lq") {
        reject_unknown(j, w, {"type", "stop_at_ruin"});
    } else if (s.type == "mean_reverting") {
        reject_unknown(j, w, {"type", "l0", "l1", "level", "stop_at_ruin"});
        s.l0 = number(j, w, "l0", 0.0);
        if (j.contains("level") == j.contains("l1")) {
            throw ValidationError(w + " needs exactly one of l1 and level");
        }
        if (j.contains("level")) {
            s.level = number(j, w, "level", 0.0);
        } else {
            s.l1 = number(j, w, "l1", 0.0);
        }
    } else if (s.type == "barrier") {
        reject_unknown(j, w, {"type", "b", "stop_at_ruin"});
        if (!j.contains("b")) throw ValidationError(w + ".b is required");
        const auto& b = j.at("b");
        if (b.is_string() && b.get<std::string>() == "optimal") {
            s.b.reset();
        } else if (b.is_number()) {
            s.b = b.get<double>();
            if (!(*s.b > 0.0)) throw ValidationError(w + ".b must be positive");
        } else {
            throw ValidationError(w + ".b must be a number or \"optimal\"");
        }
    } else {
        throw ValidationError(w + ".type must be lq, mean_reverting or barrier");
    }
    if (j.contains("stop_at_ruin")) {
        if (!j.at("stop_at_ruin").is_boolean()) {
            throw ValidationError(w + ".stop_at_ruin must be a boolean");
        }
        s.stop_at_ruin = j.at("stop_at_ruin").get<bool>();
    }
    return s;
}

json emit_strategy(const StrategySpec& s) {
    json j;
    j["type"] = s.type;
    if (s.type == "mean_reverting") {
        j["l0"] = s.l0;
        if (s.level) {
            j["level"] = *s.level;
        } else {
            j["l1"] = s.l1;
        }
    } else if (s.type == "barrier") {
        if (s.b) {
            j["b"] = *s.b;
        } else {
            j["b"] = "optimal";
        }
    }
    if (s.stop_at_ruin) j["stop_at_ruin"] = *s.stop_at_ruin;
    return j;
}

SimulationSection parse_simulation(const json& j) {
    reject_unknown(j, "simulation", {"n_paths", "step", "seed", "x0_initial",
                                     "x0_bstar_multiples", "workers", "noise_refinement"});
    SimulationSection s;
    const std::string w = "simulation";
    s.n_paths = integer<std::size_t>(j, w, "n_paths", s.n_paths);
    s.step = number(j, w, "step", s.step);
    s.seed = integer<std::uint64_t>(j, w, "seed", s.seed);
    s.x0_initial = number_list(j, w, "x0_initial");
    s.x0_bstar_multiples = number_list(j, w, "x0_bstar_multiples");
    s.workers = integer<unsigned>(j, w, "workers", s.workers);
    s.noise_refinement = integer<unsigned>(j, w, "noise_refinement", s.noise_refinement);
    if (s.n_paths == 0) throw ValidationError("simulation.n_paths must be >= 1");
    if (!(s.step > 0.0)) throw ValidationError("simulation.step must be positive");
    if (s.noise_refinement == 0) throw ValidationError("simulation.noise_refinement must be >= 1");
    return s;
}

OutputSection parse_output(const json& j) {
    reject_unknown(j, "output", {"directory", "formats"});
    OutputSection o;
    if (j.contains("directory")) {
        if (!j.at("directory").is_string()) {
            throw ValidationError("output.directory must be a string");
        }
        o.directory = j.at("directory").get<std::string>();
    }
    if (j.contains("formats")) {
        o.formats.clear();
        const auto& f = j.at("formats");
        if (!f.is_array()) throw ValidationError("output.formats must be a list");
        for (const auto& item : f) {
            if (!item.is_string() || item.get<std::string>() != "csv") {
                throw ValidationError("output.formats supports only \"csv\"");
            }
            o.formats.push_back(item.get<std::string>());
        }
    }
    return o;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    reject_unknown(doc, "config", {"model", "objective", "strategies", "simulation", "output"});
    ExperimentConfig cfg;
    if (!doc.contains("model")) throw ValidationError("config.model is required");
    cfg.model = parse_model(doc.at("model"));
    if (doc.contains("objective")) cfg.objective = parse_objective(doc.at("objective"));
    if (doc.contains("strategies")) {
        const auto& list = doc.at("strategies");
        if (!list.is_array()) throw ValidationError("config.strategies must be a list");
        for (std::size_t i = 0; i < list.size(); ++i) {
            cfg.strategies.push_back(parse_strategy(list[i], i));
        }
    }
    if (doc.contains("simulation")) cfg.simulation = parse_simulation(doc.at("simulation"));
    if (doc.contains("output")) cfg.output = parse_output(doc.at("output"));

    require_valid(cfg.model, cfg.objective);
    // Fails early if the step does not divide the horizon.
    TimeGrid(cfg.model.horizon, cfg.simulation.step);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& c) {
    json doc;
    const auto& m = c.model;
    doc["model"] = {{"c", emit_time_function(m.c)},
                    {"sigma", m.sigma},
                    {"lambda", emit_time_function(m.lambda)},
                    {"jumps", emit_jumps(m.jumps)},
                    {"delta", m.delta},
                    {"delta_tilde", m.delta_tilde},
                    {"T", m.horizon}};
    const auto& o = c.objective;
    doc["objective"] = {{"l0", emit_time_function(o.l0)},
                        {"l1", emit_time_function(o.l1)},
                        {"x0", emit_time_function(o.x0)},
                        {"gamma", emit_time_function(o.gamma)},
                        {"delta_gamma_T", o.delta_gamma_T},
                        {"gamma_i", emit_time_function(o.gamma_i)},
                        {"kappa", o.kappa},
                        {"tau", o.tau},
                        {"x_T", o.x_T}};
    doc["strategies"] = json::array();
    for (const auto& s : c.strategies) doc["strategies"].push_back(emit_strategy(s));
    const auto& s = c.simulation;
    doc["simulation"] = {{"n_paths", s.n_paths},
                         {"step", s.step},
                         {"seed", s.seed},
                         {"x0_initial", s.x0_initial},
                         {"x0_bstar_multiples", s.x0_bstar_multiples},
                         {"workers", s.workers},
                         {"noise_refinement", s.noise_refinement}};
    doc["output"] = {{"directory", c.output.directory}, {"formats", c.output.formats}};
    return doc.dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    // Worker count and output location never change results.
    ExperimentConfig canonical = config;
    canonical.simulation.workers = 1;
    canonical.output = OutputSection{};
    return Fnv1a().add(emit_config(canonical)).value();
}

SimConfig sim_config(const ExperimentConfig& config) {
    SimConfig s;
    s.n_paths = config.simulation.n_paths;
    s.step = config.simulation.step;
    s.horizon = config.model.horizon;
    s.seed = config.simulation.seed;
    s.workers = config.simulation.workers;
    s.noise_refinement = config.simulation.noise_refinement;
    return s;
}

std::vector<double> initial_surpluses(const ExperimentConfig& config) {
    std::vector<double> xs = config.simulation.x0_initial;
    if (!config.simulation.x0_bstar_multiples.empty()) {
        const double b = optimal_barrier(
            barrier_roots(config.model.c(0.0), config.model.sigma, config.model.delta_tilde));
        for (double m : config.simulation.x0_bstar_multiples) xs.push_back(m * b);
    }
    return xs;
}

bool same_values(const ExperimentConfig& a, const ExperimentConfig& b) {
    const auto& ma = a.model;
    const auto& mb = b.model;
    const auto& oa = a.objective;
    const auto& ob = b.objective;
    return ma.c == mb.c && ma.sigma == mb.sigma && ma.lambda == mb.lambda &&
           ma.jumps == mb.jumps && ma.delta == mb.delta && ma.delta_tilde == mb.delta_tilde &&
           ma.horizon == mb.horizon && oa.l0 == ob.l0 && oa.l1 == ob.l1 && oa.x0 == ob.x0 &&
           oa.gamma == ob.gamma && oa.delta_gamma_T == ob.delta_gamma_T &&
           oa.gamma_i == ob.gamma_i && oa.kappa == ob.kappa && oa.tau == ob.tau &&
           oa.x_T == ob.x_T && a.strategies == b.strategies && a.simulation == b.simulation &&
           a.output == b.output;
}

}  // namespace lqdiv
