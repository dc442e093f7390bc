#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <sstream>

#include "lqdiv/commands.hpp"
#include "lqdiv/config.hpp"
#include "lqdiv/error.hpp"
#include "lqdiv/riccati.hpp"
#include "lqdiv/sim.hpp"
#include "lqdiv/strategy.hpp"
#include "lqdiv/valuation.hpp"

namespace py = pybind11;
using namespace lqdiv;

namespace {

using Pieces = std::vector<std::pair<double, double>>;

// Opaque holder so the variant is not converted by the stl casters.
struct PyStrategy {
    Strategy s;
};

TimeFunction to_time_function(const py::object& v) {
    if (py::isinstance<py::float_>(v) || py::isinstance<py::int_>(v)) {
        return TimeFunction(v.cast<double>());
    }
    std::vector<TimeFunction::Piece> pieces;
    for (const auto& [t, x] : v.cast<Pieces>()) pieces.push_back({t, x});
    return TimeFunction(std::move(pieces));
}

py::object from_time_function(const TimeFunction& f) {
    if (f.is_constant()) return py::float_(f.pieces().front().value);
    Pieces out;
    for (const auto& p : f.pieces()) out.emplace_back(p.time, p.value);
    return py::cast(out);
}

template <typename Class, typename Owner>
void time_property(Class& cls, const char* name, TimeFunction Owner::*member) {
    cls.def_property(
        name, [member](const Owner& o) { return from_time_function(o.*member); },
        [member](Owner& o, const py::object& v) { o.*member = to_time_function(v); });
}

py::dict record_dict(const PathRecord& r) {
    py::dict d;
    d["pv"] = r.pv;
    d["ruin_time"] = r.ruin_time ? py::cast(*r.ruin_time) : py::none();
    d["injected"] = r.injected;
    d["n_injections"] = r.n_injections;
    d["objective"] = r.objective;
    d["terminal_surplus"] = r.terminal_surplus;
    return d;
}

}  // namespace

PYBIND11_MODULE(_lqdiv, m) {
    m.doc() = "LQ dividend control: Riccati solver, barrier valuation and Monte Carlo";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<SimulationError>(m, "SimulationError", PyExc_RuntimeError);

    py::class_<JumpLaw>(m, "JumpLaw")
        .def_static("none", &JumpLaw::none)
        .def_static("normal", &JumpLaw::normal, py::arg("mean"), py::arg("sd"))
        .def_static("exponential", &JumpLaw::exponential, py::arg("rate"), py::arg("sign") = 1)
        .def_static("shifted_exponential", &JumpLaw::shifted_exponential, py::arg("rate"),
                    py::arg("shift"), py::arg("sign") = 1)
        .def_property_readonly("kind", [](const JumpLaw& l) { return to_string(l.kind); })
        .def_readonly("p1", &JumpLaw::p1)
        .def_readonly("p2", &JumpLaw::p2)
        .def("sample", &JumpLaw::sample, py::arg("uniform"));

    py::class_<ModelParams> model(m, "ModelParams");
    model.def(py::init<>());
    time_property(model, "c", &ModelParams::c);
    time_property(model, "lambda_", &ModelParams::lambda);
    model.def_readwrite("sigma", &ModelParams::sigma)
        .def_readwrite("jumps", &ModelParams::jumps)
        .def_readwrite("delta", &ModelParams::delta)
        .def_readwrite("delta_tilde", &ModelParams::delta_tilde)
        .def_readwrite("horizon", &ModelParams::horizon)
        .def_property_readonly("is_equivalent_diffusion",
                               [](const ModelParams& p) { return p.absorbed.has_value(); })
        .def("validate", [](const ModelParams& p) { return validate(p); });

    py::class_<LQObjective> obj(m, "LQObjective");
    obj.def(py::init<>());
    time_property(obj, "l0", &LQObjective::l0);
    time_property(obj, "l1", &LQObjective::l1);
    time_property(obj, "x0", &LQObjective::x0);
    time_property(obj, "gamma", &LQObjective::gamma);
    time_property(obj, "gamma_i", &LQObjective::gamma_i);
    obj.def_readwrite("delta_gamma_T", &LQObjective::delta_gamma_T)
        .def_readwrite("kappa", &LQObjective::kappa)
        .def_readwrite("tau", &LQObjective::tau)
        .def_readwrite("x_T", &LQObjective::x_T);

    m.def("validate", py::overload_cast<const ModelParams&, const LQObjective&>(&validate),
          py::arg("model"), py::arg("objective"));

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, double>(), py::arg("horizon"), py::arg("step"))
        .def_property_readonly("horizon", &TimeGrid::horizon)
        .def_property_readonly("step", &TimeGrid::step)
        .def_property_readonly("nodes", &TimeGrid::nodes)
        .def("time", &TimeGrid::time);

    py::class_<RiccatiSolution, std::shared_ptr<RiccatiSolution>>(m, "RiccatiSolution")
        .def_readonly("grid", &RiccatiSolution::grid)
        .def_readonly("q", &RiccatiSolution::q)
        .def_readonly("p", &RiccatiSolution::p)
        .def_readonly("r", &RiccatiSolution::r)
        .def("value", &RiccatiSolution::value, py::arg("k"), py::arg("x"));

    py::class_<PVCoefficients>(m, "PVCoefficients")
        .def_readonly("f", &PVCoefficients::f)
        .def_readonly("g", &PVCoefficients::g);

    py::class_<LumpControl, std::shared_ptr<LumpControl>>(m, "LumpControl")
        .def("__call__", &LumpControl::operator(), py::arg("t"), py::arg("x"));

    m.def(
        "solve_riccati",
        [](const ModelParams& model, const LQObjective& o, double step) {
            return std::make_shared<RiccatiSolution>(
                solve_riccati(model, o, TimeGrid(model.horizon, step)));
        },
        py::arg("model"), py::arg("objective"), py::arg("step"));
    m.def(
        "solve_pv_coefficients",
        [](const ModelParams& model, const LQObjective& o, const RiccatiSolution& s) {
            return solve_pv_coefficients(model, o, s, s.grid);
        },
        py::arg("model"), py::arg("objective"), py::arg("solution"));
    m.def("optimal_lump_control", &optimal_lump_control, py::arg("solution"), py::arg("model"),
          py::arg("objective"));
    m.def("equivalent_diffusion", &equivalent_diffusion, py::arg("model"), py::arg("control"));
    m.def("hjb_residual", &hjb_residual, py::arg("solution"), py::arg("model"),
          py::arg("objective"), py::arg("t"), py::arg("x"));

    py::class_<BarrierRoots>(m, "BarrierRoots")
        .def_readonly("r", &BarrierRoots::r)
        .def_readonly("s", &BarrierRoots::s);
    m.def("barrier_roots", &barrier_roots, py::arg("c"), py::arg("sigma"), py::arg("delta_tilde"));
    m.def("optimal_barrier", &optimal_barrier, py::arg("roots"));
    m.def("barrier_value", &barrier_value, py::arg("x"), py::arg("b"), py::arg("roots"));
    m.def("pv_affine", &pv_affine, py::arg("pv"), py::arg("t"), py::arg("x"));
    m.def("cost_of_smoothing", &cost_of_smoothing, py::arg("pv"), py::arg("roots"),
          py::arg("b_star"), py::arg("t"), py::arg("x"));

    py::class_<PyStrategy>(m, "Strategy")
        .def_property_readonly("tag", [](const PyStrategy& p) { return strategy_tag(p.s); })
        .def_property_readonly("parameters",
                               [](const PyStrategy& p) { return strategy_parameters(p.s); })
        .def("rate", [](const PyStrategy& p, double t, double x) { return rate(p.s, t, x); })
        .def("lump", [](const PyStrategy& p, double t, double x) { return lump(p.s, t, x); });
    m.def(
        "lq_affine",
        [](std::shared_ptr<RiccatiSolution> s, const ModelParams& model, const LQObjective& o) {
            return PyStrategy{make_lq_affine(std::move(s), model, o)};
        },
        py::arg("solution"), py::arg("model"), py::arg("objective"));
    m.def(
        "mean_reverting", [](double l0, double l1) { return PyStrategy{make_mean_reverting(l0, l1)}; },
        py::arg("l0"), py::arg("l1"));
    m.def(
        "barrier", [](double b) { return PyStrategy{make_barrier(b)}; }, py::arg("b"));

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("n_paths", &SimConfig::n_paths)
        .def_readwrite("step", &SimConfig::step)
        .def_readwrite("horizon", &SimConfig::horizon)
        .def_readwrite("seed", &SimConfig::seed)
        .def_readwrite("stop_at_ruin", &SimConfig::stop_at_ruin)
        .def_readwrite("workers", &SimConfig::workers)
        .def_readwrite("noise_refinement", &SimConfig::noise_refinement);

    py::class_<SimResult>(m, "SimResult")
        .def_readonly("mean", &SimResult::mean)
        .def_readonly("sd", &SimResult::sd)
        .def_readonly("ruin_count", &SimResult::ruin_count)
        .def_readonly("strategy", &SimResult::strategy)
        .def_readonly("config_hash", &SimResult::config_hash)
        .def("standard_error", &SimResult::standard_error)
        .def_property_readonly("pv",
                               [](const SimResult& r) {
                                   std::vector<double> v;
                                   for (const auto& x : r.records) v.push_back(x.pv);
                                   return v;
                               })
        .def("record", [](const SimResult& r, std::size_t i) { return record_dict(r.records.at(i)); });

    m.def(
        "simulate",
        [](const ModelParams& model, const PyStrategy& s, double x0, const SimConfig& cfg) {
            py::gil_scoped_release release;
            return simulate(model, s.s, x0, cfg);
        },
        py::arg("model"), py::arg("strategy"), py::arg("x0"), py::arg("config"));
    m.def(
        "paired_compare",
        [](const ModelParams& model, const std::vector<PyStrategy>& list, double x0,
           const SimConfig& cfg) {
            std::vector<Strategy> s;
            for (const auto& p : list) s.push_back(p.s);
            py::gil_scoped_release release;
            return paired_compare(model, s, x0, cfg).results;
        },
        py::arg("model"), py::arg("strategies"), py::arg("x0"), py::arg("config"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readwrite("model", &ExperimentConfig::model)
        .def_readwrite("objective", &ExperimentConfig::objective)
        .def("to_json", [](const ExperimentConfig& c) { return emit_config(c); })
        .def_property_readonly("hash", [](const ExperimentConfig& c) { return config_hash(c); });
    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));

    auto run = [](auto&& fn) {
        std::ostringstream log;
        fn(log);
        return log.str();
    };
    m.def(
        "cmd_solve",
        [run](const ExperimentConfig& c, const std::filesystem::path& out) {
            return run([&](std::ostream& log) { cmd_solve(c, out, log); });
        },
        py::arg("config"), py::arg("out"));
    m.def(
        "cmd_simulate",
        [run](const ExperimentConfig& c, const std::filesystem::path& out) {
            return run([&](std::ostream& log) { cmd_simulate(c, out, log); });
        },
        py::arg("config"), py::arg("out"));
    m.def(
        "cmd_verify",
        [](const ExperimentConfig& c, const std::filesystem::path& out, double perturb_q) {
            std::ostringstream log;
            VerifyOptions opt;
            opt.perturb_q = perturb_q;
            const auto rep = cmd_verify(c, opt, out, log);
            return py::make_tuple(rep.passed, rep.max_residual, log.str());
        },
        py::arg("config"), py::arg("out"), py::arg("perturb_q") = 0.0);
}
