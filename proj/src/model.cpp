#include "lqdiv/model.hpp"

#include <cmath>
#include <sstream>

#include "lqdiv/error.hpp"
#include "lqdiv/hash.hpp"
#include "lqdiv/random.hpp"

namespace lqdiv {

const char* to_string(JumpKind kind) {
    switch (kind) {
        case JumpKind::none: return "none";
        case JumpKind::normal: return "normal";
        case JumpKind::exponential: return "exponential";
        case JumpKind::shifted_exponential: return "shifted_exponential";
    }
    return "unknown";
}

namespace {

std::string law_problem(const JumpLaw& law) {
    switch (law.kind) {
        case JumpKind::none: return {};
        case JumpKind::normal:
            if (!std::isfinite(law.mean) || !(law.sd >= 0.0) || !std::isfinite(law.sd)) {
                return "normal jump law needs finite mean and sd >= 0";
            }
            return {};
        case JumpKind::exponential:
        case JumpKind::shifted_exponential:
            if (!(law.rate > 0.0) || !std::isfinite(law.rate)) {
                return "exponential jump law needs rate > 0";
            }
            if (law.sign != 1 && law.sign != -1) return "jump sign must be +1 or -1";
            if (law.kind == JumpKind::shifted_exponential &&
                (!std::isfinite(law.shift) || law.shift < 0.0)) {
                return "shifted exponential jump law needs shift >= 0";
            }
            return {};
    }
    return "unsupported jump kind";
}

JumpLaw with_moments(JumpLaw law) {
    if (law_problem(law).empty()) {
        const auto [m1, m2] = jump_moments(law);
        law.p1 = m1;
        law.p2 = m2;
    }
    return law;
}

}  // namespace

JumpLaw JumpLaw::none() { return {}; }

JumpLaw JumpLaw::normal(double mean, double sd) {
    JumpLaw law;
    law.kind = JumpKind::normal;
    law.mean = mean;
    law.sd = sd;
    return with_moments(law);
}

JumpLaw JumpLaw::exponential(double rate, int sign) {
    JumpLaw law;
    law.kind = JumpKind::exponential;
    law.rate = rate;
    law.sign = sign;
    return with_moments(law);
}

JumpLaw JumpLaw::shifted_exponential(double rate, double shift, int sign) {
    JumpLaw law;
    law.kind = JumpKind::shifted_exponential;
    law.rate = rate;
    law.shift = shift;
    law.sign = sign;
    return with_moments(law);
}

std::pair<double, double> jump_moments(const JumpLaw& law) {
    if (auto problem = law_problem(law); !problem.empty()) throw ValidationError(problem);
    switch (law.kind) {
        case JumpKind::none: return {0.0, 0.0};
        case JumpKind::normal: return {law.mean, law.mean * law.mean + law.sd * law.sd};
        case JumpKind::exponential:
            return {law.sign / law.rate, 2.0 / (law.rate * law.rate)};
        case JumpKind::shifted_exponential: {
            const double m = law.shift + 1.0 / law.rate;
            const double var = 1.0 / (law.rate * law.rate);
            return {law.sign * m, m * m + var};
        }
    }
    throw ValidationError("unsupported jump kind");
}

double JumpLaw::sample(double u) const {
    switch (kind) {
        case JumpKind::none: return 0.0;
        case JumpKind::normal: return mean + sd * inverse_normal_cdf(u);
        case JumpKind::exponential: return sign * (-std::log(u) / rate);
        case JumpKind::shifted_exponential: return sign * (shift - std::log(u) / rate);
    }
    return 0.0;
}

LumpControl::LumpControl(TimeGrid grid, std::vector<double> slope, std::vector<double> intercept,
                         std::vector<double> slope_dt, std::vector<double> intercept_dt)
    : grid_(grid),
      slope_(std::move(slope)),
      intercept_(std::move(intercept)),
      slope_dt_(std::move(slope_dt)),
      intercept_dt_(std::move(intercept_dt)) {
    const auto n = grid_.nodes();
    if (slope_.size() != n || intercept_.size() != n || slope_dt_.size() != n ||
        intercept_dt_.size() != n) {
        throw ValidationError("lump control arrays must have one entry per grid node");
    }
}

LumpControl LumpControl::constant(const TimeGrid& grid, double value) {
    const auto n = grid.nodes();
    return LumpControl(grid, std::vector<double>(n, 0.0), std::vector<double>(n, value),
                       std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

double LumpControl::slope(double t) const {
    return interpolate_hermite(grid_, slope_, slope_dt_, t);
}

double LumpControl::intercept(double t) const {
    return interpolate_hermite(grid_, intercept_, intercept_dt_, t);
}

double ModelParams::drift(double t, double x) const {
    double mu = c(t);
    if (absorbed) {
        const double i = (*absorbed->control)(t, x);
        mu += absorbed->lambda(t) * (absorbed->p1 - i);
    }
    return mu;
}

double ModelParams::variance(double t, double x) const {
    double v = sigma * sigma;
    if (absorbed) {
        const double i = (*absorbed->control)(t, x);
        v += absorbed->lambda(t) * (absorbed->p2 + i * i - 2.0 * absorbed->p1 * i);
    }
    return v;
}

namespace {

void check_function(std::vector<std::string>& out, const char* name, const TimeFunction& f,
                    double horizon, bool nonnegative) {
    for (const auto& piece : f.pieces()) {
        if (!f.is_constant() && (piece.time < 0.0 || piece.time > horizon)) {
            out.push_back(std::string(name) + ": breakpoints must lie in [0, T]");
            break;
        }
    }
    if (nonnegative && f.min_value() < 0.0) {
        out.push_back(std::string(name) + " must be >= 0");
    }
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b)) ||
           (a == 0.0 && b == 0.0);
}

}  // namespace

std::vector<std::string> validate(const ModelParams& m) {
    std::vector<std::string> out;
    if (!(m.horizon > 0.0) || !std::isfinite(m.horizon)) out.emplace_back("T must be > 0");
    if (!(m.delta_tilde > 0.0) || !std::isfinite(m.delta_tilde)) {
        out.emplace_back("delta_tilde must be > 0");
    }
    if (!(m.delta >= 0.0) || !std::isfinite(m.delta)) out.emplace_back("delta must be >= 0");
    if (!(m.sigma >= 0.0) || !std::isfinite(m.sigma)) out.emplace_back("sigma must be >= 0");
    const double horizon = m.horizon > 0.0 ? m.horizon : 0.0;
    check_function(out, "c", m.c, horizon, false);
    check_function(out, "lambda", m.lambda, horizon, true);

    if (auto problem = law_problem(m.jumps); !problem.empty()) {
        out.push_back(problem);
    } else {
        const auto [p1, p2] = jump_moments(m.jumps);
        if (!std::isfinite(p1) || !std::isfinite(p2)) out.emplace_back("jump moments must be finite");
        if (p2 < p1 * p1 * (1.0 - 1e-12)) out.emplace_back("jump moments need p2 >= p1^2");
        if (!close_rel(p1, m.jumps.p1, 1e-12) || !close_rel(p2, m.jumps.p2, 1e-12)) {
            out.emplace_back("stored jump moments disagree with the law's parameters");
        }
        if (m.jumps.declared_p1 && !close_rel(*m.jumps.declared_p1, p1, 1e-12)) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "declared p1=" << *m.jumps.declared_p1 << " but analytic p1=" << p1;
            out.push_back(msg.str());
        }
        if (m.jumps.declared_p2 && !close_rel(*m.jumps.declared_p2, p2, 1e-12)) {
            std::ostringstream msg;
            msg.precision(12);
            msg << "declared p2=" << *m.jumps.declared_p2 << " but analytic p2=" << p2;
            out.push_back(msg.str());
        }
    }
    if (m.jumps.kind == JumpKind::none && m.lambda.max_value() != 0.0) {
        out.emplace_back("lambda must be 0 when there is no jump law");
    }
    if (m.absorbed) {
        if (m.jumps.kind != JumpKind::none) {
            out.emplace_back("equivalent-diffusion model must not also carry jumps");
        }
        if (!m.absorbed->control) out.emplace_back("absorbed jumps need a lump control");
        check_function(out, "absorbed lambda", m.absorbed->lambda, horizon, true);
        if (m.absorbed->p2 < m.absorbed->p1 * m.absorbed->p1 * (1.0 - 1e-12)) {
            out.emplace_back("absorbed jump moments need p2 >= p1^2");
        }
    }
    return out;
}

std::vector<std::string> validate(const ModelParams& model, const LQObjective& o) {
    auto out = validate(model);
    const double horizon = model.horizon > 0.0 ? model.horizon : 0.0;
    if (o.tau < 0 || o.tau > 2) out.emplace_back("tau must be in {0,1,2}");
    check_function(out, "l0", o.l0, horizon, false);
    check_function(out, "l1", o.l1, horizon, false);
    check_function(out, "x0", o.x0, horizon, true);
    check_function(out, "gamma", o.gamma, horizon, true);
    check_function(out, "gamma_i", o.gamma_i, horizon, true);
    if (!(o.delta_gamma_T >= 0.0) || !std::isfinite(o.delta_gamma_T)) {
        out.emplace_back("delta_gamma_T must be >= 0");
    }
    if (!(o.kappa >= 0.0) || !std::isfinite(o.kappa)) out.emplace_back("kappa must be >= 0");
    if (!std::isfinite(o.x_T)) out.emplace_back("x_T must be finite");
    return out;
}

void require_valid(const ModelParams& model, const LQObjective& objective) {
    const auto problems = validate(model, objective);
    if (problems.empty()) return;
    std::string msg = "invalid problem:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
}

namespace {

void add_function(Fnv1a& h, const TimeFunction& f) {
    h.add(static_cast<std::uint64_t>(f.pieces().size()));
    for (const auto& p : f.pieces()) h.add(p.time).add(p.value);
}

}  // namespace

std::uint64_t hash_model(const ModelParams& m) {
    Fnv1a h;
    add_function(h, m.c);
    h.add(m.sigma);
    add_function(h, m.lambda);
    h.add(static_cast<std::int64_t>(m.jumps.kind))
        .add(m.jumps.mean)
        .add(m.jumps.sd)
        .add(m.jumps.rate)
        .add(m.jumps.shift)
        .add(static_cast<std::int64_t>(m.jumps.sign));
    h.add(m.delta).add(m.delta_tilde).add(m.horizon);
    if (m.absorbed) {
        add_function(h, m.absorbed->lambda);
        h.add(m.absorbed->p1).add(m.absorbed->p2);
        const auto& ctl = *m.absorbed->control;
        for (std::size_t k = 0; k < ctl.grid().nodes(); ++k) {
            h.add(ctl.slope_at(k)).add(ctl.intercept_at(k));
        }
    }
    return h.value();
}

std::uint64_t hash_objective(const LQObjective& o) {
    Fnv1a h;
    add_function(h, o.l0);
    add_function(h, o.l1);
    add_function(h, o.x0);
    add_function(h, o.gamma);
    h.add(o.delta_gamma_T);
    add_function(h, o.gamma_i);
    h.add(o.kappa).add(static_cast<std::int64_t>(o.tau)).add(o.x_T);
    return h.value();
}

}  // namespace lqdiv
