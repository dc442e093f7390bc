#pragma once

#include "lqdiv/model.hpp"

namespace fixtures {

inline lqdiv::ModelParams baseline_model(double horizon = 200.0) {
    lqdiv::ModelParams m;
    m.c = 1.0;
    m.sigma = 0.5;
    m.delta = 0.05;
    m.delta_tilde = 0.05;
    m.horizon = horizon;
    return m;
}

inline lqdiv::LQObjective baseline_objective() {
    lqdiv::LQObjective o;
    o.l0 = 0.0;
    o.l1 = 1.0 / 1.884;
    o.x0 = 1.884;
    o.gamma = 1.0;
    return o;
}

/// Baseline dynamics plus unit-rate upward exponential(2) jumps.
inline lqdiv::ModelParams jump_model(double horizon = 200.0) {
    auto m = baseline_model(horizon);
    m.lambda = 1.0;
    m.jumps = lqdiv::JumpLaw::exponential(2.0, 1);
    return m;
}

}  // namespace fixtures
