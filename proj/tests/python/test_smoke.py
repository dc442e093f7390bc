import math
import pathlib

import pytest

import lqdiv


def baseline():
    m = lqdiv.ModelParams()
    m.c = 1.0
    m.sigma = 0.5
    m.delta = 0.05
    m.delta_tilde = 0.05
    m.horizon = 20.0
    o = lqdiv.LQObjective()
    o.l1 = 1 / 1.884
    o.x0 = 1.884
    o.gamma = 1.0
    return m, o


def test_optimal_barrier():
    roots = lqdiv.barrier_roots(1.0, 0.5, 0.05)
    b = lqdiv.optimal_barrier(roots)
    assert abs(b - 1.256) < 1e-3
    assert lqdiv.barrier_value(b, b, roots) == pytest.approx(20.0)


def test_riccati_and_pv():
    m, o = baseline()
    sol = lqdiv.solve_riccati(m, o, 0.01)
    assert sol.q[-1] == 0.0 and sol.p[-1] == 0.0 and sol.r[-1] == 0.0
    b = 0.05 + 2 / 1.884
    assert sol.q[0] == pytest.approx((-b + math.sqrt(b * b + 4)) / 4, rel=1e-8)
    pv = lqdiv.solve_pv_coefficients(m, o, sol)
    assert lqdiv.pv_affine(pv, 0.0, 0.5) == pytest.approx(pv.f[0] * 0.5 + pv.g[0])
    assert abs(lqdiv.hjb_residual(sol, m, o, 1.0, 0.7)) < 1e-6


def test_time_functions():
    m, o = baseline()
    o.l0 = [(0.0, 0.1), (10.0, 0.2)]
    assert o.l0 == [(0.0, 0.1), (10.0, 0.2)]
    with pytest.raises(lqdiv.ValidationError):
        o.l0 = [(1.0, 0.1), (1.0, 0.2)]


def test_simulation_is_deterministic():
    m, o = baseline()
    cfg = lqdiv.SimConfig()
    cfg.horizon = m.horizon
    cfg.step = 0.01
    cfg.n_paths = 50
    sol = lqdiv.solve_riccati(m, o, 0.01)
    strategies = [lqdiv.barrier(1.256), lqdiv.mean_reverting(0.0, 1 / 1.884),
                  lqdiv.lq_affine(sol, m, o)]
    a = lqdiv.paired_compare(m, strategies, 0.6, cfg)
    cfg.workers = 4
    b = lqdiv.paired_compare(m, strategies, 0.6, cfg)
    assert [r.pv for r in a] == [r.pv for r in b]
    assert [r.strategy for r in a] == ["barrier", "mean_reverting", "lq"]
    assert a[2].ruin_count == 0
    assert a[0].record(0)["pv"] == a[0].pv[0]


def test_errors():
    with pytest.raises(lqdiv.ValidationError):
        lqdiv.barrier_roots(1.0, 0.0, 0.05)
    with pytest.raises(lqdiv.ValidationError):
        lqdiv.parse_config('{"model": {"bogus": 1}}')
    m, o = baseline()
    m.lambda_ = 1.0
    m.jumps = lqdiv.JumpLaw.exponential(2.0)
    o.gamma_i = 0.0
    with pytest.raises(lqdiv.SolverError):
        lqdiv.solve_riccati(m, o, 0.01)


def test_config_commands(tmp_path: pathlib.Path):
    text = """{
      "model": {"c": 1, "sigma": 0.5, "delta": 0.05, "delta_tilde": 0.05, "T": 5},
      "objective": {"l1": 0.530785562632696, "x0": 1.884, "gamma": 1},
      "strategies": [{"type": "barrier", "b": "optimal"}, {"type": "lq"}],
      "simulation": {"n_paths": 10, "step": 0.01, "x0_initial": [0.6]}
    }"""
    cfg = lqdiv.parse_config(text)
    again = lqdiv.parse_config(cfg.to_json())
    assert again.to_json() == cfg.to_json()
    assert again.hash == cfg.hash
    lqdiv.cmd_solve(cfg, tmp_path / "solve")
    lines = (tmp_path / "solve" / "riccati.csv").read_text().splitlines()
    assert lines[0].startswith("# config_hash=") and lines[1] == "t,q,p,r"
    lqdiv.cmd_simulate(cfg, tmp_path / "sim")
    assert (tmp_path / "sim" / "paths_x0.csv").exists()
    passed, residual, _ = lqdiv.cmd_verify(cfg, tmp_path / "verify")
    assert passed and residual < 1e-4
    passed, _, _ = lqdiv.cmd_verify(cfg, tmp_path / "verify_bad", perturb_q=0.05)
    assert not passed
