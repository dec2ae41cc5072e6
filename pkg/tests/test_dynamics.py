import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from peskin import dynamics as dyn
from peskin.diagnostics import decay_rate_fit
from peskin.equilibrium import CircleState, basis
from peskin.errors import ConfigError
from peskin.spectral import grid, semigroup


def mode2(n, amp=0.05):
    s = grid(n)
    return basis(n)["r"] + amp * np.stack([np.cos(2 * s), np.sin(2 * s)])


def wobbly(n):
    s = grid(n)
    return np.stack([1.2 * np.cos(s) + 0.1 * np.cos(3 * s), 0.9 * np.sin(s) + 0.05 * np.sin(2 * s)])


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n": 15},
        {"n": 8},
        {"dt": 0.0},
        {"dt": -1e-3},
        {"t_final": 1e-4, "dt": 1e-3},
        {"integrator": "rk4"},
        {"eps_prime": 0.5},
        {"save_every": 0},
        {"m": 17},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        dyn.SimConfig(**kwargs)


def test_config_defaults():
    cfg = dyn.SimConfig(n=32, dt=0.1, t_final=1.0)
    assert cfg.m == 64
    assert cfg.n_steps == 10
    assert dyn.SimConfig(integrator="ETDRK2").integrator == "etdrk2"


def test_trajectory_times_must_increase():
    tr = dyn.Trajectory()
    tr.append(0.0, np.zeros(4))
    with pytest.raises(ValueError):
        tr.append(0.0, np.zeros(4))


@pytest.mark.parametrize("integrator", ["etd1", "etdrk2"])
@given(t_final=st.sampled_from([0.1, 0.5, 2.0]))
@settings(max_examples=3, deadline=None)
def test_etd_is_exact_on_linear_part(integrator, t_final):
    n = 32
    s = grid(n)
    f0 = np.cos(s) + 0.3 * np.sin(7 * s) + 0.1 * np.cos(15 * s)
    cfg = dyn.SimConfig(n=n, dt=0.1, t_final=t_final, integrator=integrator)
    traj = dyn.simulate_toy(f0, 0.5, cfg, nonlinear=False)
    np.testing.assert_allclose(traj.final, semigroup(f0, t_final), atol=1e-14)


def test_imex_is_only_first_order_on_linear_part():
    n = 32
    f0 = np.cos(8 * grid(n))
    errs = []
    for dt in (0.1, 0.05):
        cfg = dyn.SimConfig(n=n, dt=dt, t_final=1.0, integrator="imex-be")
        errs.append(np.abs(dyn.simulate_toy(f0, 0.5, cfg, nonlinear=False).final - semigroup(f0, 1.0)).max())
    assert errs[0] / errs[1] == pytest.approx(2.0, rel=0.2)


@pytest.mark.parametrize("state", [CircleState(1.0), CircleState(0.5, -0.5, 1.0, 2.0)])
@pytest.mark.parametrize("integrator", dyn.INTEGRATORS)
def test_circles_do_not_move(state, integrator):
    x0 = state.render(32).values
    cfg = dyn.SimConfig(n=32, dt=0.05, t_final=0.5, integrator=integrator)
    traj = dyn.simulate(x0, cfg, record=False)
    assert traj.status == "ok"
    np.testing.assert_allclose(traj.final, x0, atol=1e-12)


def _peskin_final(dt, integrator):
    cfg = dyn.SimConfig(n=32, dt=dt, t_final=0.2, integrator=integrator)
    return dyn.simulate(wobbly(32), cfg, record=False).final


@pytest.mark.parametrize("integrator,order,tol", [("etd1", 1.0, 0.1), ("etdrk2", 2.0, 0.15), ("imex-be", 1.0, 0.1)])
def test_peskin_self_convergence(integrator, order, tol):
    _, p = dyn.self_convergence(lambda h: _peskin_final(h, integrator), np.array([0.02, 0.01, 0.005]))
    assert p == pytest.approx(order, abs=tol)


def test_single_steps_agree_with_simulate():
    x0 = wobbly(32)
    cfg = dyn.SimConfig(n=32, dt=0.01, t_final=0.01, integrator="etdrk2")
    np.testing.assert_array_equal(dyn.step_etdrk2(x0, 0.01), dyn.simulate(x0, cfg, record=False).final)
    assert np.abs(dyn.step_etd1(x0, 0.01) - dyn.step_imex_be(x0, 0.01)).max() < 1e-3


@pytest.mark.parametrize("integrator", dyn.INTEGRATORS)
def test_split_system_agrees_with_direct(integrator):
    x0 = mode2(32, 0.1)
    cfg = dyn.SimConfig(n=32, dt=0.01, t_final=0.3, integrator=integrator)
    a = dyn.simulate(x0, cfg, record=False).final
    b = dyn.simulate_split(x0, cfg, record=False).final
    # the two schemes differ at O(dt^p) but must approximate the same solution
    assert np.abs(a - b).max() < 2e-4


def test_mode_two_perturbation_decays_at_quarter_rate():
    cfg = dyn.SimConfig(n=32, dt=0.02, t_final=4.0, diag_every=5, integrator="etdrk2")
    traj = dyn.simulate(mode2(32), cfg)
    rate, rms = decay_rate_fit(traj.series("t"), traj.series("pi_norm_inf"), (1.0, 4.0))
    assert rate == pytest.approx(0.25, abs=0.01)
    assert rms < 1e-2


def test_diagnostics_recorded():
    cfg = dyn.SimConfig(n=32, dt=0.01, t_final=0.1, diag_every=3)
    traj = dyn.simulate(mode2(32), cfg)
    t = traj.series("t")
    np.testing.assert_allclose(t, [0.0, 0.03, 0.06, 0.09, 0.1])
    for key in ("kappa", "pi_norm_inf", "y_c32", "A", "q"):
        assert np.all(np.isfinite(traj.series(key)))
    assert traj.series("q")[0] == 0.0
    assert np.all(np.diff(traj.series("q")) >= 0)


def test_degenerate_curve_stops_run_without_raising():
    s = grid(32)
    cfg = dyn.SimConfig(n=32, dt=0.01, t_final=0.1)
    traj = dyn.simulate(np.stack([np.cos(s), np.sin(2 * s)]), cfg)
    assert traj.status == "degenerate"
    assert "chord" in traj.message
    assert len(traj) == 1


def test_wrong_grid_size_rejected():
    with pytest.raises(ConfigError):
        dyn.simulate(mode2(16), dyn.SimConfig(n=32))


def test_checkpoint_resume_is_bit_identical(tmp_path):
    cfg = dyn.SimConfig(n=32, dt=0.01, t_final=0.2, integrator="etdrk2", save_every=1000)
    path = tmp_path / "ck.json"
    full = dyn.simulate(wobbly(32), cfg, checkpoint_path=path, checkpoint_every=7, record=False)
    loaded_cfg, step, state = dyn.load_checkpoint(path)
    assert step == 14
    assert loaded_cfg == cfg
    resumed = dyn.resume(path, record=False)
    np.testing.assert_array_equal(resumed.final, full.final)


def test_checkpoint_rejects_foreign_files(tmp_path):
    p = tmp_path / "x.json"
    p.write_text('{"format": "something-else"}')
    with pytest.raises(ConfigError):
        dyn.load_checkpoint(p)
    p.write_text("not json")
    with pytest.raises(ConfigError):
        dyn.load_checkpoint(p)


def test_toy_model_rejects_bad_input():
    cfg = dyn.SimConfig(n=32, dt=0.1, t_final=0.1)
    with pytest.raises(ConfigError):
        dyn.simulate_toy(np.zeros(32), 1.0, cfg)
    with pytest.raises(ConfigError):
        dyn.simulate_toy(np.zeros((2, 32)), 0.5, cfg)


def test_toy_nonlinearity_single_mode():
    s = grid(32)
    f = np.cos(4 * s)
    np.testing.assert_allclose(dyn.toy_nonlinearity(f, 0.5), 4 * np.cos(4 * s) ** 2, atol=1e-12)


def test_convergence_order_of_exact_power_law():
    dts = np.array([0.1, 0.05, 0.025])
    assert dyn.convergence_order(3 * dts**2, dts) == pytest.approx(2.0)
