import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from gdalab.dynamics import (IntegratorConfig, NonFiniteStateError, State, integrate, step_fixed_rk4, trajectory_csv,
                             vector_field)
from gdalab.payoff import LienardPayoff, QuadraticPayoff, parse_expression

XY = parse_expression("x1*y1", 1, 1)


def test_vector_field_examples():
    assert vector_field(QuadraticPayoff(1, 0, -1), State([2], [3])).tolist() == [-2, -3]
    assert vector_field(XY, State([1], [0])).tolist() == [0, 1]
    assert vector_field(LienardPayoff(1, 0), State([0], [1])).tolist() == [1, 0]


def test_state_validation():
    with pytest.raises(NonFiniteStateError):
        State([float("nan")], [0])
    s = State.from_z([1, 2, 3], 2)
    assert s.x.tolist() == [1, 2] and s.y.tolist() == [3] and s.z.tolist() == [1, 2, 3]


def test_config_validation():
    for bad in [dict(step=0), dict(rel_tol=-1), dict(abs_tol=0), dict(t_max=0), dict(blowup_radius=0),
                dict(method="euler"), dict(record_every=0)]:
        with pytest.raises(ValueError):
            IntegratorConfig(**bad)


def test_rk4_fixed_point():
    for p, z in [(QuadraticPayoff(2, 1, 1), [0.0, 0.0]), (LienardPayoff(1, 1.5), [1.0, -2 / 3])]:
        out = step_fixed_rk4(p, State.from_z(z, 1), 0.7)
        assert np.allclose(out.z, z, rtol=0, atol=1e-15)


def test_rk4_rotation_preserves_radius():
    s = step_fixed_rk4(XY, State([1], [0]), 0.01)
    assert abs(np.linalg.norm(s.z) - 1) < 1e-9


def test_rk4_decay():
    s = step_fixed_rk4(QuadraticPayoff(1, 0, -1), State([1], [1]), 0.1)
    assert np.allclose(s.z, math.exp(-0.1), atol=1e-5)


def test_rk4_rejects_bad_step():
    with pytest.raises(ValueError):
        step_fixed_rk4(XY, State([1], [0]), 0.0)


def test_rk4_fourth_order():
    p = QuadraticPayoff(1, 0, -1)
    errors = []
    for h in (0.2, 0.1, 0.05):
        traj = integrate(p, State([1], [1]), IntegratorConfig(method="fixed_rk4", step=h, t_max=2.0, record_every=1.0))
        errors.append(abs(traj.z[-1, 0] - math.exp(-2.0)))
    for coarse, fine in zip(errors, errors[1:]):
        assert 12 <= coarse / fine <= 20


def test_integrate_converges():
    traj = integrate(QuadraticPayoff(1, 0, -1), State([1], [1]), IntegratorConfig(t_max=20))
    assert traj.stop_reason == "horizon" and traj.t[-1] == 20
    assert np.linalg.norm(traj.z[-1]) < 1e-6


def test_integrate_rotation_radius():
    traj = integrate(XY, State([1], [0]), IntegratorConfig(t_max=20))
    r = np.linalg.norm(traj.z, axis=1)
    assert r.min() > 0.999 and r.max() < 1.001


def test_integrate_blowup():
    traj = integrate(QuadraticPayoff(2, 1, 1), State([1], [1]), IntegratorConfig(blowup_radius=1e6))
    assert traj.stop_reason == "blowup"
    assert np.linalg.norm(traj.z[-1]) > 1e6
    assert traj.t[-1] < 100


def test_integrate_non_finite_from_domain_error():
    p = parse_expression("log(x1) + y1", 1, 1)
    # x' = -1/x drives x to 0 at t = 0.5
    traj = integrate(p, State([1.0], [0.0]), IntegratorConfig(t_max=2))
    assert traj.stop_reason == "non_finite"
    assert traj.t[-1] < 0.5 + 1e-3


def test_recorded_velocity_equals_vector_field():
    p = LienardPayoff(1, 0.3)
    traj = integrate(p, State([0.5], [-0.2]), IntegratorConfig(t_max=10, record_every=0.1))
    for i in range(len(traj)):
        assert np.allclose(traj.velocity[i], vector_field(p, State.from_z(traj.z[i], 1)), rtol=0, atol=1e-12)
    assert np.allclose(traj.kinetic, 0.5 * np.sum(traj.velocity**2, axis=1))


def test_recording_grid_uniform():
    traj = integrate(LienardPayoff(1, 0), State([0.1], [0]), IntegratorConfig(t_max=5, record_every=0.25))
    assert len(traj) == 21
    assert np.allclose(np.diff(traj.t), 0.25, rtol=0, atol=1e-12)


def test_default_record_interval_bounded():
    cfg = IntegratorConfig(t_max=100)
    traj = integrate(XY, State([1], [0]), cfg)
    assert len(traj) <= 10**5 + 1


def test_tolerance_halving():
    p = QuadraticPayoff(2, 2, 1)
    finals = []
    for tol in (1e-8, 5e-9):
        traj = integrate(p, State([1], [1]), IntegratorConfig(t_max=30, rel_tol=tol, abs_tol=tol))
        finals.append(traj.z[-1])
    assert np.linalg.norm(finals[0] - finals[1]) <= 10 * 1e-8


def test_matches_scipy_reference():
    p = LienardPayoff(1, 0.4)
    traj = integrate(p, State([0.3], [0.2]), IntegratorConfig(t_max=15, record_every=0.5))
    ref = solve_ivp(lambda t, z: p.velocity(z), (0, 15), [0.3, 0.2], method="DOP853", rtol=1e-12, atol=1e-12,
                    t_eval=traj.t)
    assert np.max(np.abs(ref.y.T - traj.z)) < 1e-7


def test_csv_layout():
    traj = integrate(XY, State([1], [0]), IntegratorConfig(t_max=1, record_every=0.5))
    text = trajectory_csv(traj, np.zeros(len(traj)), np.ones(len(traj)))
    lines = text.splitlines()
    assert lines[0] == "t,x1,y1,S,T,L,Ldot"
    assert len(lines) == 4
    row = [float(v) for v in lines[-1].split(",")]
    assert row[0] == 1.0 and row[-2:] == [0.0, 1.0]
    # 17 significant digits round-trip the doubles exactly
    assert row[1] == traj.z[-1, 0] and row[2] == traj.z[-1, 1]
