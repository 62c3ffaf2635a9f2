"""Controller and allocation tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stationkeep import control, vehicle
from stationkeep.errors import ConfigurationError

THR = control.ThrusterConfig()
GAINS = control.Gains()


# ------------------------------------------------------------------ feedback

def test_cpd_zero_error_zero_force():
    tau = control.cpd_control(np.zeros(3), np.zeros(3), np.zeros(3), GAINS)
    assert np.all(tau == 0.0)


def test_cpd_saturates_at_tau_max():
    tau = control.cpd_control(np.full(3, 100.0), np.zeros(3), np.zeros(3), GAINS)
    assert tau == pytest.approx(np.asarray(GAINS.tau_max))
    tau = control.cpd_control(np.full(3, -100.0), np.zeros(3), np.zeros(3), GAINS)
    assert tau == pytest.approx(-np.asarray(GAINS.tau_max))


def test_cpd_small_signal_linear():
    e = np.array([0.1, -0.05, 0.02])
    e_dot = np.array([0.01, 0.0, -0.01])
    nu_hat = np.array([0.02, 0.03, 0.0])
    tau = control.cpd_control(e, e_dot, nu_hat, GAINS)
    ref = np.asarray(GAINS.Kp) * e + np.asarray(GAINS.Kd) * e_dot
    expect = np.asarray(GAINS.tau_max) * np.asarray(GAINS.Kpv) * (ref - nu_hat)
    assert tau == pytest.approx(expect, rel=1e-12)


def test_cpd_opposes_outward_velocity():
    # at the setpoint but drifting away: the command brakes the drift
    tau = control.cpd_control(np.zeros(3), np.zeros(3), np.array([0.5, 0.0, 0.0]),
                              GAINS)
    assert tau[0] < 0.0


def test_gain_validation():
    with pytest.raises(ConfigurationError):
        control.Gains(Kp=(-1.0, 1.0, 1.0))
    with pytest.raises(ConfigurationError):
        control.Gains(tau_max=(0.0, 140.0, 30.8))


# -------------------------------------------------------------- feed-forward

def test_ff_hand_value():
    p = vehicle.VehicleParams()
    nu_p = np.array([0.4, -0.2])
    nu_p_dot = np.array([0.3, 0.5])
    ff = control.ff_compensation(nu_p, nu_p_dot, p)
    assert ff[0] == pytest.approx(6.36 * 0.3 - (13.7 + 141.0 * 0.4) * 0.4)
    assert ff[1] == pytest.approx(18.68 * 0.5 - (33.0 + 190.0 * 0.2) * (-0.2))
    assert ff[2] == pytest.approx(0.67 * 0.3)


def test_ff_zero_fluid_zero_force():
    ff = control.ff_compensation(np.zeros(2), np.zeros(2), vehicle.VehicleParams())
    assert np.all(ff == 0.0)


# ---------------------------------------------------------------- allocation

def test_geometry_capacity():
    lim = THR.tau_limits()
    assert lim[0] == pytest.approx(4.0 * 35.0 * math.cos(math.pi / 4.0))
    assert lim[1] == pytest.approx(140.0)
    assert lim[2] == pytest.approx(30.8)


def test_pinv_roundtrip_unsaturated():
    rng = np.random.default_rng(0)
    lag_off = 1e9  # dt >> t_m so the lag passes the command through
    for _ in range(1000):
        # ranges chosen so no single thruster saturates: per vertical
        # thruster |tau_z|/4 + |tau_m|/(4*lz) stays below 35 N
        tau = rng.uniform(-1.0, 1.0, size=3) * np.array([60.0, 60.0, 15.0])
        mu = control.allocate(tau, THR, np.zeros(8), lag_off)
        back = THR.B_mu @ (THR.K_tau_diag * mu)
        assert np.max(np.abs(back - tau)) < 1e-9


def test_motor_lag_rise():
    # one first-order step of duration t_m reaches 63.2% of the command
    tau = np.array([0.0, 40.0, 0.0])
    mu = control.allocate(tau, THR, np.zeros(8), THR.t_m)
    ideal = THR.B_pinv @ tau
    frac = mu[4] / ideal[4]
    assert frac == pytest.approx(1.0 - math.exp(-1.0), abs=0.01)


@given(st.tuples(st.floats(-500.0, 500.0), st.floats(-500.0, 500.0),
                 st.floats(-100.0, 100.0)))
@settings(max_examples=200, deadline=None)
def test_thruster_limit_never_exceeded(tau):
    mu = np.zeros(8)
    for _ in range(5):
        mu = control.allocate(np.asarray(tau), THR, mu, 0.05)
        assert np.all(np.abs(mu) <= 35.0 + 1e-12)


def test_allocation_matrix_shape_and_rank():
    assert THR.B_mu.shape == (3, 8)
    assert np.linalg.matrix_rank(THR.B_mu) == 3


def test_thruster_config_validation():
    with pytest.raises(ConfigurationError):
        control.ThrusterConfig(T_max=0.0)
    with pytest.raises(ConfigurationError):
        control.ThrusterConfig(K_tau=(1.0,) * 7)
