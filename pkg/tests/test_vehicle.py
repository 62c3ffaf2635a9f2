"""Rigid-body model tests: inertia, Coriolis, damping, restoring, RK4."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stationkeep import vehicle
from stationkeep.errors import ConfigurationError, DivergenceError

P = vehicle.VehicleParams()
finite = st.floats(-3.0, 3.0, allow_nan=False)


# ------------------------------------------------------------------- inertia

def test_mass_matrix_entries():
    M = vehicle.mass_matrix(P)
    m = 112.8 / 9.81
    assert M[0, 0] == pytest.approx(m + 6.36)
    assert M[1, 1] == pytest.approx(m + 18.68)
    assert M[2, 2] == pytest.approx(0.253 + 0.135)
    assert M[0, 2] == 0.67
    assert M[2, 0] == 0.67
    assert np.linalg.det(M) != 0.0


def test_mass_matrix_reduces_to_rigid_body():
    p = vehicle.VehicleParams(Xud=1e-12, Zwd=1e-12, Mqd=1e-12, Xqd=0.0, Mud=0.0)
    M = vehicle.mass_matrix(p)
    assert np.allclose(M, np.diag([p.m, p.m, p.Iy]), atol=1e-9)


def test_inverse_mass_is_inverse():
    assert np.allclose(vehicle.inverse_mass(P) @ vehicle.mass_matrix(P),
                       np.eye(3), atol=1e-12)


def test_params_validation():
    with pytest.raises(ConfigurationError):
        vehicle.VehicleParams(W=-1.0)
    with pytest.raises(ConfigurationError):
        vehicle.VehicleParams(Iy=0.0)


# ------------------------------------------------- Coriolis/damping/restoring

@given(u=finite, w=finite, q=finite)
@settings(max_examples=100, deadline=None)
def test_coriolis_skew_symmetric(u, w, q):
    C = vehicle.coriolis(P, vehicle.BodyVelocity(u, w, q))
    assert np.max(np.abs(C + C.T)) < 1e-12
    nu = np.array([u, w, q])
    assert abs(nu @ C @ nu) < 1e-10


def test_coriolis_zero_velocity():
    assert np.all(vehicle.coriolis(P, vehicle.BodyVelocity()) == 0.0)


def test_coriolis_surge_entry_magnitude():
    # at nu = (1, 0, 0) the heave-pitch entry carries the (m + Xud) u term
    C = vehicle.coriolis(P, vehicle.BodyVelocity(1.0, 0.0, 0.0))
    assert abs(C[1, 2]) == pytest.approx(17.858470948012233, rel=1e-12)


@given(u=finite, w=finite, q=finite)
@settings(max_examples=100, deadline=None)
def test_damping_diagonal_positive(u, w, q):
    D = vehicle.damping(P, vehicle.BodyVelocity(u, w, q))
    assert np.all(D == np.diag(np.diag(D)))
    assert np.all(np.diag(D) > 0.0)


def test_restoring_upright_and_linearized():
    g0 = vehicle.restoring(P, vehicle.Pose(theta=0.0))
    assert g0[2] == 0.0
    th = 1e-4
    g = vehicle.restoring(P, vehicle.Pose(theta=th))
    assert g[2] == pytest.approx(0.028 * 114.8 * th, rel=1e-6)
    # restoring moment opposes the tilt: positive coefficient, righting
    assert g[2] > 0.0


@given(theta=st.floats(-10.0, 10.0, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_transform_orthogonal_unit_det(theta):
    J = vehicle.transform_J(vehicle.Pose(theta=theta))
    assert np.allclose(J @ J.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(J) == pytest.approx(1.0, abs=1e-12)


@given(theta=st.floats(-50.0, 50.0, allow_nan=False))
@settings(max_examples=100, deadline=None)
def test_wrap_angle_range(theta):
    th = vehicle.wrap_angle(theta)
    assert -math.pi < th <= math.pi
    assert math.cos(th) == pytest.approx(math.cos(theta), abs=1e-9)
    assert math.sin(th) == pytest.approx(math.sin(theta), abs=1e-9)


# ---------------------------------------------------------------- integration

def test_unforced_energy_dissipates():
    # neutrally buoyant so the hydrostatics cannot inject energy
    p = vehicle.VehicleParams(B=112.8)
    M = vehicle.mass_matrix(p)
    state = vehicle.VehicleState(nu=vehicle.BodyVelocity(0.8, -0.5, 0.6))
    zero = np.zeros(3)
    prev = None
    for k in range(2000):
        nu = state.nu.as_array()
        energy = 0.5 * nu @ M @ nu
        if prev is not None:
            assert energy <= prev + 1e-12
        prev = energy
        state = vehicle.step(state, zero, zero, p, 0.05)
    assert prev < 1e-6


def test_rk4_scalar_self_test():
    # dy/dt = -y from 1 integrates to exp(-1) at t = 1
    y = 1.0
    dt = 0.05
    for _ in range(20):
        k1 = -y
        k2 = -(y + 0.5 * dt * k1)
        k3 = -(y + 0.5 * dt * k2)
        k4 = -(y + dt * k3)
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    # true error of classical RK4 here is 1.998e-8
    assert y == pytest.approx(math.exp(-1.0), abs=5e-8)


def test_step_halving_calm_run():
    tau = np.array([2.0, -3.0, 0.2])
    zero = np.zeros(3)

    def rollout(dt, n):
        x = vehicle.VehicleState(nu=vehicle.BodyVelocity(0.1, 0.0, 0.02)).as_array()
        Minv = vehicle.inverse_mass(P)
        for _ in range(n):
            x = vehicle.rk4_step_array(x, tau, zero, P, dt, Minv)
        return x

    coarse = rollout(0.05, 12000)
    fine = rollout(0.025, 24000)
    assert np.max(np.abs(coarse - fine)) < 1e-6


def test_rhs_array_matches_componentwise_model():
    rng = np.random.default_rng(11)
    for _ in range(50):
        x = rng.normal(size=6)
        tau = rng.normal(scale=20.0, size=3)
        tau_E = rng.normal(scale=20.0, size=3)
        got = vehicle.rhs_array(x, tau, tau_E, P)
        state = vehicle.VehicleState.from_array(x)
        J = vehicle.transform_J(state.eta)
        nu = state.nu.as_array()
        C = vehicle.coriolis(P, state.nu)
        D = vehicle.damping(P, state.nu)
        g = vehicle.restoring(P, state.eta)
        nudot = vehicle.inverse_mass(P) @ (tau + tau_E - C @ nu - D @ nu - g)
        assert np.allclose(got[:3], J @ nu, atol=1e-12)
        assert np.allclose(got[3:], nudot, atol=1e-10)


def test_rhs_array_batched_matches_loop():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(6, 9))
    tau = rng.normal(scale=10.0, size=3)
    zero = np.zeros(3)
    batched = vehicle.rhs_array(X, tau, zero, P)
    for j in range(9):
        assert np.allclose(batched[:, j],
                           vehicle.rhs_array(X[:, j], tau, zero, P), atol=1e-12)


def test_step_raises_on_divergence():
    huge = np.array([1e200, 0.0, 0.0])
    state = vehicle.VehicleState()
    with np.errstate(all="ignore"), pytest.raises(DivergenceError):
        for _ in range(50):
            state = vehicle.step(state, huge, np.zeros(3), P, 0.05)
