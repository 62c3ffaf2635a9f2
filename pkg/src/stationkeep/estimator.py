"""Extended Kalman filter over the 6-state [x, z, theta, u, w, q].

The process model is one RK4 step of the vehicle dynamics forced by the
commanded thruster forces, with wave loads absorbed into the process noise.
The transition Jacobian is evaluated by central finite differences around
the current estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .control import ThrusterConfig
from .errors import EstimatorError
from .vehicle import VehicleParams, VehicleState, inverse_mass, rk4_step_array


def _default_Q() -> np.ndarray:
    # Velocity entries sized for wave-driven accelerations the process model
    # cannot see (a few m/s^2 over one step); the pitch-rate entry is kept an
    # order of magnitude lower so the rate estimate stays smooth enough for
    # pitch damping.
    return np.diag([1e-6, 1e-6, 1e-7, 2e-2, 2e-2, 1e-3])


def _default_R() -> np.ndarray:
    return np.diag([0.01**2, 0.01**2, math.radians(0.5) ** 2])


def _default_H() -> np.ndarray:
    return np.hstack([np.eye(3), np.zeros((3, 3))])


@dataclass(frozen=True)
class NoiseConfig:
    Q: np.ndarray = field(default_factory=_default_Q)     # process covariance, per step
    R: np.ndarray = field(default_factory=_default_R)     # measurement covariance
    H: np.ndarray = field(default_factory=_default_H)     # measurement matrix


@dataclass(frozen=True)
class EkfState:
    x_hat: np.ndarray           # (6,)
    P: np.ndarray               # (6, 6)


def initialize(y0: np.ndarray, noise: NoiseConfig, p0: float = 0.1) -> EkfState:
    """Seed the filter from the first pose measurement with zero velocity."""
    x0 = np.concatenate([np.asarray(y0, dtype=float), np.zeros(3)])
    return EkfState(x_hat=x0, P=np.eye(6) * p0)


def predict(ekf: EkfState, mu: np.ndarray, noise: NoiseConfig,
            thrusters: ThrusterConfig, params: VehicleParams, dt: float,
            fd_step: float = 1e-6) -> EkfState:
    """Propagate state and covariance one step ahead.

    The internal model applies tau = B_mu K_tau mu and no wave load; the
    Jacobian is a central finite difference of the one-step map, with the
    perturbed states propagated as one batched integrator call.
    """
    tau = thrusters.B_mu @ (thrusters.K_tau_diag * np.asarray(mu, dtype=float))
    Minv = inverse_mass(params)
    zero = np.zeros(3)

    h = fd_step * np.maximum(1.0, np.abs(ekf.x_hat))
    batch = np.concatenate([
        ekf.x_hat[:, None],
        ekf.x_hat[:, None] + np.diag(h),
        ekf.x_hat[:, None] - np.diag(h),
    ], axis=1)
    out = rk4_step_array(batch, tau, zero, params, dt, Minv)
    x_pred = out[:, 0]
    diff = out[:, 1:7] - out[:, 7:13]
    # pitch may wrap between perturbed propagations; keep the difference local
    diff[2] = (diff[2] + np.pi) % (2.0 * np.pi) - np.pi
    A = diff / (2.0 * h)

    if not np.all(np.isfinite(x_pred)):
        raise EstimatorError("non-finite state in EKF prediction")

    P = A @ ekf.P @ A.T + noise.Q
    P = 0.5 * (P + P.T)
    return EkfState(x_hat=x_pred, P=P)


def correct(ekf: EkfState, y: np.ndarray, noise: NoiseConfig) -> EkfState:
    """Measurement update with pose measurement y."""
    H = noise.H
    S = H @ ekf.P @ H.T + noise.R
    try:
        K = np.linalg.solve(S.T, (ekf.P @ H.T).T).T
    except np.linalg.LinAlgError as exc:
        raise EstimatorError(f"singular innovation covariance S={S!r}") from exc
    innov = np.asarray(y, dtype=float) - H @ ekf.x_hat
    # third measurement component is the pitch angle; wrap its innovation
    innov[2] = (innov[2] + math.pi) % (2.0 * math.pi) - math.pi
    x = ekf.x_hat + K @ innov
    x[2] = (x[2] + math.pi) % (2.0 * math.pi) - math.pi
    P = (np.eye(len(ekf.x_hat)) - K @ H) @ ekf.P
    P = 0.5 * (P + P.T)
    return EkfState(x_hat=x, P=P)


def _cov_sqrt(R: np.ndarray) -> np.ndarray:
    if not R.any():
        return np.zeros_like(R)
    try:
        return np.linalg.cholesky(R)
    except np.linalg.LinAlgError:
        vals, vecs = np.linalg.eigh(R)
        return vecs @ np.diag(np.sqrt(np.maximum(vals, 0.0)))


def sense(true_state: VehicleState, noise: NoiseConfig,
          rng: np.random.Generator) -> np.ndarray:
    """Noisy pose measurement y = H x + v, v ~ N(0, R)."""
    x = true_state.as_array()
    y = noise.H @ x
    L = _cov_sqrt(noise.R)
    return y + L @ rng.standard_normal(len(y))
