"""Cascaded PD control with feed-forward wave compensation and thrust allocation.

The feedback law forms a velocity reference from the pose error, compares it
with the estimated body velocity, clamps the normalized command to [-1, 1]
per DoF, and scales by the available force tau_max. The feed-forward term
models the wave disturbance as added-mass reaction plus sign-opposed drag on
the local particle motion.

Allocation maps the generalized force to eight thrusters through the
Moore-Penrose pseudo-inverse, applies a first-order motor lag and clamps at
the per-thruster limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError
from .vehicle import VehicleParams


@dataclass(frozen=True)
class Gains:
    """Diagonal gain entries per DoF plus the force scaling tau_max."""

    Kp: tuple[float, float, float] = (1.2, 1.2, 1.5)
    Kd: tuple[float, float, float] = (0.4, 0.4, 0.5)
    Kpv: tuple[float, float, float] = (1.0, 1.0, 1.0)
    tau_max: tuple[float, float, float] = (98.99, 140.0, 30.8)

    def __post_init__(self):
        if any(g < 0 for v in (self.Kp, self.Kd, self.Kpv) for g in v):
            raise ConfigurationError("gain entries must be non-negative")
        if any(t <= 0 for t in self.tau_max):
            raise ConfigurationError("tau_max must be positive componentwise")


@dataclass(frozen=True)
class ThrusterConfig:
    """8-thruster planar geometry: 4 azimuthed horizontal, 4 vertical."""

    alpha: float = math.pi / 4.0   # horizontal-thruster azimuth offset, rad
    lz: float = 0.22               # vertical-thruster pitch moment arm, m
    t_m: float = 0.2               # motor time constant, s
    T_max: float = 35.0            # per-thruster force limit, N
    K_tau: tuple[float, ...] = (1.0,) * 8  # force-coefficient diagonal

    def __post_init__(self):
        if self.T_max <= 0 or self.t_m <= 0:
            raise ConfigurationError("T_max and t_m must be positive")
        if len(self.K_tau) != 8 or any(k <= 0 for k in self.K_tau):
            raise ConfigurationError("K_tau must be 8 positive diagonal entries")
        if np.linalg.matrix_rank(self.B_mu) != 3:
            raise ConfigurationError("allocation matrix is rank deficient")

    @cached_property
    def B_mu(self) -> np.ndarray:
        """3x8 allocation matrix: columns 0-3 horizontal, 4-7 vertical."""
        ca = math.cos(self.alpha)
        B = np.zeros((3, 8))
        B[0, :4] = ca                       # surge from horizontal thrusters
        B[1, 4:] = 1.0                      # heave from vertical thrusters
        B[2, 4:] = (self.lz, self.lz, -self.lz, -self.lz)  # pitch moment
        return B

    @cached_property
    def B_pinv(self) -> np.ndarray:
        return np.linalg.pinv(self.B_mu)

    @cached_property
    def K_tau_diag(self) -> np.ndarray:
        return np.asarray(self.K_tau)

    def tau_limits(self) -> tuple[float, float, float]:
        """Generalized-force capacity implied by the geometry."""
        return (4.0 * self.T_max * math.cos(self.alpha),
                4.0 * self.T_max,
                4.0 * self.T_max * self.lz)

    def default_gains(self, Kp=(1.2, 1.2, 1.5), Kd=(0.4, 0.4, 0.5),
                      Kpv=(1.0, 1.0, 1.0)) -> Gains:
        return Gains(Kp=Kp, Kd=Kd, Kpv=Kpv, tau_max=self.tau_limits())


@dataclass(frozen=True)
class ControlCommand:
    tau: np.ndarray  # generalized force, (3,)
    mu: np.ndarray   # thruster forces, (8,)


def cpd_control(e: np.ndarray, e_dot: np.ndarray, nu_hat: np.ndarray,
                gains: Gains) -> np.ndarray:
    """Cascaded PD feedback force.

    e is the pose error (setpoint minus estimate) and e_dot its rate; the
    outer loop turns them into a velocity reference Kp*e + Kd*e_dot, the
    inner loop weights the velocity mismatch by Kpv, and the normalized
    command is clamped to [-1, 1] before scaling by tau_max.
    """
    e = np.asarray(e, dtype=float)
    e_dot = np.asarray(e_dot, dtype=float)
    nu_hat = np.asarray(nu_hat, dtype=float)
    nu_ref = np.asarray(gains.Kp) * e + np.asarray(gains.Kd) * e_dot
    bracket = np.asarray(gains.Kpv) * (nu_ref - nu_hat)
    return np.asarray(gains.tau_max) * np.clip(bracket, -1.0, 1.0)


def ff_compensation(nu_p: np.ndarray, nu_p_dot: np.ndarray,
                    params: VehicleParams) -> np.ndarray:
    """Feed-forward force from the body-frame particle motion.

    Added-mass rows applied to the particle acceleration, plus the drag law
    evaluated at nu_p acting on the negated particle velocity. The pitch
    component carries only the surge-pitch added-mass coupling.
    """
    npx, npz = float(nu_p[0]), float(nu_p[1])
    dnx, dnz = float(nu_p_dot[0]), float(nu_p_dot[1])
    return np.array([
        params.Xud * dnx - (params.Xu + params.Xuu * abs(npx)) * npx,
        params.Zwd * dnz - (params.Zw + params.Zww * abs(npz)) * npz,
        params.Mud * dnx,
    ])


def allocate(tau: np.ndarray, config: ThrusterConfig, mu_prev: np.ndarray,
             dt: float) -> np.ndarray:
    """Thruster forces for a requested generalized force.

    Pseudo-inverse allocation followed by a first-order motor lag from
    mu_prev and a clamp at +/- T_max per thruster.
    """
    mu_ideal = (config.B_pinv @ np.asarray(tau, dtype=float)) / config.K_tau_diag
    lag = 1.0 - math.exp(-dt / config.t_m)
    mu = np.asarray(mu_prev, dtype=float) + lag * (mu_ideal - np.asarray(mu_prev, dtype=float))
    return np.clip(mu, -config.T_max, config.T_max)
