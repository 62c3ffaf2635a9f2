"""3-DoF (surge, heave, pitch) nonlinear vehicle dynamics.

Earth frame: x forward, z positive down (depth), theta pitch about y.
Body frame: u surge, w heave, q pitch rate. The BlueROV2-Heavy planar
parameterization is the default.

The right-hand side is written in batched form (state columns) so the
estimator can evaluate finite-difference Jacobians in one call.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DivergenceError

GRAVITY = 9.81


@dataclass(frozen=True)
class VehicleParams:
    """Inertial and hydrodynamic coefficients (BlueROV2 Heavy defaults)."""

    W: float = 112.8      # weight, N
    B: float = 114.8      # buoyancy, N
    Iy: float = 0.253     # rotational inertia, kg m^2
    Xud: float = 6.36     # added mass, surge, kg
    Zwd: float = 18.68    # added mass, heave, kg
    Mqd: float = 0.135    # added inertia, pitch, kg m^2
    Xqd: float = 0.67     # surge-pitch added-mass coupling, kg m
    Mud: float = 0.67     # pitch-surge added-mass coupling, kg m
    Xu: float = 13.7      # linear drag, kg/s
    Zw: float = 33.0
    Mq: float = 0.80      # kg m^2/s
    Xuu: float = 141.0    # quadratic drag, N s^2/m^2
    Zww: float = 190.0
    Mqq: float = 0.47     # N m s^2
    r_Bz: float = 0.028   # center-of-buoyancy vertical offset, m
    L: float = 0.457      # body axial length, m

    def __post_init__(self):
        for name in ("W", "B", "Iy", "Xud", "Zwd", "Mqd", "Xu", "Zw", "Mq",
                     "Xuu", "Zww", "Mqq", "L"):
            if getattr(self, name) <= 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        M = mass_matrix(self)
        sym = 0.5 * (M + M.T)
        if np.min(np.linalg.eigvalsh(sym)) <= 0:
            raise ConfigurationError("total mass matrix is not positive definite")

    @property
    def m(self) -> float:
        """Dry mass derived from weight."""
        return self.W / GRAVITY


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    z: float = 0.0
    theta: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.z, self.theta])


@dataclass(frozen=True)
class BodyVelocity:
    u: float = 0.0
    w: float = 0.0
    q: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.w, self.q])


@dataclass(frozen=True)
class VehicleState:
    eta: Pose = field(default_factory=Pose)
    nu: BodyVelocity = field(default_factory=BodyVelocity)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.eta.as_array(), self.nu.as_array()])

    @staticmethod
    def from_array(x: np.ndarray) -> "VehicleState":
        return VehicleState(eta=Pose(float(x[0]), float(x[1]), float(x[2])),
                            nu=BodyVelocity(float(x[3]), float(x[4]), float(x[5])))


def wrap_angle(theta: float) -> float:
    """Wrap to (-pi, pi]."""
    th = (theta + math.pi) % (2.0 * math.pi) - math.pi
    return math.pi if th == -math.pi else th


def transform_J(eta: Pose) -> np.ndarray:
    """Body-to-earth rate transform for the planar case (rotation about y)."""
    c, s = math.cos(eta.theta), math.sin(eta.theta)
    return np.array([[c, s, 0.0], [-s, c, 0.0], [0.0, 0.0, 1.0]])


def mass_matrix(params: VehicleParams) -> np.ndarray:
    """Total inertia M = M_RB + M_A, including the surge-pitch coupling."""
    m = params.m
    return np.array([
        [m + params.Xud, 0.0, params.Xqd],
        [0.0, m + params.Zwd, 0.0],
        [params.Mud, 0.0, params.Iy + params.Mqd],
    ])


@lru_cache(maxsize=8)
def inverse_mass(params: VehicleParams) -> np.ndarray:
    return np.linalg.inv(mass_matrix(params))


def coriolis(params: VehicleParams, nu: BodyVelocity) -> np.ndarray:
    """Skew-symmetric Coriolis/centripetal matrix built from the total M."""
    M = mass_matrix(params)
    p1 = M[0, 0] * nu.u + M[0, 2] * nu.q
    p2 = M[1, 1] * nu.w
    return np.array([[0.0, 0.0, -p2], [0.0, 0.0, p1], [p2, -p1, 0.0]])


def damping(params: VehicleParams, nu: BodyVelocity) -> np.ndarray:
    """Diagonal linear-plus-quadratic damping."""
    return np.diag([
        params.Xu + params.Xuu * abs(nu.u),
        params.Zw + params.Zww * abs(nu.w),
        params.Mq + params.Mqq * abs(nu.q),
    ])


def restoring(params: VehicleParams, eta: Pose) -> np.ndarray:
    """Hydrostatic restoring vector for CoG at the origin, CoB offset r_Bz."""
    s, c = math.sin(eta.theta), math.cos(eta.theta)
    net = params.W - params.B
    return np.array([net * s, -net * c, params.r_Bz * params.B * s])


def rhs_array(x: np.ndarray, tau: np.ndarray, tau_E: np.ndarray,
              params: VehicleParams, Minv: np.ndarray | None = None) -> np.ndarray:
    """State derivative for x = [x, z, theta, u, w, q].

    x may be shape (6,) or (6, B); tau/tau_E broadcast accordingly.
    """
    if Minv is None:
        Minv = inverse_mass(params)
    th = x[2]
    u, w, q = x[3], x[4], x[5]
    c, s = np.cos(th), np.sin(th)

    m11 = params.m + params.Xud
    m22 = params.m + params.Zwd
    p1 = m11 * u + params.Xqd * q
    p2 = m22 * w
    net = params.W - params.B

    tau = np.asarray(tau, dtype=float)
    tau_E = np.asarray(tau_E, dtype=float)
    if x.ndim > 1:
        tau = tau.reshape(3, -1)
        tau_E = tau_E.reshape(3, -1)
    f = np.empty((3,) + x.shape[1:])
    f[0] = tau[0] + tau_E[0] + p2 * q - (params.Xu + params.Xuu * np.abs(u)) * u - net * s
    f[1] = tau[1] + tau_E[1] - p1 * q - (params.Zw + params.Zww * np.abs(w)) * w + net * c
    f[2] = tau[2] + tau_E[2] - (p2 * u - p1 * w) \
        - (params.Mq + params.Mqq * np.abs(q)) * q - params.r_Bz * params.B * s

    out = np.empty(x.shape)
    out[0] = c * u + s * w
    out[1] = -s * u + c * w
    out[2] = q
    out[3:] = Minv @ f
    return out


def dynamics_rhs(state: VehicleState, tau: np.ndarray, tau_E: np.ndarray,
                 params: VehicleParams) -> tuple[np.ndarray, np.ndarray]:
    """(eta_dot, nu_dot) for a single state."""
    M = mass_matrix(params)
    if abs(np.linalg.det(M)) < 1e-12:
        raise ConfigurationError("singular mass matrix")
    xdot = rhs_array(state.as_array(), np.asarray(tau, float), np.asarray(tau_E, float), params)
    return xdot[:3], xdot[3:]


def rk4_step_array(x: np.ndarray, tau: np.ndarray, tau_E: np.ndarray,
                   params: VehicleParams, dt: float,
                   Minv: np.ndarray | None = None) -> np.ndarray:
    """One RK4 step with tau and tau_E held constant over the step."""
    if Minv is None:
        Minv = inverse_mass(params)
    k1 = rhs_array(x, tau, tau_E, params, Minv)
    k2 = rhs_array(x + 0.5 * dt * k1, tau, tau_E, params, Minv)
    k3 = rhs_array(x + 0.5 * dt * k2, tau, tau_E, params, Minv)
    k4 = rhs_array(x + dt * k3, tau, tau_E, params, Minv)
    out = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    out[2] = np.where(out[2] > np.pi, out[2] - 2.0 * np.pi,
                      np.where(out[2] <= -np.pi, out[2] + 2.0 * np.pi, out[2]))
    return out


def step(state: VehicleState, tau: np.ndarray, tau_E: np.ndarray,
         params: VehicleParams, dt: float, step_index: int | None = None) -> VehicleState:
    """Advance one RK4 step and re-wrap pitch."""
    if dt <= 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    x = rk4_step_array(state.as_array(), np.asarray(tau, float), np.asarray(tau_E, float),
                       params, dt)
    if not np.all(np.isfinite(x)):
        where = f" at step {step_index}" if step_index is not None else ""
        raise DivergenceError(f"non-finite state after integration step{where}")
    x[2] = wrap_angle(float(x[2]))
    return VehicleState.from_array(x)
