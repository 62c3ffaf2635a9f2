"""Irregular sea-state generation and second-order wave kinematics.

A sea state is a bank of monochromatic components discretized from a JONSWAP
spectrum. Elevation and sub-surface particle kinematics are evaluated with
second-order corrections; particle accelerations are the exact analytic time
derivatives of the velocity expressions.

Vertical convention: z is positive up, z = 0 at the still-water surface and
z = -depth_d at the seabed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, DomainError, SolverError

G = 9.81  # gravitational acceleration, m/s^2


@dataclass(frozen=True)
class SpectrumParams:
    """JONSWAP parameters plus discretization band and seed."""

    Hs: float                  # significant wave height, m
    Tp: float                  # peak period, s
    gamma: float = 3.3         # peak-enhancement factor
    alpha: float = 0.0081      # Phillips constant
    depth_d: float = 54.0      # seabed depth, m
    n_components: int = 128
    omega_min: float | None = None  # defaults to 0.4 * omega_p
    omega_max: float | None = None  # defaults to 4.0 * omega_p
    seed: int = 0

    def __post_init__(self):
        if self.Hs <= 0 or self.Tp <= 0:
            raise ConfigurationError(f"Hs and Tp must be positive, got {self.Hs}, {self.Tp}")
        if self.gamma < 1:
            raise ConfigurationError(f"gamma must be >= 1, got {self.gamma}")
        if self.depth_d <= 0:
            raise ConfigurationError(f"depth_d must be positive, got {self.depth_d}")
        if self.n_components < 1:
            raise ConfigurationError(f"n_components must be >= 1, got {self.n_components}")
        lo, hi = self.band
        if not (0 < lo <= hi):
            raise ConfigurationError(f"bad frequency band [{lo}, {hi}]")
        if lo == hi and self.n_components > 1:
            raise ConfigurationError("degenerate band with more than one component")

    @property
    def omega_p(self) -> float:
        return 2.0 * np.pi / self.Tp

    @property
    def band(self) -> tuple[float, float]:
        lo = self.omega_min if self.omega_min is not None else 0.4 * self.omega_p
        hi = self.omega_max if self.omega_max is not None else 4.0 * self.omega_p
        return lo, hi


@dataclass(frozen=True)
class WaveComponent:
    A: float      # amplitude, m
    omega: float  # angular frequency, rad/s
    kappa: float  # wavenumber, 1/m
    eps: float    # phase offset, rad, in [0, 2*pi)
    c: float      # celerity omega/kappa, m/s


@dataclass(frozen=True)
class FluidState:
    """Surface elevation plus particle velocity/acceleration at a point.

    Fields are floats for scalar queries or ndarrays for vectorized queries.
    """

    zeta: float | np.ndarray
    u_p: float | np.ndarray
    w_p: float | np.ndarray
    du_p: float | np.ndarray
    dw_p: float | np.ndarray


@dataclass(frozen=True)
class WaveField:
    """Immutable bank of wave components over a given water depth."""

    components: tuple[WaveComponent, ...]
    depth_d: float

    @cached_property
    def _arrays(self) -> dict[str, np.ndarray]:
        A = np.array([c.A for c in self.components])
        om = np.array([c.omega for c in self.components])
        ka = np.array([c.kappa for c in self.components])
        ep = np.array([c.eps for c in self.components])
        ce = np.array([c.c for c in self.components])
        return {"A": A, "omega": om, "kappa": ka, "eps": ep, "c": ce}

    @property
    def n(self) -> int:
        return len(self.components)


def solve_dispersion(omega: float, depth_d: float, max_iter: int = 100) -> float:
    """Solve omega^2 = g*kappa*tanh(kappa*d) for kappa.

    Safeguarded Newton started from the deep-water guess kappa = omega^2/g,
    with bisection fallback when an iterate leaves the current bracket.
    """
    if omega <= 0 or depth_d <= 0:
        raise ConfigurationError(f"omega and depth must be positive, got {omega}, {depth_d}")

    target = omega * omega

    def resid(k):
        return target - G * k * np.tanh(k * depth_d)

    # residual is strictly decreasing in kappa: bracket the root
    lo, hi = 0.0, max(omega * omega / G, 1.0 / depth_d)
    it = 0
    while resid(hi) > 0:
        hi *= 2.0
        it += 1
        if it > 60:
            raise SolverError(f"dispersion bracket failed for omega={omega}")

    k = omega * omega / G  # deep-water initial guess
    if not (lo < k < hi):
        k = 0.5 * (lo + hi)
    for _ in range(max_iter):
        f = resid(k)
        if abs(f) < 1e-12:
            return k
        th = np.tanh(k * depth_d)
        dfdk = -G * (th + k * depth_d * (1.0 - th * th))
        if f > 0:
            lo = k
        else:
            hi = k
        k_new = k - f / dfdk
        if not (lo < k_new < hi):
            k_new = 0.5 * (lo + hi)
        k = k_new
    if abs(resid(k)) < 1e-8:
        return k
    raise SolverError(f"dispersion solve did not converge for omega={omega}, d={depth_d}")


def jonswap_density(omega: float | np.ndarray, params: SpectrumParams) -> float | np.ndarray:
    """Spectral density S(omega) in m^2*s for the JONSWAP form."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega <= 0):
        raise ConfigurationError("omega must be positive")
    wp = params.omega_p
    sigma = np.where(omega <= wp, 0.07, 0.09)
    r = np.exp(-((omega - wp) ** 2) / (2.0 * wp * wp * sigma * sigma))
    S = (params.alpha * G * G / omega**5) * np.exp(-1.25 * (wp / omega) ** 4) * params.gamma**r
    return float(S) if S.ndim == 0 else S


def discretize_spectrum(params: SpectrumParams, rng: np.random.Generator | None = None) -> WaveField:
    """Sample the spectrum into equally spaced components with random phases.

    Amplitudes follow A^2 = 2*S(omega)*d_omega and are then rescaled so the
    recovered significant height 4*sqrt(m0) matches params.Hs exactly.
    """
    if rng is None:
        rng = np.random.default_rng(params.seed)
    n = params.n_components
    lo, hi = params.band
    omegas = np.linspace(lo, hi, n)
    d_omega = (hi - lo) / (n - 1) if n > 1 else 1.0
    amps = np.sqrt(2.0 * jonswap_density(omegas, params) * d_omega)
    m0 = np.sum(amps**2) / 2.0
    if m0 <= 0:
        raise ConfigurationError("spectrum carries no energy over the requested band")
    amps = amps * (params.Hs / (4.0 * np.sqrt(m0)))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=n)
    comps = []
    for A, om, ep in zip(amps, omegas, phases):
        ka = solve_dispersion(om, params.depth_d)
        comps.append(WaveComponent(A=float(A), omega=float(om), kappa=float(ka),
                                   eps=float(ep), c=float(om / ka)))
    return WaveField(components=tuple(comps), depth_d=params.depth_d)


def _phase(field: WaveField, x, t):
    a = field._arrays
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    # broadcast query points against the component axis (last axis)
    return a["kappa"] * x[..., None] - a["omega"] * t[..., None] + a["eps"]


def elevation(field: WaveField, x: float | np.ndarray, t: float | np.ndarray) -> float | np.ndarray:
    """Second-order surface elevation at position x and time t."""
    a = field._arrays
    ph = _phase(field, x, t)
    z = np.sum(a["A"] * np.cos(ph) + 0.5 * a["kappa"] * a["A"] ** 2 * np.cos(2.0 * ph), axis=-1)
    return float(z) if z.ndim == 0 else z


def particle_kinematics(field: WaveField, x, z, t) -> FluidState:
    """Particle velocity and acceleration at (x, z) and time t.

    z is positive up with the surface at 0; valid range [-depth_d, 0].
    Accepts scalars or broadcastable arrays for x and z.
    """
    a = field._arrays
    d = field.depth_d
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(z > 0.0) or np.any(z < -d):
        raise DomainError(f"z must lie in [-{d}, 0], got {z}")

    ka, om, ce, A = a["kappa"], a["omega"], a["c"], a["A"]
    H = 2.0 * A
    ph = _phase(field, x, t)
    kzd = ka * (z[..., None] + d)
    kd = ka * d

    c1 = (G * H / (2.0 * ce)) / np.cosh(kd)          # first-order amplitude factor
    c2 = (3.0 / 16.0) * ce * ka**2 * H**2 / np.sinh(kd) ** 4

    ch1, sh1 = np.cosh(kzd), np.sinh(kzd)
    cp, sp = np.cos(ph), np.sin(ph)
    # double-angle identities avoid a second round of transcendentals
    ch2 = 2.0 * ch1 * ch1 - 1.0
    sh2 = 2.0 * sh1 * ch1
    cp2 = 2.0 * cp * cp - 1.0
    sp2 = 2.0 * sp * cp

    u = np.sum(c1 * ch1 * cp + c2 * ch2 * cp2, axis=-1)
    w = np.sum(c1 * sh1 * sp + c2 * sh2 * sp2, axis=-1)
    # d(phase)/dt = -omega, so d cos -> +omega sin and d sin -> -omega cos
    du = np.sum(c1 * ch1 * om * sp + c2 * ch2 * 2.0 * om * sp2, axis=-1)
    dw = np.sum(-c1 * sh1 * om * cp - c2 * sh2 * 2.0 * om * cp2, axis=-1)

    ze = np.sum(A * np.cos(ph) + 0.5 * ka * A**2 * np.cos(2.0 * ph), axis=-1)

    if u.ndim == 0:
        return FluidState(zeta=float(ze), u_p=float(u), w_p=float(w),
                          du_p=float(du), dw_p=float(dw))
    return FluidState(zeta=ze, u_p=u, w_p=w, du_p=du, dw_p=dw)


def inject_spectral_noise(field: WaveField, snr: float, rng: np.random.Generator) -> WaveField:
    """Return a corrupted copy with Gaussian noise on amplitudes and phases.

    Per component: amplitude noise has variance A^2/snr (clamped at zero),
    phase noise has variance (2*pi)^2/(12*snr), the phase-signal variance of
    a uniform [0, 2*pi) offset divided by snr, and is wrapped to [0, 2*pi).
    Frequencies and wavenumbers are untouched, so dispersion still holds.
    """
    if snr <= 0:
        raise ConfigurationError(f"snr must be positive, got {snr}")
    phase_std = 2.0 * np.pi / np.sqrt(12.0 * snr)
    comps = []
    for c in field.components:
        A = max(0.0, c.A + rng.normal(0.0, c.A / np.sqrt(snr)))
        eps = (c.eps + rng.normal(0.0, phase_std)) % (2.0 * np.pi)
        comps.append(WaveComponent(A=A, omega=c.omega, kappa=c.kappa, eps=eps, c=c.c))
    return WaveField(components=tuple(comps), depth_d=field.depth_d)


def significant_height(field: WaveField) -> float:
    """Recovered Hs = 4*sqrt(m0) of the discrete component bank."""
    a = field._arrays
    return 4.0 * np.sqrt(np.sum(a["A"] ** 2) / 2.0)


def save_field(field: WaveField, path) -> None:
    """Write the component table as plain text (replayable across runs)."""
    with open(path, "w") as fh:
        fh.write(f"# depth_d={field.depth_d!r} n={field.n}\n")
        fh.write("# A omega kappa eps c\n")
        for c in field.components:
            fh.write(f"{c.A!r} {c.omega!r} {c.kappa!r} {c.eps!r} {c.c!r}\n")


def load_field(path) -> WaveField:
    """Read a component table written by save_field."""
    with open(path) as fh:
        header = fh.readline()
        try:
            meta = dict(item.split("=") for item in header.lstrip("# ").split())
            depth = float(meta["depth_d"])
            n = int(meta["n"])
        except (ValueError, KeyError) as exc:
            raise ConfigurationError(f"bad wave-field header: {header!r}") from exc
        comps = []
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            A, om, ka, ep, ce = (float(v) for v in line.split())
            comps.append(WaveComponent(A=A, omega=om, kappa=ka, eps=ep, c=ce))
    if len(comps) != n:
        raise ConfigurationError(f"expected {n} components, found {len(comps)}")
    return WaveField(components=tuple(comps), depth_d=depth)
