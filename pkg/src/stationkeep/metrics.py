"""Mission evaluation: per-DoF power, RMSE, maximum error and energy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError

# thruster power fit (W per DoF vs generalized force magnitude)
POWER_COEFFS = (0.0011, 0.02078, 0.297)


@dataclass(frozen=True)
class RunSummary:
    rmse: np.ndarray          # (3,) m, m, rad
    max_abs_err: np.ndarray   # (3,)
    energy: np.ndarray        # (3,) J
    mean_power: np.ndarray    # (3,) W

    def to_dict(self) -> dict:
        return {
            "rmse": self.rmse.tolist(),
            "max_abs_err": self.max_abs_err.tolist(),
            "energy": self.energy.tolist(),
            "mean_power": self.mean_power.tolist(),
        }


def power(tau: np.ndarray) -> np.ndarray:
    """Consumed power per DoF; the polynomial acts on |tau| so P >= 0."""
    a3, a2, a1 = POWER_COEFFS
    t = np.abs(np.asarray(tau, dtype=float))
    return a3 * t**3 + a2 * t**2 + a1 * t


def summarize(err: np.ndarray, pwr: np.ndarray, dt: float) -> RunSummary:
    """Aggregate a (n, 3) error series and (n, 3) power series."""
    err = np.asarray(err, dtype=float)
    pwr = np.asarray(pwr, dtype=float)
    if err.size == 0:
        raise UsageError("cannot summarize an empty series")
    return RunSummary(
        rmse=np.sqrt(np.mean(err**2, axis=0)),
        max_abs_err=np.max(np.abs(err), axis=0),
        energy=np.sum(pwr, axis=0) * dt,
        mean_power=np.mean(pwr, axis=0),
    )
