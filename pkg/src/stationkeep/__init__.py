"""Station-keeping simulation suite for a wave-disturbed planar ROV.

Irregular second-order seas, 3-DoF vehicle dynamics, wave loading, cascaded
PD control with feed-forward disturbance compensation, pseudo-inverse thrust
allocation and an EKF, wired into a deterministic closed-loop harness.
"""

from . import control, disturbance, estimator, harness, metrics, vehicle, waves
from .errors import (ConfigurationError, DivergenceError, DomainError,
                     EstimatorError, SolverError, StationKeepError, UsageError)

__all__ = [
    "control", "disturbance", "estimator", "harness", "metrics", "vehicle", "waves",
    "ConfigurationError", "DivergenceError", "DomainError", "EstimatorError",
    "SolverError", "StationKeepError", "UsageError",
]

__version__ = "0.1.0"
