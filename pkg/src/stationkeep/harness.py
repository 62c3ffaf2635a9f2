"""Closed-loop scenario orchestration and result persistence.

A run wires together the sea state, wave loads, sensing, EKF, controller,
thrust allocation and vehicle integration, logging every step to a
RunRecord. Scenario presets W1-W3 carry the analysed sea states; `compare`
evaluates matched controller pairs over identical wave realizations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import control, disturbance, estimator, metrics, vehicle, waves
from .errors import ConfigurationError, UsageError

PRESET_CASES = {
    "W1": (7.1, 2.78),
    "W2": (9.5, 3.47),
    "W3": (11.1, 3.24),
}

CSV_HEADER = ("t,x,z,theta,u,w,q,xh,zh,thetah,taux,tauz,taum,ffx,ffz,ffm,"
              "mu1,mu2,mu3,mu4,mu5,mu6,mu7,mu8,XE,ZE,ME,zeta,Px,Pz,Pm")

CPD = "CPD"
CPD_FF = "CPD_FF"


@dataclass(frozen=True)
class Seeds:
    wave: int = 7
    sensor: int = 2
    preview: int = 3


@dataclass(frozen=True)
class ScenarioConfig:
    spectrum: waves.SpectrumParams
    setpoint: vehicle.Pose = field(default_factory=lambda: vehicle.Pose(0.0, 5.0, 0.0))
    duration: float = 600.0
    dt: float = 0.05
    controller_variant: str = CPD
    preview_snr: float | None = None   # None = exact preview
    seeds: Seeds = field(default_factory=Seeds)
    vehicle_params: vehicle.VehicleParams = field(default_factory=vehicle.VehicleParams)
    gains: control.Gains = field(default_factory=control.Gains)
    thrusters: control.ThrusterConfig = field(default_factory=control.ThrusterConfig)
    ekf: estimator.NoiseConfig = field(default_factory=estimator.NoiseConfig)
    n_quad: int = 16
    skip: float = 0.0                   # seconds excluded from the summary metrics
    ff_pitch_moment: bool = False       # add a mirrored pitch-moment FF term

    def __post_init__(self):
        if self.duration <= 0 or self.dt <= 0:
            raise ConfigurationError("duration and dt must be positive")
        n = self.duration / self.dt
        if abs(n - round(n)) > 1e-9:
            raise ConfigurationError("duration must be an integral number of steps")
        if self.controller_variant not in (CPD, CPD_FF):
            raise ConfigurationError(f"unknown controller variant {self.controller_variant!r}")
        if not (0.0 < self.setpoint.z < self.spectrum.depth_d):
            raise ConfigurationError("setpoint depth must lie inside the water column")
        if self.preview_snr is not None and self.preview_snr <= 0:
            raise ConfigurationError("preview_snr must be positive when set")

    @property
    def depth_d(self) -> float:
        return self.spectrum.depth_d

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass(frozen=True)
class RunRecord:
    """Per-step time series plus the end-of-run summary."""

    config: ScenarioConfig
    t: np.ndarray            # (n,)
    pose: np.ndarray         # (n, 3) true [x, z, theta]
    vel: np.ndarray          # (n, 3) true [u, w, q]
    pose_hat: np.ndarray     # (n, 3) estimated pose
    tau_fb: np.ndarray       # (n, 3)
    tau_ff: np.ndarray       # (n, 3)
    mu: np.ndarray           # (n, 8)
    tau_E: np.ndarray        # (n, 3)
    zeta: np.ndarray         # (n,) surface elevation at the vehicle x
    pwr: np.ndarray          # (n, 3) power from the applied generalized force
    summary: metrics.RunSummary

    def errors(self) -> np.ndarray:
        """Setpoint-minus-pose errors with the pitch error wrapped."""
        sp = self.config.setpoint.as_array()
        e = sp - self.pose
        e[:, 2] = np.array([vehicle.wrap_angle(v) for v in e[:, 2]])
        return e

    def to_csv(self, path) -> None:
        cols = np.column_stack([self.t, self.pose, self.vel, self.pose_hat,
                                self.tau_fb, self.tau_ff, self.mu, self.tau_E,
                                self.zeta, self.pwr])
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in cols:
                fh.write(",".join(f"{v:.10g}" for v in row) + "\n")

    def summary_dict(self) -> dict:
        out = self.summary.to_dict()
        out["config"] = config_to_dict(self.config)
        return out

    def write_summary(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def preset(case_id: str, **overrides) -> ScenarioConfig:
    """Scenario for one of the analysed sea states W1-W3."""
    if case_id not in PRESET_CASES:
        raise UsageError(f"unknown case {case_id!r}; expected one of {sorted(PRESET_CASES)}")
    Tp, Hs = PRESET_CASES[case_id]
    spectrum = waves.SpectrumParams(Hs=Hs, Tp=Tp, depth_d=54.0)
    cfg = ScenarioConfig(spectrum=spectrum)
    return replace(cfg, **overrides) if overrides else cfg


def run(config: ScenarioConfig) -> RunRecord:
    """Execute one closed-loop station-keeping mission."""
    rng_wave = np.random.default_rng(config.seeds.wave)
    rng_sensor = np.random.default_rng(config.seeds.sensor)
    rng_preview = np.random.default_rng(config.seeds.preview)

    sea = waves.discretize_spectrum(config.spectrum, rng_wave)
    preview = sea
    if config.controller_variant == CPD_FF and config.preview_snr is not None:
        preview = waves.inject_spectral_noise(sea, config.preview_snr, rng_preview)

    params = config.vehicle_params
    thr = config.thrusters
    gains = config.gains
    noise = config.ekf
    dt = config.dt
    n = config.n_steps
    sp = config.setpoint.as_array()
    depth = config.depth_d
    tau_lim = np.asarray(thr.tau_limits())

    state = vehicle.VehicleState(eta=config.setpoint, nu=vehicle.BodyVelocity())
    mu_prev = np.zeros(8)
    y0 = estimator.sense(state, noise, rng_sensor)
    ekf = estimator.initialize(y0, noise)

    log = {k: np.empty((n, 3)) for k in ("pose", "vel", "pose_hat", "tau_fb",
                                         "tau_ff", "tau_E", "pwr")}
    log["mu"] = np.empty((n, 8))
    log["zeta"] = np.empty(n)
    tgrid = np.arange(n) * dt

    for k in range(n):
        t = tgrid[k]

        # true wave load at the vehicle
        tau_E = disturbance.wave_load(sea, state, params, t, config.n_quad).as_array()

        # sense and correct
        y = estimator.sense(state, noise, rng_sensor)
        ekf = estimator.correct(ekf, y, noise)
        eta_hat = ekf.x_hat[:3]
        nu_hat = ekf.x_hat[3:]

        # feedback from the estimated state
        e = sp - eta_hat
        e[2] = vehicle.wrap_angle(float(e[2]))
        J = vehicle.transform_J(vehicle.Pose(*eta_hat))
        e_dot = -(J @ nu_hat)
        tau_fb = control.cpd_control(e, e_dot, nu_hat, gains)

        # feed-forward from the preview field at the estimated position
        tau_ff = np.zeros(3)
        if config.controller_variant == CPD_FF:
            z_wave = float(np.clip(-eta_hat[1], -depth, 0.0))
            fl = waves.particle_kinematics(preview, float(eta_hat[0]), z_wave, t)
            nu_p, nu_p_dot = disturbance.body_frame_particle_state(fl, float(eta_hat[2]))
            tau_ff = control.ff_compensation(nu_p, nu_p_dot, params)
            if config.ff_pitch_moment:
                est_state = vehicle.VehicleState.from_array(ekf.x_hat)
                tau_ff[2] -= disturbance.wave_load(preview, est_state, params, t,
                                                   config.n_quad).M_E

        # allocate, apply and integrate; the combined command is limited to
        # the generalized-force capacity so a large feed-forward term cannot
        # drive the pseudo-inverse into one-sided thruster saturation
        tau_cmd = np.clip(tau_fb + tau_ff, -tau_lim, tau_lim)
        mu = control.allocate(tau_cmd, thr, mu_prev, dt)
        mu_prev = mu
        tau_applied = thr.B_mu @ (thr.K_tau_diag * mu)
        pwr = metrics.power(tau_applied)

        log["pose"][k] = state.eta.as_array()
        log["vel"][k] = state.nu.as_array()
        log["pose_hat"][k] = eta_hat
        log["tau_fb"][k] = tau_fb
        log["tau_ff"][k] = tau_ff
        log["mu"][k] = mu
        log["tau_E"][k] = tau_E
        log["zeta"][k] = waves.elevation(sea, state.eta.x, t)
        log["pwr"][k] = pwr

        state = vehicle.step(state, tau_applied, tau_E, params, dt, step_index=k)
        ekf = estimator.predict(ekf, mu, noise, thr, params, dt)

    keep = tgrid >= config.skip
    err = sp - log["pose"]
    err[:, 2] = np.array([vehicle.wrap_angle(v) for v in err[:, 2]])
    summary = metrics.summarize(err[keep], log["pwr"][keep], dt)

    return RunRecord(config=config, t=tgrid, summary=summary, **log)


def make_pair(case_id: str, snr: float | None = None, **overrides) -> tuple[ScenarioConfig, ScenarioConfig]:
    """Baseline/feed-forward configs sharing seeds and wave realization."""
    base = preset(case_id, **overrides)
    return (replace(base, controller_variant=CPD),
            replace(base, controller_variant=CPD_FF, preview_snr=snr))


def compare(pairs: list[tuple[ScenarioConfig, ScenarioConfig]]) -> list[dict]:
    """Run matched config pairs and report per-DoF percentage changes.

    Each pair must differ only in controller_variant and/or preview_snr;
    percentage change is (b - a)/a * 100, so negative RMSE change means the
    second member improves on the first.
    """
    rows = []
    for cfg_a, cfg_b in pairs:
        stripped_a = config_to_dict(replace(cfg_a, controller_variant=CPD, preview_snr=None))
        stripped_b = config_to_dict(replace(cfg_b, controller_variant=CPD, preview_snr=None))
        if stripped_a != stripped_b:
            raise UsageError("pair members differ beyond controller variant / preview SNR")
        rec_a, rec_b = run(cfg_a), run(cfg_b)
        row = {
            "variant_a": f"{cfg_a.controller_variant}"
                         + (f"@snr{cfg_a.preview_snr:g}" if cfg_a.preview_snr else ""),
            "variant_b": f"{cfg_b.controller_variant}"
                         + (f"@snr{cfg_b.preview_snr:g}" if cfg_b.preview_snr else ""),
            "Tp": cfg_a.spectrum.Tp,
            "Hs": cfg_a.spectrum.Hs,
        }
        for name, a, b in (("rmse", rec_a.summary.rmse, rec_b.summary.rmse),
                           ("max_err", rec_a.summary.max_abs_err, rec_b.summary.max_abs_err),
                           ("energy", rec_a.summary.energy, rec_b.summary.energy)):
            for i, dof in enumerate(("x", "z", "m")):
                row[f"{name}_{dof}_a"] = float(a[i])
                row[f"{name}_{dof}_b"] = float(b[i])
                row[f"{name}_{dof}_pct"] = float((b[i] - a[i]) / a[i] * 100.0) if a[i] else 0.0
        rows.append(row)
    return rows


def comparison_to_csv(rows: list[dict], path) -> None:
    if not rows:
        raise UsageError("no comparison rows to write")
    keys = list(rows[0])
    with open(path, "w") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[k]) for k in keys) + "\n")


def _fmt(v) -> str:
    return f"{v:.10g}" if isinstance(v, float) else str(v)


# --- configuration (de)serialization -------------------------------------

def config_to_dict(cfg: ScenarioConfig) -> dict:
    sp = cfg.spectrum
    return {
        "spectrum": {"Hs": sp.Hs, "Tp": sp.Tp, "gamma": sp.gamma, "alpha": sp.alpha,
                     "depth_d": sp.depth_d, "n_components": sp.n_components,
                     "omega_min": sp.omega_min, "omega_max": sp.omega_max,
                     "seed": sp.seed},
        "setpoint": list(cfg.setpoint.as_array()),
        "duration": cfg.duration,
        "dt": cfg.dt,
        "controller_variant": cfg.controller_variant,
        "preview_snr": cfg.preview_snr,
        "seeds": {"wave": cfg.seeds.wave, "sensor": cfg.seeds.sensor,
                  "preview": cfg.seeds.preview},
        "vehicle": {k: getattr(cfg.vehicle_params, k) for k in
                    ("W", "B", "Iy", "Xud", "Zwd", "Mqd", "Xqd", "Mud", "Xu", "Zw",
                     "Mq", "Xuu", "Zww", "Mqq", "r_Bz", "L")},
        "gains": {"Kp": list(cfg.gains.Kp), "Kd": list(cfg.gains.Kd),
                  "Kpv": list(cfg.gains.Kpv), "tau_max": list(cfg.gains.tau_max)},
        "thrusters": {"alpha": cfg.thrusters.alpha, "lz": cfg.thrusters.lz,
                      "t_m": cfg.thrusters.t_m, "T_max": cfg.thrusters.T_max,
                      "K_tau": list(cfg.thrusters.K_tau)},
        "ekf": {"Q": cfg.ekf.Q.tolist(), "R": cfg.ekf.R.tolist(), "H": cfg.ekf.H.tolist()},
        "n_quad": cfg.n_quad,
        "skip": cfg.skip,
        "ff_pitch_moment": cfg.ff_pitch_moment,
    }


def config_from_dict(data: dict) -> ScenarioConfig:
    try:
        spectrum = waves.SpectrumParams(**data["spectrum"])
        kwargs = {
            "spectrum": spectrum,
            "setpoint": vehicle.Pose(*data.get("setpoint", (0.0, 5.0, 0.0))),
        }
        for key in ("duration", "dt", "controller_variant", "preview_snr",
                    "n_quad", "skip", "ff_pitch_moment"):
            if key in data:
                kwargs[key] = data[key]
        if "seeds" in data:
            kwargs["seeds"] = Seeds(**data["seeds"])
        if "vehicle" in data:
            kwargs["vehicle_params"] = vehicle.VehicleParams(**data["vehicle"])
        if "thrusters" in data:
            th = dict(data["thrusters"])
            if "K_tau" in th:
                th["K_tau"] = tuple(th["K_tau"])
            kwargs["thrusters"] = control.ThrusterConfig(**th)
        if "gains" in data:
            g = {k: tuple(v) for k, v in data["gains"].items()}
            kwargs["gains"] = control.Gains(**g)
        if "ekf" in data:
            kwargs["ekf"] = estimator.NoiseConfig(
                Q=np.asarray(data["ekf"]["Q"], dtype=float),
                R=np.asarray(data["ekf"]["R"], dtype=float),
                H=np.asarray(data["ekf"]["H"], dtype=float))
        return ScenarioConfig(**kwargs)
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"bad scenario config: {exc}") from exc


def load_config(path) -> ScenarioConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


def save_config(cfg: ScenarioConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")
