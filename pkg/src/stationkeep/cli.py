"""Command-line entry point.

Subcommands:
  run          execute one scenario and write CSV time series plus a summary
  compare      run matched CPD / CPD+FF pairs and write a comparison table
  preset-dump  write a preset scenario config as JSON
  wave-dump    export the wave-component table for a scenario

Exit codes: 0 success, 1 usage/configuration error, 2 numerical divergence.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import harness, waves
from .errors import ConfigurationError, DivergenceError, EstimatorError, UsageError


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="scenario config JSON")
    p.add_argument("--preset", choices=sorted(harness.PRESET_CASES), help="Table-of-cases scenario")
    p.add_argument("--seed-wave", type=int, help="wave realization seed")
    p.add_argument("--seed-sensor", type=int, help="sensor noise seed")
    p.add_argument("--snr", type=float, help="corrupt the controller's wave preview at this SNR")
    p.add_argument("--controller", choices=["cpd", "cpd-ff"], help="controller variant")
    p.add_argument("--duration", type=float, help="mission length in seconds")
    p.add_argument("--skip", type=float, help="seconds excluded from summary metrics")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")


def _build_config(args) -> harness.ScenarioConfig:
    if args.config is not None:
        cfg = harness.load_config(args.config)
    elif args.preset is not None:
        cfg = harness.preset(args.preset)
    else:
        raise UsageError("provide --config or --preset")
    changes = {}
    if args.seed_wave is not None or args.seed_sensor is not None:
        changes["seeds"] = replace(cfg.seeds,
                                   **({"wave": args.seed_wave} if args.seed_wave is not None else {}),
                                   **({"sensor": args.seed_sensor} if args.seed_sensor is not None else {}))
    if args.controller is not None:
        changes["controller_variant"] = harness.CPD if args.controller == "cpd" else harness.CPD_FF
    if args.snr is not None:
        changes["preview_snr"] = args.snr
    if args.duration is not None:
        changes["duration"] = args.duration
    if args.skip is not None:
        changes["skip"] = args.skip
    return replace(cfg, **changes) if changes else cfg


def _cmd_run(args) -> int:
    cfg = _build_config(args)
    record = harness.run(cfg)
    args.out.mkdir(parents=True, exist_ok=True)
    record.to_csv(args.out / "timeseries.csv")
    record.write_summary(args.out / "summary.json")
    s = record.summary
    for name, i in (("surge", 0), ("heave", 1), ("pitch", 2)):
        print(f"{name}: rmse={s.rmse[i]:.4g} max={s.max_abs_err[i]:.4g} "
              f"energy={s.energy[i]:.4g} J")
    return 0


def _cmd_compare(args) -> int:
    cases = args.cases or sorted(harness.PRESET_CASES)
    overrides = {}
    if args.seed_wave is not None or args.seed_sensor is not None:
        seeds = harness.Seeds()
        overrides["seeds"] = replace(seeds,
                                     **({"wave": args.seed_wave} if args.seed_wave is not None else {}),
                                     **({"sensor": args.seed_sensor} if args.seed_sensor is not None else {}))
    if args.duration is not None:
        overrides["duration"] = args.duration
    if args.skip is not None:
        overrides["skip"] = args.skip
    pairs = [harness.make_pair(c, snr=args.snr, **overrides) for c in cases]
    rows = harness.compare(pairs)
    args.out.mkdir(parents=True, exist_ok=True)
    harness.comparison_to_csv(rows, args.out / "comparison.csv")
    for case, row in zip(cases, rows):
        print(f"{case}: rmse change x={row['rmse_x_pct']:+.1f}% "
              f"z={row['rmse_z_pct']:+.1f}% m={row['rmse_m_pct']:+.1f}%")
    return 0


def _cmd_preset_dump(args) -> int:
    cfg = harness.preset(args.case)
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / f"{args.case}.json"
    harness.save_config(cfg, path)
    print(path)
    return 0


def _cmd_wave_dump(args) -> int:
    cfg = _build_config(args)
    import numpy as np

    sea = waves.discretize_spectrum(cfg.spectrum, np.random.default_rng(cfg.seeds.wave))
    args.out.mkdir(parents=True, exist_ok=True)
    path = args.out / "wavefield.txt"
    waves.save_field(sea, path)
    print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stationkeep",
                                     description="Station-keeping simulation suite")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_cmp = sub.add_parser("compare", help="compare CPD vs CPD+FF over preset cases")
    _add_common(p_cmp)
    p_cmp.add_argument("--cases", nargs="*", choices=sorted(harness.PRESET_CASES),
                       help="preset cases to compare (default: all)")
    p_cmp.set_defaults(func=_cmd_compare)

    p_pre = sub.add_parser("preset-dump", help="write a preset config as JSON")
    p_pre.add_argument("case", choices=sorted(harness.PRESET_CASES))
    p_pre.add_argument("--out", type=Path, default=Path("."))
    p_pre.set_defaults(func=_cmd_preset_dump)

    p_wav = sub.add_parser("wave-dump", help="export the wave-component table")
    _add_common(p_wav)
    p_wav.set_defaults(func=_cmd_wave_dump)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DivergenceError, EstimatorError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
