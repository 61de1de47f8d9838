"""Command-line entry point: ``coordcomb <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import harness, theory
from .detect import DetectionParams, fixed_s_analysis, sweep_analysis
from .model import NoiseSpec, SourceConfiguration, add_noise, forward_measure, load_grid, save_json
from .music import DEFAULT_MIN_SEPARATION, DEFAULT_STEP, TestGrid
from .recover import RecoveryError, recover_sources

FULL_SCALE_TRIALS = 10_000


def _pair(text: str) -> tuple:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two comma-separated numbers, e.g. 0,1.5708")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SystemExit(f"error: cannot read {path}: {exc}")


def cmd_simulate(args) -> int:
    cfg = _load_json(args.config)
    omega = args.omega if args.omega is not None else cfg.get("omega", 10)
    sigma = args.sigma if args.sigma is not None else cfg.get("sigma", 0.0)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    src = SourceConfiguration.from_dict(cfg.get("sources", cfg))
    grid = add_noise(forward_measure(src, int(omega)), NoiseSpec(float(sigma), int(seed)))
    save_json(grid, args.out)
    return 0


def _check_cutoff(grid, omega):
    if omega is not None and grid.cutoff != omega:
        raise SystemExit(f"error: grid cutoff {grid.cutoff} does not match --omega {omega}")


def cmd_detect(args) -> int:
    grid = load_grid(args.input)
    _check_cutoff(grid, args.omega)
    sigma = grid.noise_level if args.sigma is None else args.sigma
    params = DetectionParams(translation=args.translation, noise_level=sigma,
                             threshold_scale=args.threshold_scale, patience=args.patience)
    if args.s is not None:
        steps = [fixed_s_analysis(grid, params, args.s)]
        count = steps[0].count
    else:
        res = sweep_analysis(grid, params)
        steps, count = res.steps, res.count
    print(f"n,{count}")
    w = csv.writer(sys.stdout)
    width = max(len(st.singular_values) for st in steps)
    w.writerow(["s", "stride", "threshold", "count"] + [f"sv{j + 1}" for j in range(width)])
    for st in steps:
        w.writerow([st.s, st.stride, repr(st.threshold), st.count] + [repr(float(v)) for v in st.singular_values])
    return 0


def cmd_recover(args) -> int:
    grid = load_grid(args.input)
    _check_cutoff(grid, args.omega)
    try:
        res = recover_sources(grid, args.n, args.translation, TestGrid(step=args.grid_step),
                              args.min_separation, with_amplitudes=True)
    except RecoveryError as exc:
        print(f"recovery failed: {exc}", file=sys.stderr)
        return 1
    if args.output:
        res.save(args.output)
    else:
        print(json.dumps(res.to_dict(), indent=2))
    return 0


def cmd_phase_transition(args) -> int:
    data = _load_json(args.config) if args.config else {}
    for key, val in (("n_true", args.n), ("trials", args.trials), ("seed", args.seed), ("omega", args.omega)):
        if val is not None:
            data[key] = val
    if args.full_scale:
        data["trials"] = FULL_SCALE_TRIALS
    config = harness.ExperimentConfig.from_dict(data)
    records = harness.run_trials(args.mode, config, args.workers)
    if not records:
        print("no trials completed", file=sys.stderr)
        return 1
    harness.emit_csv(records, args.out_csv)
    fit = None
    try:
        fit = harness.fit_boundary_slope(records)
        print(f"slope,{fit[0]:.4f}\nintercept,{fit[1]:.4f}")
    except harness.FitError as exc:
        print(f"slope fit declined: {exc}", file=sys.stderr)
    if args.out_plot:
        harness.emit_plot(records, args.out_plot, fit, f"{args.mode} recovery, n={config.n_true}")
    rate = np.mean([r.success for r in records])
    print(f"trials,{len(records)}\nsuccess_rate,{rate:.4f}")
    bad = harness.above_threshold_violations(records, args.mode, config.omega)
    print(f"above_threshold_failures,{len(bad)}")
    return 0 if not bad else 2


def cmd_verify_theory(args) -> int:
    reports = theory.run_suite(args.suite, args.instances, args.seed)
    out = open(args.out_csv, "w", newline="") if args.out_csv else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=["name", "lhs", "rhs", "relation", "applicable", "satisfied"])
        w.writeheader()
        for r in reports:
            w.writerow(r.row())
    finally:
        if out is not sys.stdout:
            out.close()
    summary = theory.summarize(reports)
    failed = sum(v["violations"] for v in summary.values())
    for name, row in summary.items():
        print(f"{name}: {row['evaluated']} evaluated, {row['not_applicable']} not applicable, "
              f"{row['violations']} violations", file=sys.stderr)
    print("PASS" if failed == 0 else f"FAIL ({failed} violations)", file=sys.stderr)
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="coordcomb", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="measure a source configuration on the Fourier lattice")
    s.add_argument("--config", required=True, help="JSON with sources (or locations/amplitudes) and omega/sigma/seed")
    s.add_argument("--out", required=True)
    s.add_argument("--omega", type=int)
    s.add_argument("--sigma", type=float)
    s.add_argument("--seed", type=int)
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("detect", help="estimate the number of sources")
    d.add_argument("--input", required=True)
    d.add_argument("--omega", type=int)
    d.add_argument("--sigma", type=float, help="noise level (default: the grid's own)")
    d.add_argument("--translation", type=_pair, default=(0.0, np.pi / 2))
    d.add_argument("--threshold-scale", type=float, default=1.0)
    d.add_argument("--patience", type=int, default=2)
    d.add_argument("--s", type=int, help="single fixed s instead of the sweep")
    d.set_defaults(func=cmd_detect)

    r = sub.add_parser("recover", help="recover source locations with n known")
    r.add_argument("--input", required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--omega", type=int)
    r.add_argument("--translation", type=_pair, default=(0.0, np.pi / 2))
    r.add_argument("--grid-step", type=float, default=DEFAULT_STEP)
    r.add_argument("--min-separation", type=float, default=DEFAULT_MIN_SEPARATION)
    r.add_argument("--output")
    r.set_defaults(func=cmd_recover)

    t = sub.add_parser("phase-transition", help="Monte-Carlo phase-transition experiment")
    t.add_argument("--mode", choices=("number", "location"), required=True)
    t.add_argument("--config", help="JSON mirroring the experiment config fields")
    t.add_argument("--n", type=int)
    t.add_argument("--omega", type=int)
    t.add_argument("--trials", type=int)
    t.add_argument("--seed", type=int)
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--full-scale", action="store_true", help=f"run {FULL_SCALE_TRIALS} trials")
    t.add_argument("--out-csv", required=True)
    t.add_argument("--out-plot")
    t.set_defaults(func=cmd_phase_transition)

    v = sub.add_parser("verify-theory", help="randomized checks of the theoretical inequalities")
    v.add_argument("--suite", choices=("all",) + theory.SUITES, default="all")
    v.add_argument("--instances", type=int, help="instances per check (default: standard batch sizes)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out-csv", help="report CSV path (default: stdout)")
    v.set_defaults(func=cmd_verify_theory)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
