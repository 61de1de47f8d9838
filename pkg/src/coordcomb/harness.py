"""Monte-Carlo phase-transition experiments for detection and location recovery."""
from __future__ import annotations

import csv
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .detect import DetectionParams, detect_count_sweep
from .model import NoiseSpec, SourceConfiguration, add_noise, forward_measure
from .music import DEFAULT_MIN_SEPARATION, DEFAULT_STEP, TestGrid
from .recover import RecoveryError, recover_sources
from .theory import resolution_limit_thresholds

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 100_000
N_BINS = 20

CSV_FIELDS = ("trial_id", "n_true", "d_min", "sigma", "srf", "snr", "n_detected",
              "success", "max_location_error", "seed")


@dataclass(frozen=True)
class ExperimentConfig:
    n_true: int = 3
    omega: int = 10
    region: tuple = ((0.0, math.pi / 2), (0.0, math.pi / 2))
    translation: tuple = (0.0, math.pi / 2)
    trials: int = 2000
    srf_log10_range: tuple = (-0.3, 1.0)
    inv_sigma_log10_range: tuple = (0.0, 12.0)
    seed: int = 0
    grid_step: float = DEFAULT_STEP
    min_separation: float = DEFAULT_MIN_SEPARATION
    noiseless: bool = False  # sanity batches: sigma = 0 and the detector's zero-noise floor

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for name in ("srf_log10_range", "inv_sigma_log10_range"):
            lo, hi = getattr(self, name)
            if not hi > lo:
                raise ValueError(f"{name} must be a nonempty interval")
        if self.n_true < 1:
            raise ValueError("n_true must be >= 1")
        object.__setattr__(self, "region", tuple(tuple(float(v) for v in b) for b in self.region))
        object.__setattr__(self, "translation", tuple(float(v) for v in self.translation))
        object.__setattr__(self, "srf_log10_range", tuple(float(v) for v in self.srf_log10_range))
        object.__setattr__(self, "inv_sigma_log10_range", tuple(float(v) for v in self.inv_sigma_log10_range))

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    n_true: int
    d_min: float
    sigma: float
    srf: float
    snr: float
    n_detected: int
    success: bool
    max_location_error: float
    seed: int

    def to_row(self) -> dict:
        return asdict(self)

    @classmethod
    def from_row(cls, row: dict) -> "TrialRecord":
        return cls(
            trial_id=int(row["trial_id"]),
            n_true=int(row["n_true"]),
            d_min=float(row["d_min"]),
            sigma=float(row["sigma"]),
            srf=float(row["srf"]),
            snr=float(row["snr"]),
            n_detected=int(row["n_detected"]),
            success=row["success"] in (True, "True", "true", "1", 1),
            max_location_error=float(row["max_location_error"]),
            seed=int(row["seed"]),
        )


class SamplingError(RuntimeError):
    pass


def trial_seed(batch_seed: int, trial_id: int) -> int:
    """Per-trial seed independent of execution order."""
    return int(np.random.SeedSequence([batch_seed, trial_id]).generate_state(1, dtype=np.uint64)[0])


def _l1_step(rng, radius):
    # uniform direction on the l1 sphere of the given radius
    u = rng.uniform(-1.0, 1.0)
    sign = rng.choice((-1.0, 1.0))
    return radius * np.array([u, sign * (1.0 - abs(u))])


def sample_instance(config: ExperimentConfig, rng: np.random.Generator):
    """Draw ``(SourceConfiguration, sigma)``.

    SRF and ``1/sigma`` are log-uniform over the configured ranges (``sigma`` is
    0 for a noiseless config; the draw still happens so streams line up). Sources
    grow as a cluster: the second point sits at l1 distance exactly ``D`` from
    the first, later points at ``[D, 1.1 D]`` from a random earlier point.
    A candidate is rejected if it leaves the region or comes closer than ``D``
    to any point. Amplitudes have modulus in ``[1, 2]`` and
    uniform phase.
    """
    log_srf = rng.uniform(*config.srf_log10_range)
    log_inv_sigma = rng.uniform(*config.inv_sigma_log10_range)
    sigma = 0.0 if config.noiseless else 10.0 ** (-log_inv_sigma)
    d_target = math.pi / (10.0 ** log_srf * config.omega)
    lo = np.array([config.region[0][0], config.region[1][0]])
    hi = np.array([config.region[0][1], config.region[1][1]])
    n = config.n_true

    locs = None
    for _ in range(MAX_ATTEMPTS):
        pts = [rng.uniform(lo, hi)]
        ok = True
        while len(pts) < n:
            for _ in range(200):
                anchor = pts[rng.integers(len(pts))]
                # the first pair sits at exactly D so the realized minimum separation is D
                step = d_target if len(pts) == 1 else rng.uniform(d_target, 1.1 * d_target)
                cand = anchor + _l1_step(rng, step)
                if np.any(cand < lo) or np.any(cand > hi):
                    continue
                if min(np.abs(cand - p).sum() for p in pts) < d_target:
                    continue
                pts.append(cand)
                break
            else:
                ok = False
                break
        if ok:
            locs = np.array(pts)
            break
    if locs is None:
        raise SamplingError(f"could not place {n} sources at separation {d_target:.4g}")
    amps = rng.uniform(1.0, 2.0, n) * np.exp(1j * rng.uniform(0.0, 2 * np.pi, n))
    return SourceConfiguration(locs, amps, config.region), sigma


def _measurement(config, rng):
    src, sigma = sample_instance(config, rng)
    grid = forward_measure(src, config.omega)
    noise_seed = int(rng.integers(0, 2**63 - 1))
    return src, sigma, add_noise(grid, NoiseSpec(sigma, noise_seed))


def _record(config, trial_id, seed, src, sigma, n_detected, success, err):
    d_min = src.d_min
    return TrialRecord(
        trial_id=trial_id,
        n_true=src.n,
        d_min=d_min,
        sigma=sigma,
        srf=math.pi / (d_min * config.omega) if math.isfinite(d_min) else 0.0,
        snr=src.m_min / sigma if sigma > 0 else math.inf,
        n_detected=n_detected,
        success=bool(success),
        max_location_error=err,
        seed=seed,
    )


def number_trial(config: ExperimentConfig, trial_id: int) -> TrialRecord | None:
    seed = trial_seed(config.seed, trial_id)
    rng = np.random.default_rng(seed)
    try:
        src, sigma, y = _measurement(config, rng)
    except SamplingError as exc:
        log.warning("trial %d skipped: %s", trial_id, exc)
        return None
    params = DetectionParams(translation=config.translation, noise_level=sigma)
    try:
        n_hat = detect_count_sweep(y, params)
    except Exception as exc:  # record, never abort the batch
        log.warning("trial %d detection failed: %s", trial_id, exc)
        n_hat = -1
    return _record(config, trial_id, seed, src, sigma, n_hat, n_hat == src.n, math.nan)


def location_success(true_locs: np.ndarray, est_locs: np.ndarray) -> tuple:
    """Per-source check ``e_j < min_{p != j} ||y_p - y_j||_2 / 3`` with ``e_j`` the nearest-estimate l2 error.

    Returns ``(success, max_error)``.
    """
    true_locs = np.asarray(true_locs, dtype=float)
    est_locs = np.asarray(est_locs, dtype=float)
    n = true_locs.shape[0]
    errs = np.linalg.norm(true_locs[:, None, :] - est_locs[None, :, :], axis=2).min(axis=1)
    if n == 1:
        return True, float(errs[0])
    gaps = np.linalg.norm(true_locs[:, None, :] - true_locs[None, :, :], axis=2)
    np.fill_diagonal(gaps, np.inf)
    hits = errs < gaps.min(axis=1) / 3.0
    return bool(hits.sum() == n), float(errs.max())


def location_trial(config: ExperimentConfig, trial_id: int) -> TrialRecord | None:
    seed = trial_seed(config.seed, trial_id)
    rng = np.random.default_rng(seed)
    try:
        src, sigma, y = _measurement(config, rng)
    except SamplingError as exc:
        log.warning("trial %d skipped: %s", trial_id, exc)
        return None
    grid = TestGrid(step=config.grid_step)
    try:
        res = recover_sources(y, src.n, config.translation, grid, config.min_separation)
        success, err = location_success(src.locations, res.locations)
    except RecoveryError:
        success, err = False, math.inf
    return _record(config, trial_id, seed, src, sigma, src.n, success, err)


def _run_chunk(args):
    mode, config, ids = args
    fn = number_trial if mode == "number" else location_trial
    return [fn(config, i) for i in ids]


def run_trials(mode: str, config: ExperimentConfig, workers: int | None = None) -> list:
    if mode not in ("number", "location"):
        raise ValueError("mode must be 'number' or 'location'")
    workers = workers or 1
    ids = list(range(config.trials))
    if workers == 1:
        recs = _run_chunk((mode, config, ids))
    else:
        chunks = [ids[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            recs = [r for part in pool.map(_run_chunk, [(mode, config, c) for c in chunks]) for r in part]
    return sorted((r for r in recs if r is not None), key=lambda r: r.trial_id)


def run_number_phase_transition(config: ExperimentConfig, workers: int | None = None) -> list:
    return run_trials("number", config, workers)


def run_location_phase_transition(config: ExperimentConfig, workers: int | None = None) -> list:
    return run_trials("location", config, workers)


class FitError(ValueError):
    pass


def boundary_points(records, n_bins: int = N_BINS, srf_range=None) -> tuple:
    """Per-bin boundary ``(bin centre, minimal log10(1/sigma) above which all trials succeed)``.

    Only bins holding both outcomes with at least one success above the
    highest failure contribute.
    """
    recs = [r for r in records if r.srf > 0 and r.sigma > 0]
    if not recs:
        raise FitError("no usable records")
    x = np.log10([r.srf for r in recs])
    y = -np.log10([r.sigma for r in recs])
    ok = np.array([r.success for r in recs])
    lo, hi = srf_range if srf_range is not None else (x.min(), x.max())
    edges = np.linspace(lo, hi, n_bins + 1)
    idx = np.clip(np.digitize(x, edges) - 1, 0, n_bins - 1)
    centres, bounds = [], []
    for b in range(n_bins):
        sel = idx == b
        if not sel.any() or ok[sel].all() or not ok[sel].any():
            continue
        top_fail = y[sel & ~ok].max()
        above = y[sel & ok & (y > top_fail)]
        if above.size == 0:
            continue
        centres.append(0.5 * (edges[b] + edges[b + 1]))
        bounds.append(above.min())
    return np.array(centres), np.array(bounds)


def fit_boundary_slope(records, n_bins: int = N_BINS, srf_range=None, min_bins: int = 5) -> tuple:
    """Least-squares line through the per-bin success boundaries; returns ``(slope, intercept)``."""
    cx, by = boundary_points(records, n_bins, srf_range)
    if cx.size < min_bins:
        raise FitError(f"only {cx.size} bins with mixed outcomes; need {min_bins}")
    slope, intercept = np.polyfit(cx, by, 1)
    return float(slope), float(intercept)


def above_threshold_violations(records, mode: str, omega: int) -> list:
    """Trials meeting the separation condition of the resolution-limit theorems that still failed."""
    bad = []
    for r in records:
        if r.n_true < 2 or r.sigma <= 0:
            continue
        m_min = r.snr * r.sigma
        if r.sigma > m_min:
            continue
        rep = resolution_limit_thresholds(r.n_true, omega, r.sigma, m_min)
        limit = rep.instance["number_threshold" if mode == "number" else "location_threshold"]
        if r.d_min >= limit and not r.success:
            bad.append(r)
    return bad


def emit_csv(records, path) -> None:
    records = list(records)
    if not records:
        raise ValueError("refusing to write an empty record set")
    try:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
            w.writeheader()
            for r in records:
                row = r.to_row()
                w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        return [TrialRecord.from_row(row) for row in csv.DictReader(fh)]


def emit_plot(records, path, fit=None, title: str | None = None) -> None:
    """Scatter log10(SRF) vs log10(1/sigma) as SVG, with the fitted boundary if available."""
    records = [r for r in records if r.srf > 0 and r.sigma > 0]
    if not records:
        raise ValueError("refusing to plot an empty record set")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    x = np.log10([r.srf for r in records])
    y = -np.log10([r.sigma for r in records])
    ok = np.array([r.success for r in records])
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.scatter(x[ok], y[ok], s=6, marker="o", c="tab:blue", label="success")
    ax.scatter(x[~ok], y[~ok], s=8, marker="x", c="tab:red", label="failure")
    if fit is None:
        try:
            fit = fit_boundary_slope(records)
        except FitError:
            fit = None
    if fit is not None:
        xs = np.linspace(x.min(), x.max(), 50)
        ax.plot(xs, fit[0] * xs + fit[1], "k-", lw=1.2, label=f"slope {fit[0]:.2f}")
    ax.set_xlabel("log10(SRF)")
    ax.set_ylabel("log10(1/sigma)")
    if title:
        ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    try:
        fig.savefig(path, format="svg")
    finally:
        plt.close(fig)


def default_workers() -> int:
    return max(1, os.cpu_count() or 1)
