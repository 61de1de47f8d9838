"""Coordinate-combination MUSIC: locate 2-D sources from one lattice measurement."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

import numpy as np
from scipy.optimize import linear_sum_assignment

from .combine import combine_minus, combine_plus
from .model import FourierGrid, translate
from .music import (
    DEFAULT_MIN_SEPARATION,
    PeakSelectionError,
    TestGrid,
    locate_peaks,
    music_image,
)


class RecoveryError(RuntimeError):
    """Peak shortfall or a degenerate root pair."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass(frozen=True)
class PairedRoots:
    pairs: tuple  # ((d_hat, g_hat), ...)
    matching_cost: float

    @property
    def d(self) -> np.ndarray:
        return np.array([p[0] for p in self.pairs], dtype=complex)

    @property
    def g(self) -> np.ndarray:
        return np.array([p[1] for p in self.pairs], dtype=complex)


@dataclass
class RecoveryResult:
    locations: np.ndarray
    amplitudes: np.ndarray | None = None
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {"locations": np.asarray(self.locations).tolist(), "diagnostics": _jsonable(self.diagnostics)}
        if self.amplitudes is not None:
            out["amplitudes"] = [{"re": float(a.real), "im": float(a.imag)} for a in self.amplitudes]
        return out

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def pairing_cost_matrix(d_roots, g_roots) -> np.ndarray:
    """``C[i, j] = ||d_i + g_j| - 2| + ||d_i - g_j| - 2|``."""
    d = np.asarray(d_roots, dtype=complex)[:, None]
    g = np.asarray(g_roots, dtype=complex)[None, :]
    return np.abs(np.abs(d + g) - 2.0) + np.abs(np.abs(d - g) - 2.0)


def pair_match(d_roots, g_roots) -> PairedRoots:
    """Minimum-cost perfect matching of d-roots to g-roots."""
    d = np.asarray(d_roots, dtype=complex)
    g = np.asarray(g_roots, dtype=complex)
    if d.shape != g.shape:
        raise ValueError("need equal numbers of d- and g-roots")
    cost = pairing_cost_matrix(d, g)
    rows, cols = linear_sum_assignment(cost)
    pairs = tuple((complex(d[i]), complex(g[j])) for i, j in zip(rows, cols))
    return PairedRoots(pairs, float(cost[rows, cols].sum()))


def brute_force_pairing_cost(cost: np.ndarray) -> float:
    """Exhaustive minimum over all permutations; a reference for small ``n``."""
    n = cost.shape[0]
    idx = np.arange(n)
    return float(min(cost[idx, list(p)].sum() for p in permutations(range(n))))


def roots_to_locations(pairs: PairedRoots, v=(0.0, 0.0)) -> np.ndarray:
    """Project ``(d+g)/2`` and ``(d-g)/2`` to the unit circle and read off angles in ``[0, 2pi)``."""
    d, g = pairs.d, pairs.g
    half_sum = (d + g) / 2
    half_diff = (d - g) / 2
    if np.any(np.abs(half_sum) < 1e-12) or np.any(np.abs(half_diff) < 1e-12):
        raise RecoveryError("degenerate root pair", {"half_sum": half_sum, "half_diff": half_diff})
    x1 = np.mod(np.angle(half_sum), 2 * np.pi)
    x2 = np.mod(np.angle(half_diff), 2 * np.pi)
    return np.column_stack([x1, x2]) - np.asarray(v, dtype=float)


def recover_sources(grid: FourierGrid, n: int, v=(0.0, np.pi / 2), test_grid: TestGrid | None = None,
                    min_separation: float = DEFAULT_MIN_SEPARATION,
                    with_amplitudes: bool = False) -> RecoveryResult:
    """Translate, combine (plus and minus), run MUSIC on each, pair the roots, invert."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = grid.cutoff // 2
    if s + 1 <= n:
        raise ValueError(f"cutoff {grid.cutoff} too small for {n} sources")
    test_grid = test_grid or TestGrid()
    x = translate(grid, v)
    seq_d = combine_plus(x, s, 1)
    seq_g = combine_minus(x, s)
    try:
        d_hat, jd = locate_peaks(music_image(seq_d, n, test_grid), n, min_separation)
        g_hat, jg = locate_peaks(music_image(seq_g, n, test_grid), n, min_separation)
    except PeakSelectionError as exc:
        raise RecoveryError(str(exc)) from exc
    pairs = pair_match(d_hat, g_hat)
    locs = roots_to_locations(pairs, v)
    diag = {"matching_cost": pairs.matching_cost, "j_d": jd, "j_g": jg, "s": s}
    amps = None
    if with_amplitudes:
        amps, diag["residual"] = estimate_amplitudes(grid, locs)
    return RecoveryResult(locs, amps, diag)


def estimate_amplitudes(grid: FourierGrid, locations) -> tuple:
    """Least-squares amplitudes under the forward model; returns ``(amplitudes, residual)``."""
    locs = np.atleast_2d(np.asarray(locations, dtype=float))
    design = amplitude_design(grid.cutoff, locs)
    if np.linalg.matrix_rank(design) < locs.shape[0]:
        raise ValueError("rank-deficient design: locations coincide (mod 2pi)")
    y = grid.values.ravel()
    amps, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.linalg.norm(design @ amps - y))
    return amps, residual


def amplitude_design(cutoff: int, locations) -> np.ndarray:
    w = np.arange(cutoff + 1)
    w1, w2 = np.meshgrid(w, w, indexing="ij")
    omega = np.column_stack([w1.ravel(), w2.ravel()])
    return np.exp(1j * omega @ np.asarray(locations, dtype=float).T)
