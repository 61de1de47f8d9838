"""Standard MUSIC on a combined sequence over a complex test disk."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _accel
from .combine import CombinedSequence
from .spectral import decompose, hankel, noise_subspace

DEFAULT_STEP = 0.005
DEFAULT_RADIUS = 2.0
ZOOM = 10
# strict 8-neighbour maxima of the zoomed lattice are already this far apart
DEFAULT_MIN_SEPARATION = 2 * DEFAULT_STEP / ZOOM
REFINE_ROUNDS = 3


class PeakSelectionError(RuntimeError):
    """Fewer admissible local maxima than requested."""


@dataclass(frozen=True)
class TestGrid:
    """Square lattice of spacing ``step`` clipped to the closed disk ``|d| <= radius``."""

    __test__ = False  # not a pytest class

    radius: float = DEFAULT_RADIUS
    step: float = DEFAULT_STEP

    def __post_init__(self):
        if self.step <= 0 or self.radius <= 0:
            raise ValueError("radius and step must be positive")

    @cached_property
    def axis(self) -> np.ndarray:
        half = int(np.floor(self.radius / self.step + 1e-9))
        return np.arange(-half, half + 1) * self.step

    @cached_property
    def lattice(self) -> np.ndarray:
        """Complex lattice, shape ``(len(axis), len(axis))``; row index is the imaginary part."""
        return self.axis[None, :] + 1j * self.axis[:, None]

    @cached_property
    def mask(self) -> np.ndarray:
        return np.abs(self.lattice) <= self.radius + 1e-12

    @cached_property
    def points(self) -> np.ndarray:
        return self.lattice[self.mask]


@dataclass(frozen=True)
class MusicImage:
    values: np.ndarray  # one J value per grid.points entry
    grid: TestGrid
    noise_space: np.ndarray

    def as_lattice(self) -> np.ndarray:
        """Image on the full square lattice with ``-inf`` outside the disk."""
        out = np.full(self.grid.mask.shape, -np.inf)
        out[self.grid.mask] = self.values
        return out

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["re", "im", "J"])
            for d, j in zip(self.grid.points, self.values):
                w.writerow([repr(d.real), repr(d.imag), repr(float(j))])


def imaging_functional(noise_space: np.ndarray, d: complex, s: int | None = None) -> float:
    """``||phi_s(d)|| / ||U2^* phi_s(d)||``; :data:`_accel.J_SENTINEL` if the denominator underflows."""
    noise_space = np.asarray(noise_space, dtype=complex)
    if noise_space.ndim != 2 or noise_space.shape[1] < 1:
        raise ValueError("noise space needs at least one column")
    if s is not None and noise_space.shape[0] != s + 1:
        raise ValueError("noise space rows must equal s+1")
    return float(_accel.music_values(np.array([d]), noise_space)[0])


def sequence_noise_space(seq: CombinedSequence, n: int) -> np.ndarray:
    return noise_subspace(decompose(hankel(seq)), n)


def music_image(seq: CombinedSequence, n: int, grid: TestGrid | None = None) -> MusicImage:
    grid = grid or TestGrid()
    u2 = sequence_noise_space(seq, n)
    vals = _accel.music_values(grid.points, u2)
    return MusicImage(vals, grid, u2)


def _strict_local_maxima(img: np.ndarray) -> tuple:
    padded = np.pad(img, 1, constant_values=-np.inf)
    centre = padded[1:-1, 1:-1]
    is_max = np.isfinite(centre)
    rows, cols = img.shape
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            nb = padded[1 + di:1 + di + rows, 1 + dj:1 + dj + cols]
            is_max &= centre > nb
    return np.nonzero(is_max)


def refine_peak(noise_space: np.ndarray, d0: complex, step: float, rounds: int = REFINE_ROUNDS,
                radius: float | None = None) -> tuple:
    """Hill-climb on 5x5 stencils, shrinking the stencil step tenfold per round.

    The centre is part of every stencil, so the returned J never decreases.
    Candidates outside ``|d| <= radius`` are ignored when a radius is given.
    """
    offsets = np.arange(-2, 3)
    stencil = (offsets[None, :] + 1j * offsets[:, None]).ravel()
    best = complex(d0)
    best_j = float(_accel.music_values(np.array([best]), noise_space)[0])
    h = step
    for _ in range(rounds):
        h /= 10.0
        for _ in range(50):
            cand = best + h * stencil
            vals = _accel.music_values(cand, noise_space)
            if radius is not None:
                vals = np.where(np.abs(cand) <= radius + 1e-12, vals, -np.inf)
            k = int(np.argmax(vals))
            if vals[k] <= best_j:
                break
            best, best_j = complex(cand[k]), float(vals[k])
    return best, best_j


def _zoomed_maxima(noise_space, centre: complex, step: float, zoom: int, radius: float) -> list:
    """Strict interior maxima of J on a ``step/zoom`` lattice spanning ``centre +- 3 step``."""
    fine = step / zoom
    half = 3 * zoom
    ax = np.arange(-half, half + 1) * fine
    lat = centre + ax[None, :] + 1j * ax[:, None]
    vals = _accel.music_values(lat.ravel(), noise_space).reshape(lat.shape)
    vals = np.where(np.abs(lat) <= radius + 1e-12, vals, -np.inf)
    ii, jj = _strict_local_maxima(vals)
    inner = (ii > 0) & (ii < 2 * half) & (jj > 0) & (jj < 2 * half)
    return [(float(vals[i, j]), complex(lat[i, j])) for i, j in zip(ii[inner], jj[inner])]


def locate_peaks(image: MusicImage, n: int, min_separation: float = DEFAULT_MIN_SEPARATION,
                 refine: bool = True, zoom: int = ZOOM) -> tuple:
    """Pick ``n`` local maxima greedily by J with pairwise distance ``>= min_separation``.

    The strongest ``n`` strict maxima of the coarse image are re-examined on a
    ``zoom`` times finer lattice around them, which separates nodes that share
    a coarse cell; ``zoom=1`` keeps the coarse maxima only.

    Returns ``(peaks, j_values)``. Raises :class:`PeakSelectionError` when fewer
    than ``n`` admissible maxima exist.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if zoom < 1:
        raise ValueError("zoom must be >= 1")
    img = image.as_lattice()
    ii, jj = _strict_local_maxima(img)
    order = np.argsort(-img[ii, jj], kind="stable")
    lattice = image.grid.lattice
    candidates = [(float(img[ii[k], jj[k]]), complex(lattice[ii[k], jj[k]])) for k in order]
    if zoom > 1:
        step = image.grid.step
        centres = [d for _, d in candidates[:n]]
        fine = [c for d in centres for c in _zoomed_maxima(image.noise_space, d, step, zoom, image.grid.radius)]
        # coarse maxima inside a zoom window are superseded by the fine ones
        rest = [c for c in candidates[n:] if all(max(abs((c[1] - d).real), abs((c[1] - d).imag)) > 3 * step
                                               for d in centres)]
        candidates = sorted(fine + rest, key=lambda c: -c[0])
    chosen = []
    for _, d in candidates:
        if all(abs(d - c) >= min_separation for c in chosen):
            chosen.append(d)
            if len(chosen) == n:
                break
    if len(chosen) < n:
        raise PeakSelectionError(f"found {len(chosen)} admissible peaks, need {n}")
    peaks = np.empty(n, dtype=complex)
    jvals = np.empty(n)
    # refinement starts from the finest lattice that located the peak
    start_step = image.grid.step / zoom
    for idx, d in enumerate(chosen):
        if refine:
            peaks[idx], jvals[idx] = refine_peak(image.noise_space, d, start_step, radius=image.grid.radius)
        else:
            peaks[idx] = d
            jvals[idx] = _accel.music_values(np.array([d]), image.noise_space)[0]
    return peaks, jvals
