"""Coordinate combination: fold a 2-D lattice measurement into 1-D power sums.

For sources ``x_j`` the plus sequence satisfies, in the noiseless case,
``D(t) = sum_j a_j (e^{i r x_j1} + e^{i r x_j2})^t`` and the minus sequence
``G(t) = sum_j a_j (e^{i x_j1} - e^{i x_j2})^t``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .model import FourierGrid


@dataclass(frozen=True)
class CombinedSequence:
    values: np.ndarray
    half_order: int
    stride: int = 1
    sign_variant: str = "plus"

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (2 * self.half_order + 1,):
            raise ValueError(f"expected {2 * self.half_order + 1} values, got {vals.shape}")
        if self.sign_variant not in ("plus", "minus"):
            raise ValueError("sign_variant must be 'plus' or 'minus'")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]

    def scaled(self, c: complex) -> "CombinedSequence":
        return CombinedSequence(self.values * c, self.half_order, self.stride, self.sign_variant)


def default_stride(cutoff: int, s: int) -> int:
    """Largest integer stride keeping every sample ``(r t1, r t2)``, ``t <= 2s`` on the lattice."""
    return cutoff // (2 * s)


def _combine(values: np.ndarray, cutoff: int, s: int, r: int, alternate: bool) -> np.ndarray:
    if s < 1 or r < 1:
        raise ValueError("s and r must be positive integers")
    if r * 2 * s > cutoff:
        raise ValueError(
            f"combination out of range: r*2s = {r * 2 * s} exceeds cutoff {cutoff}"
        )
    out = np.empty(2 * s + 1, dtype=complex)
    for t in range(2 * s + 1):
        acc = 0j
        for t1 in range(t + 1):
            t2 = t - t1
            w = comb(t, t1)
            if alternate and t2 % 2:
                w = -w
            acc += w * values[r * t1, r * t2]
        out[t] = acc
    return out


def combine_plus(grid: FourierGrid, s: int, r: int | None = None) -> CombinedSequence:
    """``D(t) = sum_{t1+t2=t} C(t, t1) X(r t1, r t2)`` for ``t = 0..2s``."""
    if r is None:
        r = max(default_stride(grid.cutoff, s), 1)
    vals = _combine(grid.values, grid.cutoff, s, r, alternate=False)
    return CombinedSequence(vals, s, r, "plus")


def combine_minus(grid: FourierGrid, s: int) -> CombinedSequence:
    """``G(t) = sum_{t1+t2=t} (-1)^t2 C(t, t1) X(t1, t2)`` for ``t = 0..2s``."""
    vals = _combine(grid.values, grid.cutoff, s, 1, alternate=True)
    return CombinedSequence(vals, s, 1, "minus")


def noise_amplification_bound(s: int) -> np.ndarray:
    """Per-index factors ``2^t``, ``t = 0..2s``: the combined noise obeys ``|W(t)| < 2^t sigma``."""
    if s < 0:
        raise ValueError("s must be >= 0")
    return 2.0 ** np.arange(2 * s + 1)


def combined_nodes(locations: np.ndarray, r: float = 1.0, sign: str = "plus") -> np.ndarray:
    """``e^{i r x_1} +/- e^{i r x_2}`` for each row of ``locations``."""
    locs = np.atleast_2d(np.asarray(locations, dtype=float))
    a = np.exp(1j * r * locs[:, 0])
    b = np.exp(1j * r * locs[:, 1])
    return a + b if sign == "plus" else a - b
