"""Hankel assembly, SVD and noise-subspace extraction."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import hankel as _scipy_hankel

from .combine import CombinedSequence


class SpectralError(RuntimeError):
    """The SVD backend failed to converge."""


@dataclass(frozen=True)
class SpectralDecomposition:
    """Full SVD ``H = U diag(singular_values) Vh`` with descending singular values."""

    singular_values: np.ndarray
    left_singular_vectors: np.ndarray
    right_singular_vectors_h: np.ndarray

    @property
    def order(self) -> int:
        return self.singular_values.shape[0]

    def reconstruct(self) -> np.ndarray:
        u = self.left_singular_vectors
        return (u * self.singular_values) @ self.right_singular_vectors_h


def hankel(seq) -> np.ndarray:
    """``(s+1) x (s+1)`` matrix with ``H[i, j] = seq[i + j]``.

    Accepts a :class:`CombinedSequence` or any sequence of odd length ``2s+1``.
    """
    vals = seq.values if isinstance(seq, CombinedSequence) else np.asarray(seq, dtype=complex)
    if vals.ndim != 1 or vals.shape[0] % 2 != 1:
        raise ValueError("need a sequence of odd length 2s+1")
    s = vals.shape[0] // 2
    return _scipy_hankel(vals[: s + 1], vals[s:]).astype(complex)


def decompose(h: np.ndarray) -> SpectralDecomposition:
    h = np.asarray(h, dtype=complex)
    try:
        u, sv, vh = np.linalg.svd(h)
    except np.linalg.LinAlgError as exc:
        raise SpectralError(f"SVD did not converge: {exc}") from exc
    return SpectralDecomposition(sv, u, vh)


def noise_subspace(dec: SpectralDecomposition, n: int) -> np.ndarray:
    """Left singular vectors ``n+1 .. s+1`` (columns), orthonormal."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n >= dec.order:
        raise ValueError(f"no noise space: n={n} >= s+1={dec.order}")
    return dec.left_singular_vectors[:, n:]


def vandermonde_factors(nodes, amplitudes, s: int):
    """Return ``(B, A)`` with ``B = [phi_s(d_1) ... phi_s(d_n)]`` and ``A = diag(a)``."""
    nodes = np.asarray(nodes, dtype=complex)
    b = nodes[None, :] ** np.arange(s + 1)[:, None]
    return b, np.diag(np.asarray(amplitudes, dtype=complex))


def noise_frobenius_bound(s: int, sigma: float) -> float:
    """Upper bound ``4^{s+1} sigma / 3`` on the noise Hankel's Frobenius norm."""
    return 4.0 ** (s + 1) * sigma / 3.0


def lemma_sigma_n_bound(n: int, m_min: float, theta_min: float) -> float:
    """Lower bound on the n-th singular value of ``B A B^T`` for sources near the origin.

    ``theta_min`` is the minimum l1 separation scaled by ``cutoff / (2s)``.
    """
    return m_min * (3.0 * theta_min) ** (2 * n - 2) / (n * (2.0 * (1.0 + np.sqrt(3.0)) * np.pi) ** (2 * n - 2))
