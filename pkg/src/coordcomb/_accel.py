"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``COORDCOMB_DISABLE_NUMBA=1`` before import to force the numpy path.
Both paths compute the same quantities; tests compare them directly.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("COORDCOMB_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLE:
        raise ImportError("numba disabled by environment")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:  # pragma: no cover - depends on environment
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


# Returned by the MUSIC functional when the projected norm underflows.
J_SENTINEL = 1e300
_TINY = 1e-300


@njit(cache=True)
def _music_values_jit(points, noise_conj_t, s):
    # noise_conj_t is (m, s+1): row k holds conj(U2[:, k])
    m = noise_conj_t.shape[0]
    out = np.empty(points.shape[0])
    for p in range(points.shape[0]):
        d = points[p]
        pw = 1.0 + 0.0j
        num2 = 0.0
        acc = np.zeros(m, dtype=np.complex128)
        for t in range(s + 1):
            num2 += pw.real * pw.real + pw.imag * pw.imag
            for k in range(m):
                acc[k] += noise_conj_t[k, t] * pw
            pw = pw * d
        den2 = 0.0
        for k in range(m):
            den2 += acc[k].real * acc[k].real + acc[k].imag * acc[k].imag
        den = np.sqrt(den2)
        if den < _TINY:
            out[p] = J_SENTINEL
        else:
            out[p] = np.sqrt(num2) / den
    return out


def _music_values_numpy(points, noise_conj_t, s, block=65536):
    out = np.empty(points.shape[0])
    powers = np.arange(s + 1)
    for start in range(0, points.shape[0], block):
        d = points[start:start + block]
        phi = d[:, None] ** powers[None, :]
        num = np.linalg.norm(phi, axis=1)
        den = np.linalg.norm(phi @ noise_conj_t.T, axis=1)
        vals = np.full(d.shape[0], J_SENTINEL)
        ok = den >= _TINY
        vals[ok] = num[ok] / den[ok]
        out[start:start + block] = vals
    return out


def music_values(points: np.ndarray, noise_space: np.ndarray, use_numba: bool | None = None) -> np.ndarray:
    """Evaluate ||phi_s(d)|| / ||U2^* phi_s(d)|| at every complex point ``d``."""
    points = np.ascontiguousarray(points, dtype=np.complex128).ravel()
    noise_space = np.asarray(noise_space, dtype=np.complex128)
    s = noise_space.shape[0] - 1
    noise_conj_t = np.ascontiguousarray(noise_space.conj().T)
    if use_numba is None:
        use_numba = NUMBA_ENABLED
    if use_numba and NUMBA_ENABLED:
        return _music_values_jit(points, noise_conj_t, s)
    return _music_values_numpy(points, noise_conj_t, s)


@njit(cache=True)
def _pair_residual_min_jit(phis, target):
    # phis: (N, L) Vandermonde rows; min over unordered pairs (and singletons)
    # of the distance from target to span{phi_a, phi_b}.
    npts, length = phis.shape
    tnorm2 = 0.0
    for t in range(length):
        tnorm2 += target[t].real * target[t].real + target[t].imag * target[t].imag
    c = np.empty(npts, dtype=np.complex128)
    g = np.empty(npts)
    for a in range(npts):
        ca = 0.0 + 0.0j
        ga = 0.0
        for t in range(length):
            ca += np.conj(phis[a, t]) * target[t]
            ga += phis[a, t].real * phis[a, t].real + phis[a, t].imag * phis[a, t].imag
        c[a] = ca
        g[a] = ga
    best = tnorm2
    best_a = -1
    best_b = -1
    for a in range(npts):
        r1 = tnorm2 - (c[a].real * c[a].real + c[a].imag * c[a].imag) / g[a]
        if r1 < best:
            best = r1
            best_a = a
            best_b = a
    for a in range(npts):
        for b in range(a + 1, npts):
            gab = 0.0 + 0.0j
            for t in range(length):
                gab += np.conj(phis[a, t]) * phis[b, t]
            det = g[a] * g[b] - (gab.real * gab.real + gab.imag * gab.imag)
            if det <= 1e-14 * g[a] * g[b]:
                continue
            # c^H G^{-1} c for the 2x2 Gram G = [[ga, gab], [conj(gab), gb]]
            ca = c[a]
            cb = c[b]
            quad = (g[b] * (ca.real * ca.real + ca.imag * ca.imag)
                    + g[a] * (cb.real * cb.real + cb.imag * cb.imag)
                    - 2.0 * (np.conj(ca) * gab * cb).real) / det
            r2 = tnorm2 - quad
            if r2 < best:
                best = r2
                best_a = a
                best_b = b
    if best < 0.0:
        best = 0.0
    return np.sqrt(best), best_a, best_b


def _pair_residual_min_numpy(phis, target, block=512):
    tnorm2 = float(np.vdot(target, target).real)
    c = phis.conj() @ target
    g = np.einsum("ij,ij->i", phis.conj(), phis).real
    single = tnorm2 - np.abs(c) ** 2 / g
    best = tnorm2
    best_a = best_b = -1
    i = int(np.argmin(single))
    if single[i] < best:
        best, best_a, best_b = float(single[i]), i, i
    npts = phis.shape[0]
    for start in range(0, npts, block):
        stop = min(start + block, npts)
        gab = phis[start:stop].conj() @ phis.T  # (B, N)
        ga = g[start:stop, None]
        det = ga * g[None, :] - np.abs(gab) ** 2
        ca = c[start:stop, None]
        cb = c[None, :]
        quad = (g[None, :] * np.abs(ca) ** 2 + ga * np.abs(cb) ** 2
                - 2.0 * (ca.conj() * gab * cb).real)
        with np.errstate(divide="ignore", invalid="ignore"):
            r2 = tnorm2 - quad / det
        rows = np.arange(start, stop)[:, None]
        cols = np.arange(npts)[None, :]
        valid = (cols > rows) & (det > 1e-14 * ga * g[None, :])
        r2 = np.where(valid, r2, np.inf)
        k = int(np.argmin(r2))
        val = float(r2.flat[k])
        if val < best:
            best = val
            best_a, best_b = start + k // npts, k % npts
    return float(np.sqrt(max(best, 0.0))), best_a, best_b


def pair_residual_min(phis: np.ndarray, target: np.ndarray, use_numba: bool | None = None):
    """Smallest distance from ``target`` to the span of one or two rows of ``phis``.

    Returns ``(distance, a, b)`` where ``a == b`` marks a single-node optimum
    and ``a == b == -1`` means no candidate beat the zero approximation.
    """
    phis = np.ascontiguousarray(phis, dtype=np.complex128)
    target = np.ascontiguousarray(target, dtype=np.complex128)
    if use_numba is None:
        use_numba = NUMBA_ENABLED
    if use_numba and NUMBA_ENABLED:
        dist, a, b = _pair_residual_min_jit(phis, target)
        return float(dist), int(a), int(b)
    return _pair_residual_min_numpy(phis, target)
