"""Numerical checks for the Vandermonde, approximation and geometry inequalities.

Every ``check_*`` function returns a :class:`BoundReport`. A report with
``applicable=False`` means the inputs do not meet the hypotheses; it is never
counted as a violation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations

import mpmath
import numpy as np
from scipy.optimize import minimize

from . import _accel

SLACK = 1e-12
ILL_POSED = 1e-8


class IllPosedError(ValueError):
    """Nodes too close for a meaningful inverse."""


@dataclass
class BoundReport:
    name: str
    lhs: float
    rhs: float
    relation: str = "<="  # lhs relation rhs
    applicable: bool = True
    instance: dict = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        if not self.applicable:
            return True
        tol = SLACK * max(1.0, abs(self.lhs), abs(self.rhs))
        if self.relation == "<=":
            return self.lhs <= self.rhs + tol
        if self.relation == "<":
            return self.lhs < self.rhs + tol
        if self.relation == ">=":
            return self.lhs >= self.rhs - tol
        raise ValueError(f"unknown relation {self.relation!r}")

    def row(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "relation": self.relation,
                "applicable": self.applicable, "satisfied": self.satisfied}


def _not_applicable(name, reason, **inst):
    return BoundReport(name, math.nan, math.nan, applicable=False, instance={"reason": reason, **inst})


def phi(s: int, w: complex) -> np.ndarray:
    """Vandermonde vector ``(1, w, ..., w^s)``."""
    if s < 0:
        raise ValueError("s must be >= 0")
    return complex(w) ** np.arange(s + 1)


def vandermonde_matrix(s: int, nodes) -> np.ndarray:
    """``(s+1) x k`` matrix whose columns are ``phi(s, d_j)``."""
    nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
    return nodes[None, :] ** np.arange(s + 1)[:, None]


def min_gap(nodes) -> float:
    nodes = np.asarray(nodes, dtype=complex)
    if nodes.size < 2:
        return math.inf
    diff = np.abs(nodes[:, None] - nodes[None, :])
    np.fill_diagonal(diff, np.inf)
    return float(diff.min())


def _require_distinct(nodes):
    gap = min_gap(nodes)
    if gap < ILL_POSED:
        raise IllPosedError(f"nodes nearly coincide (min gap {gap:.3g})")
    return gap


def check_inverse_norm(nodes) -> BoundReport:
    """``||V^{-1}||_inf`` of the square Vandermonde matrix against the Gautschi-type bounds."""
    nodes = np.asarray(nodes, dtype=complex)
    k = nodes.size
    if k < 2:
        raise ValueError("need at least two nodes")
    gap = _require_distinct(nodes)
    v = vandermonde_matrix(k - 1, nodes)
    actual = float(np.abs(np.linalg.inv(v)).sum(axis=1).max())
    per_node = []
    for i in range(k):
        others = np.delete(nodes, i)
        per_node.append(float(np.prod((1 + np.abs(others)) / np.abs(nodes[i] - others))))
    lemma = max(per_node)
    d = float(np.abs(nodes).max())
    corollary = (1 + d) ** (k - 1) / gap ** (k - 1)
    rep = BoundReport("inverse_norm", actual, lemma, "<=",
                      instance={"nodes": nodes.tolist(), "lemma_bound": lemma, "corollary_bound": corollary})
    rep.instance["corollary_ok"] = BoundReport("", actual, corollary).satisfied
    if not rep.instance["corollary_ok"]:
        rep.rhs = corollary
    return rep


def check_singular_chain(nodes, s: int) -> BoundReport:
    """``1/(sqrt(k)||V^{-1}||_inf) <= 1/||V^{-1}||_2 <= smin(V_{k-1}) <= smin(V_s)``."""
    nodes = np.asarray(nodes, dtype=complex)
    k = nodes.size
    if s < k - 1:
        raise ValueError("need s >= k - 1")
    _require_distinct(nodes)
    v = vandermonde_matrix(k - 1, nodes)
    inv = np.linalg.inv(v)
    chain = [
        1.0 / (math.sqrt(k) * np.abs(inv).sum(axis=1).max()),
        1.0 / np.linalg.norm(inv, 2),
        float(np.linalg.svd(v, compute_uv=False).min()),
        float(np.linalg.svd(vandermonde_matrix(s, nodes), compute_uv=False).min()),
    ]
    links = [BoundReport("", chain[i], chain[i + 1]).satisfied for i in range(3)]
    # lhs/rhs carry the first failing link, or the chain ends when all hold
    worst = next((i for i, ok in enumerate(links) if not ok), None)
    lhs, rhs = (chain[0], chain[3]) if worst is None else (chain[worst], chain[worst + 1])
    return BoundReport("singular_chain", lhs, rhs, "<=", instance={"chain": chain, "s": s, "nodes": nodes.tolist()})


def elementary_symmetric(nodes) -> np.ndarray:
    """``e_0 .. e_k`` of the nodes by the usual one-node-at-a-time recurrence."""
    e = np.zeros(len(nodes) + 1, dtype=complex)
    e[0] = 1.0
    for z in nodes:
        e[1:] = e[1:] + z * e[:-1].copy()
    return e


def _gram_det(mat) -> mpmath.mpf:
    m = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in mat])
    g = m.H * m
    return mpmath.re(mpmath.det(g))


def check_volume_ratio(nodes) -> BoundReport:
    """Gram-determinant ratio against ``sqrt(sum |e_j|^2)`` and the ``(1+d)^k`` cap.

    ``lhs`` is the ratio, ``rhs`` the cap; ``instance['paths_agree']`` records the
    relative agreement of the two computations (required below 1e-8).
    """
    nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
    k = nodes.size
    if k >= 2:
        _require_distinct(nodes)
    with mpmath.workdps(50):
        top = _gram_det(vandermonde_matrix(k, nodes))
        bottom = _gram_det(vandermonde_matrix(k - 1, nodes))
        gram_path = float(mpmath.sqrt(top / bottom))
    sym_path = float(np.sqrt(np.sum(np.abs(elementary_symmetric(nodes)) ** 2)))
    rel = abs(gram_path - sym_path) / max(abs(sym_path), 1e-300)
    cap = (1 + float(np.abs(nodes).max())) ** k
    rep = BoundReport("volume_ratio", gram_path, cap, "<=",
                      instance={"nodes": nodes.tolist(), "symmetric_path": sym_path, "relative_gap": rel,
                                "paths_agree": rel < 1e-8})
    if not rep.instance["paths_agree"]:
        rep.lhs, rep.rhs, rep.relation = rel, 1e-8, "<"
    return rep


def eta(z, zhat) -> np.ndarray:
    """Component ``j`` is ``prod_l |z_j - zhat_l|``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zhat = np.atleast_1d(np.asarray(zhat, dtype=complex))
    return np.prod(np.abs(z[:, None] - zhat[None, :]), axis=1)


def check_eta_lower_bound(z, zhat) -> BoundReport:
    """``||eta_{k+1,k}||_inf >= (d_min / 2)^k``."""
    z = np.asarray(z, dtype=complex)
    zhat = np.atleast_1d(np.asarray(zhat, dtype=complex))
    k = zhat.size
    if z.size != k + 1:
        raise ValueError("need k+1 nodes against k estimates")
    gap = min_gap(z)
    if gap == 0:
        raise ValueError("z must be pairwise distinct")
    return BoundReport("eta_lower_bound", float(eta(z, zhat).max()), (gap / 2) ** k, ">=",
                       instance={"z": z.tolist(), "zhat": zhat.tolist()})


def matching_reorderings(z, zhat, radius) -> list:
    """All permutations ``p`` with ``|zhat[p[j]] - z[j]| < radius`` for every ``j``."""
    k = len(z)
    close = np.abs(np.asarray(z)[:, None] - np.asarray(zhat)[None, :]) < radius
    return [p for p in permutations(range(k)) if all(close[j, p[j]] for j in range(k))]


def check_eta_stability(z, zhat, eps) -> BoundReport:
    """Small ``eta_{k,k}`` forces a unique close matching with errors ``<= (2/d_min)^{k-1} eps``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zhat = np.atleast_1d(np.asarray(zhat, dtype=complex))
    k = z.size
    if zhat.size != k:
        raise ValueError("need equally many nodes and estimates")
    if k > 7:
        raise ValueError("exhaustive reordering limited to k <= 7")
    gap = min_gap(z) if k > 1 else math.inf
    e_inf = float(eta(z, zhat).max())
    if not e_inf < eps or (k > 1 and gap < 2 * eps ** (1.0 / k)):
        return _not_applicable("eta_stability", "hypotheses unmet", eta=e_inf, eps=eps)
    radius = gap / 2 if k > 1 else math.inf
    perms = matching_reorderings(z, zhat, radius)
    bound = (2 / gap) ** (k - 1) * eps if k > 1 else eps
    if len(perms) != 1:
        # no (or an ambiguous) matching contradicts the lemma
        return BoundReport("eta_stability", float(len(perms)), 1.0, ">=" if not perms else "<=",
                           instance={"reorderings": len(perms), "z": z.tolist(), "zhat": zhat.tolist(),
                                     "unique": False} if perms else {"reorderings": 0})
    p = perms[0]
    err = float(max(abs(zhat[p[j]] - z[j]) for j in range(k)))
    return BoundReport("eta_stability", err, bound, "<=",
                       instance={"reordering": list(p), "unique": True, "eps": eps})


def check_projection_lower_bound(zhat, x, dhat: float | None = None) -> BoundReport:
    """Distance from ``phi_k(x)`` to ``span{phi_k(zhat_j)}`` is at least ``|prod(x - zhat_j)| / (1+dhat)^k``."""
    zhat = np.atleast_1d(np.asarray(zhat, dtype=complex))
    k = zhat.size
    if min_gap(zhat) == 0:
        raise ValueError("zhat must be pairwise distinct")
    if dhat is None:
        dhat = float(np.abs(zhat).max())
    a = vandermonde_matrix(k, zhat)
    if np.linalg.cond(a) > 1e12:
        return _not_applicable("projection_lower_bound", "ill-conditioned basis")
    target = phi(k, x)
    coef, *_ = np.linalg.lstsq(a, target, rcond=None)
    dist = float(np.linalg.norm(a @ coef - target))
    bound = float(np.abs(np.prod(x - zhat))) / (1 + dhat) ** k
    return BoundReport("projection_lower_bound", dist, bound, ">=", instance={"dhat": dhat})


def disk_points(radius: float, step: float) -> np.ndarray:
    half = int(np.floor(radius / step + 1e-9))
    ax = np.arange(-half, half + 1) * step
    pts = (ax[None, :] + 1j * ax[:, None]).ravel()
    return pts[np.abs(pts) <= radius + 1e-12]


def _residual(nodes, target, s):
    a = vandermonde_matrix(s, nodes)
    coef, *_ = np.linalg.lstsq(a, target, rcond=None)
    return float(np.linalg.norm(a @ coef - target))


def _polish(start_nodes, target, s, radius):
    start_nodes = np.atleast_1d(np.asarray(start_nodes, dtype=complex))
    q = start_nodes.size

    def unpack(p):
        nodes = p[:q] + 1j * p[q:]
        mod = np.abs(nodes)
        scale = np.where(mod > radius, radius / np.maximum(mod, 1e-300), 1.0)
        return nodes * scale

    x0 = np.concatenate([start_nodes.real, start_nodes.imag])
    res = minimize(lambda p: _residual(unpack(p), target, s), x0, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 4000})
    return _residual(unpack(res.x), target, s)


def nonlinear_approx_bound(k, m_min, gap, d, dhat) -> float:
    return m_min * gap ** (2 * k) / (2 ** k * (1 + d) ** k * (1 + dhat) ** k)


def check_nonlinear_approx_lower_bound(z, amps, d: float, dhat: float, step: float = 0.02,
                                       polish: bool = True) -> BoundReport:
    """Brute-force ``min ||Ahat ahat - A a||`` over at most ``k`` nodes in the ``dhat`` disk.

    The search covers every single node and unordered node pair of the grid
    (so ``k <= 2``), solves the amplitudes exactly, then polishes the best
    candidate locally. The computed value can only overestimate the true
    minimum; a failure is therefore a real counterexample candidate.
    """
    z = np.asarray(z, dtype=complex)
    amps = np.asarray(amps, dtype=complex)
    k = z.size - 1
    if k < 1 or k > 2:
        raise ValueError("brute-force oracle supports k in {1, 2}")
    if np.abs(z).max() > d + 1e-12:
        raise ValueError("nodes must satisfy |z| <= d")
    s = 2 * k
    target = vandermonde_matrix(s, z) @ amps
    pts = disk_points(dhat, step)
    phis = pts[:, None] ** np.arange(s + 1)[None, :]
    if k == 1:
        c = phis.conj() @ target
        g = np.einsum("ij,ij->i", phis.conj(), phis).real
        r2 = np.vdot(target, target).real - np.abs(c) ** 2 / g
        i = int(np.argmin(r2))
        best, best_nodes = float(np.sqrt(max(r2[i], 0.0))), pts[[i]]
    else:
        best, a, b = _accel.pair_residual_min(phis, target)
        best_nodes = pts[[a]] if a == b else pts[[a, b]]
    grid_best = best
    if polish and best_nodes.size:
        best = min(best, _polish(best_nodes, target, s, dhat))
    bound = nonlinear_approx_bound(k, float(np.abs(amps).min()), min_gap(z), d, dhat)
    return BoundReport("nonlinear_approx_lower_bound", best, bound, ">=",
                       instance={"grid_min": grid_best, "k": k, "d": d, "dhat": dhat, "points": pts.size})


def check_approx_stability(z, zhat, amps, amps_hat, sigma: float, d: float | None = None) -> BoundReport:
    """A ``sigma``-close fit with ``k`` nodes pins ``||eta_{k,k}||_inf`` below ``(1+d)^{2k-1} sigma / (d_min^{k-1} m_min)``."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    zhat = np.atleast_1d(np.asarray(zhat, dtype=complex))
    k = z.size
    if d is None:
        d = float(max(np.abs(z).max(), np.abs(zhat).max()))
    s = 2 * k - 1
    resid = float(np.linalg.norm(vandermonde_matrix(s, zhat) @ np.asarray(amps_hat, dtype=complex)
                                 - vandermonde_matrix(s, z) @ np.asarray(amps, dtype=complex)))
    if not resid < sigma:
        return _not_applicable("approx_stability", "residual not below sigma", residual=resid)
    if max(np.abs(z).max(), np.abs(zhat).max()) > d + 1e-12:
        return _not_applicable("approx_stability", "nodes outside the d-disk")
    if k > 1 and min_gap(zhat) == 0:
        return _not_applicable("approx_stability", "coincident estimates")
    gap = min_gap(z) if k > 1 else 1.0
    m_min = float(np.abs(amps).min())
    bound = (1 + d) ** (2 * k - 1) / gap ** (k - 1) * sigma / m_min
    return BoundReport("approx_stability", float(eta(z, zhat).max()), bound, "<",
                       instance={"residual": resid, "sigma": sigma, "d": d})


def _pair_sum(theta):
    return np.exp(1j * theta[0]) + np.exp(1j * theta[1])


def check_distance_preservation(theta1, theta2, branch: str = "lemma") -> BoundReport:
    """Separation of ``e^{i t1} + e^{i t2}`` against the l1 separation of the angle pairs.

    ``branch='lemma'``: angles in ``[0, 2pi/3]^2`` with second minus first in
    ``[pi/3, 2pi/3]``; bound ``3/(2pi) * l1``. ``branch='theorem'``: points in
    ``[0, pi/2] x [pi/2, pi]``; bound ``2/pi^2 * l1^2``.
    """
    t1 = np.asarray(theta1, dtype=float)
    t2 = np.asarray(theta2, dtype=float)
    tol = 1e-12
    if branch == "lemma":
        ok = all(np.all(t >= -tol) and np.all(t <= 2 * np.pi / 3 + tol)
                 and np.pi / 3 - tol <= t[1] - t[0] <= 2 * np.pi / 3 + tol for t in (t1, t2))
    elif branch == "theorem":
        ok = all(-tol <= t[0] <= np.pi / 2 + tol and np.pi / 2 - tol <= t[1] <= np.pi + tol for t in (t1, t2))
    else:
        raise ValueError("branch must be 'lemma' or 'theorem'")
    if not ok:
        return _not_applicable(f"distance_preservation_{branch}", "angles outside the admissible set")
    l1 = float(np.abs(t1 - t2).sum())
    lhs = float(abs(_pair_sum(t1) - _pair_sum(t2)))
    rhs = 3 / (2 * np.pi) * l1 if branch == "lemma" else 2 / np.pi ** 2 * l1 ** 2
    return BoundReport(f"distance_preservation_{branch}", lhs, rhs, ">=")


def location_error_constant(n: int) -> float:
    """Constant in the stable-recovery error bound ``C(n)/Omega * SRF^{2n-2} * sigma/m_min``."""
    return ((1 + math.sqrt(3)) ** (2 * n - 1) * 2 ** (5 * n - 1) * (2 * n - 1) ** (2 * n - 1) * math.pi
            / 3 ** (2 * n - 0.5))


def number_separation_threshold(n, omega, sigma, m_min) -> float:
    return 16.6 * math.pi * (n - 1) / omega * (sigma / m_min) ** (1.0 / (2 * n - 2))


def location_separation_threshold(n, omega, sigma, m_min) -> float:
    return 15.3 * math.pi * (n - 0.5) / omega * (sigma / m_min) ** (1.0 / (2 * n - 1))


def detection_separation_threshold(n, s, omega, sigma, m_min) -> float:
    """Separation above which the fixed-s detector provably returns ``n``."""
    return (4 * (1 + math.sqrt(3)) * math.pi * s / (3 * omega)
            * (2 * n * 4.0 ** (s + 1) / 3 * sigma / m_min) ** (1.0 / (2 * n - 2)))


def location_error_bound(n, omega, d_min, sigma, m_min) -> float:
    srf = math.pi / (d_min * omega)
    return location_error_constant(n) / omega * srf ** (2 * n - 2) * sigma / m_min


def resolution_limit_thresholds(n: int, omega: int, sigma: float, m_min: float) -> BoundReport:
    """Both separation thresholds and the error constant; ``lhs``/``rhs`` are the number/location thresholds."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if sigma > m_min:
        raise ValueError("need sigma <= m_min")
    num = number_separation_threshold(n, omega, sigma, m_min)
    loc = location_separation_threshold(n, omega, sigma, m_min)
    return BoundReport("resolution_limit_thresholds", num, loc, "<=", applicable=False,
                       instance={"number_threshold": num, "location_threshold": loc,
                                 "error_constant": location_error_constant(n)})


# ---------------------------------------------------------------- batch suites

SUITES = ("geometry", "vandermonde", "approximation")

# default batch size per check
BATCH = {
    "distance_preservation_lemma": 100_000,
    "distance_preservation_theorem": 100_000,
    "inverse_norm": 500,
    "singular_chain": 500,
    "volume_ratio": 500,
    "eta_lower_bound": 10_000,
    "eta_stability": 1_000,
    "projection_lower_bound": 10_000,
    "nonlinear_approx_lower_bound": 100,
    "approx_stability": 1_000,
}

SUITE_CHECKS = {
    "geometry": ("distance_preservation_lemma", "distance_preservation_theorem"),
    "vandermonde": ("inverse_norm", "singular_chain", "volume_ratio", "eta_lower_bound", "eta_stability"),
    "approximation": ("projection_lower_bound", "nonlinear_approx_lower_bound", "approx_stability"),
}


def _disk(rng, k, radius):
    r = radius * np.sqrt(rng.uniform(0, 1, k))
    return r * np.exp(1j * rng.uniform(0, 2 * np.pi, k))


def _distinct_disk(rng, k, radius, min_sep=1e-6):
    while True:
        z = _disk(rng, k, radius)
        if min_gap(z) >= min_sep:
            return z


def _amps(rng, k):
    return rng.uniform(1, 2, k) * np.exp(1j * rng.uniform(0, 2 * np.pi, k))


def _gen_lemma_angles(rng):
    while True:
        first = rng.uniform(0, np.pi / 3)
        second = first + rng.uniform(np.pi / 3, 2 * np.pi / 3)
        if second <= 2 * np.pi / 3:
            return np.array([first, second])


def _draw(name, rng):
    """One randomized admissible instance of the named check."""
    if name == "distance_preservation_lemma":
        return check_distance_preservation(_gen_lemma_angles(rng), _gen_lemma_angles(rng), "lemma")
    if name == "distance_preservation_theorem":
        lo, hi = np.array([0, np.pi / 2]), np.array([np.pi / 2, np.pi])
        return check_distance_preservation(rng.uniform(lo, hi), rng.uniform(lo, hi), "theorem")
    if name == "inverse_norm":
        return check_inverse_norm(_distinct_disk(rng, int(rng.integers(2, 7)), 2.0))
    if name == "singular_chain":
        k = int(rng.integers(2, 6))
        return check_singular_chain(_distinct_disk(rng, k, 2.0), int(rng.integers(k - 1, 11)))
    if name == "volume_ratio":
        return check_volume_ratio(_distinct_disk(rng, int(rng.integers(1, 7)), 2.0))
    if name == "eta_lower_bound":
        k = int(rng.integers(1, 6))
        z = _distinct_disk(rng, k + 1, 2.0)
        # half the time place estimates near the truth, where the bound is tight
        zhat = z[rng.permutation(k + 1)[:k]] + _disk(rng, k, 0.5) if rng.uniform() < 0.5 else _disk(rng, k, 2.0)
        return check_eta_lower_bound(z, zhat)
    if name == "eta_stability":
        # redraw until the hypotheses hold so every instance is admissible
        while True:
            k = int(rng.integers(1, 6))
            z = _distinct_disk(rng, k, 2.0, 0.05)
            gap = min_gap(z) if k > 1 else 1.0
            zhat = (z + _disk(rng, k, gap * 10 ** rng.uniform(-6, -0.5)))[rng.permutation(k)]
            eps = float(eta(z, zhat).max()) * (1 + rng.uniform(1e-6, 1.0)) + 1e-300
            rep = check_eta_stability(z, zhat, eps)
            if rep.applicable:
                return rep
    if name == "projection_lower_bound":
        k = int(rng.integers(1, 5))
        zhat = _distinct_disk(rng, k, math.sqrt(3))
        x = _disk(rng, 1, math.sqrt(3))[0] if rng.uniform() < 0.7 else zhat[0] + _disk(rng, 1, 0.1)[0]
        dhat = math.sqrt(3) if rng.uniform() < 0.5 else None
        return check_projection_lower_bound(zhat, x, dhat)
    if name == "nonlinear_approx_lower_bound":
        k = 2 if rng.uniform() < 0.8 else 1
        d = rng.uniform(0.5, 1.0)
        z = _distinct_disk(rng, k + 1, d, 0.05)
        dhat = rng.uniform(0.5, 1.2)
        return check_nonlinear_approx_lower_bound(z, _amps(rng, k + 1), d, dhat)
    if name == "approx_stability":
        k = int(rng.integers(1, 5))
        z = _distinct_disk(rng, k, 1.0, 0.05)
        a = _amps(rng, k)
        scale = 10 ** rng.uniform(-7, -1)
        zhat = (z + _disk(rng, k, scale))[rng.permutation(k)]
        ahat = (a + _disk(rng, k, scale))
        s = 2 * k - 1
        resid = np.linalg.norm(vandermonde_matrix(s, zhat) @ ahat - vandermonde_matrix(s, z) @ a)
        return check_approx_stability(z, zhat, a, ahat, float(resid) * (1 + rng.uniform(1e-6, 1.0)) + 1e-300)
    raise KeyError(name)


def run_check_batch(name: str, instances: int | None = None, seed: int = 0) -> list:
    """``instances`` randomized reports of one check (default: its standard batch size)."""
    count = BATCH[name] if instances is None else instances
    rng = np.random.default_rng(np.random.SeedSequence([seed, sorted(BATCH).index(name)]))
    return [_draw(name, rng) for _ in range(count)]


def run_suite(suite: str = "all", instances: int | None = None, seed: int = 0) -> list:
    """Reports for every check of the suite; ``instances`` caps each batch."""
    if suite == "all":
        names = [n for s in SUITES for n in SUITE_CHECKS[s]]
    elif suite in SUITE_CHECKS:
        names = list(SUITE_CHECKS[suite])
    else:
        raise ValueError(f"unknown suite {suite!r}")
    out = []
    for name in names:
        out.extend(run_check_batch(name, instances, seed))
    return out


def summarize(reports) -> dict:
    """Per-check counts of evaluated, not-applicable and violated reports."""
    table = {}
    for r in reports:
        row = table.setdefault(r.name, {"evaluated": 0, "not_applicable": 0, "violations": 0})
        if not r.applicable:
            row["not_applicable"] += 1
        else:
            row["evaluated"] += 1
            row["violations"] += 0 if r.satisfied else 1
    return table
