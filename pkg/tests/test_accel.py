import os
import subprocess
import sys

import numpy as np
import pytest

from coordcomb import _accel
from coordcomb.theory import disk_points


def noise_space(rng, s=5, m=3):
    a = rng.normal(size=(s + 1, m)) + 1j * rng.normal(size=(s + 1, m))
    q, _ = np.linalg.qr(a)
    return q


@pytest.mark.skipif(not _accel.NUMBA_ENABLED, reason="numba path disabled")
def test_music_paths_agree():
    rng = np.random.default_rng(0)
    u2 = noise_space(rng)
    pts = rng.uniform(-2, 2, 2000) + 1j * rng.uniform(-2, 2, 2000)
    a = _accel.music_values(pts, u2, use_numba=True)
    b = _accel.music_values(pts, u2, use_numba=False)
    np.testing.assert_allclose(a, b, rtol=1e-10)


def test_music_sentinel_both_paths():
    u2 = np.zeros((4, 1), dtype=complex)
    for flag in (False, True) if _accel.NUMBA_ENABLED else (False,):
        assert np.all(_accel.music_values(np.array([0.3 + 0j]), u2, use_numba=flag) == _accel.J_SENTINEL)


@pytest.mark.skipif(not _accel.NUMBA_ENABLED, reason="numba path disabled")
def test_pair_residual_paths_agree():
    rng = np.random.default_rng(1)
    pts = disk_points(1.0, 0.2)
    phis = pts[:, None] ** np.arange(5)[None, :]
    target = rng.normal(size=5) + 1j * rng.normal(size=5)
    a = _accel.pair_residual_min(phis, target, use_numba=True)
    b = _accel.pair_residual_min(phis, target, use_numba=False)
    assert a[0] == pytest.approx(b[0], rel=1e-9, abs=1e-12)


def test_pair_residual_matches_lstsq():
    rng = np.random.default_rng(2)
    pts = disk_points(0.6, 0.3)
    phis = pts[:, None] ** np.arange(5)[None, :]
    target = rng.normal(size=5) + 1j * rng.normal(size=5)
    best, i, j = _accel.pair_residual_min(phis, target, use_numba=False)
    brute = np.inf
    for p in range(len(pts)):
        for q in range(p, len(pts)):
            a = phis[[p, q]].T if p != q else phis[[p]].T
            coef, *_ = np.linalg.lstsq(a, target, rcond=None)
            brute = min(brute, np.linalg.norm(a @ coef - target))
    assert best == pytest.approx(brute, rel=1e-9)


def test_env_flag_disables_numba():
    env = dict(os.environ, COORDCOMB_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from coordcomb import _accel; print(_accel.NUMBA_ENABLED)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
