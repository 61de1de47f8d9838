"""Compare the numba and numpy paths of the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the MUSIC image over the default test disk (the inner loop of every
location trial) and the pair-residual search used by the nonlinear
approximation oracle. Reports the median wall time per call and the max
absolute difference between paths.
"""
import argparse
import time

import numpy as np

from coordcomb import _accel
from coordcomb.music import TestGrid
from coordcomb.theory import disk_points


def _median_time(fn, repeat):
    fn()  # warm-up; includes JIT compilation on the numba path
    ts = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        ts.append(time.perf_counter() - t0)
    return float(np.median(ts))


def bench_music(repeat, s=5, n=3):
    rng = np.random.default_rng(0)
    q, _ = np.linalg.qr(rng.normal(size=(s + 1, s + 1)) + 1j * rng.normal(size=(s + 1, s + 1)))
    u2 = q[:, n:]
    pts = TestGrid().points
    out = {}
    for label, flag in (("numba", True), ("numpy", False)):
        out[label] = _median_time(lambda: _accel.music_values(pts, u2, use_numba=flag), repeat)
    diff = np.abs(_accel.music_values(pts, u2, use_numba=True) - _accel.music_values(pts, u2, use_numba=False))
    rel = float((diff / _accel.music_values(pts, u2, use_numba=False)).max())
    return f"music_values ({pts.size} points, s={s})", out, rel


def bench_pairs(repeat, radius=0.6, step=0.02):
    rng = np.random.default_rng(1)
    pts = disk_points(radius, step)
    phis = pts[:, None] ** np.arange(5)[None, :]
    target = rng.normal(size=5) + 1j * rng.normal(size=5)
    out = {}
    for label, flag in (("numba", True), ("numpy", False)):
        out[label] = _median_time(lambda: _accel.pair_residual_min(phis, target, use_numba=flag), repeat)
    a = _accel.pair_residual_min(phis, target, use_numba=True)[0]
    b = _accel.pair_residual_min(phis, target, use_numba=False)[0]
    return f"pair_residual_min ({pts.size} nodes)", out, abs(a - b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.NUMBA_ENABLED:
        print("numba disabled or missing: both columns time the numpy path")
    print(f"{'kernel':<42} {'numba [s]':>10} {'numpy [s]':>10} {'speedup':>8} {'max diff':>10}")
    for name, t, diff in (bench_music(args.repeat), bench_pairs(args.repeat)):
        print(f"{name:<42} {t['numba']:>10.4f} {t['numpy']:>10.4f} {t['numpy'] / t['numba']:>8.1f} {diff:>10.2e}")


if __name__ == "__main__":
    main()
