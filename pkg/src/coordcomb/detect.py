"""Model-order detection by singular-value thresholding of combined Hankel matrices."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .combine import combine_plus, default_stride
from .model import FourierGrid, translate
from .spectral import decompose, hankel

DEFAULT_TRANSLATION = (0.0, np.pi / 2)


@dataclass(frozen=True)
class DetectionParams:
    """Inputs shared by the fixed-s and sweeping detectors.

    ``threshold_scale`` multiplies the threshold ``4^{s+1} sigma / 3``; 1.0
    keeps the guaranteed value. ``zero_noise_floor`` is a relative rank
    tolerance used only when ``noise_level == 0``. ``patience`` is the number
    of non-improving sweep steps tolerated before stopping.
    """

    translation: tuple = DEFAULT_TRANSLATION
    noise_level: float = 0.0
    zero_noise_floor: float = 1e-10
    threshold_scale: float = 1.0
    patience: int = 2

    def __post_init__(self):
        if self.zero_noise_floor <= 0:
            raise ValueError("zero_noise_floor must be > 0")
        if self.noise_level < 0:
            raise ValueError("noise_level must be >= 0")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        object.__setattr__(self, "translation", tuple(float(x) for x in self.translation))


@dataclass
class FixedSResult:
    s: int
    stride: int
    threshold: float
    singular_values: np.ndarray
    count: int


@dataclass
class SweepResult:
    count: int
    steps: list = field(default_factory=list)


def theory_translation(cutoff: int, s: int) -> tuple:
    """Translation ``(0, s pi / cutoff)`` used by the detection guarantee."""
    return (0.0, s * np.pi / cutoff)


def threshold(s: int, sigma: float, scale: float = 1.0) -> float:
    return scale * 4.0 ** (s + 1) * sigma / 3.0


def count_above(singular_values: np.ndarray, thresh: float, sigma: float, floor: float) -> int:
    sv = np.asarray(singular_values)
    if sigma == 0:
        if sv[0] == 0:
            return 0
        return int(np.count_nonzero(sv >= floor * sv[0]))
    return int(np.count_nonzero(sv >= thresh))


def fixed_s_analysis(grid: FourierGrid, params: DetectionParams, s: int) -> FixedSResult:
    if s < 1:
        raise ValueError("s must be >= 1")
    r = default_stride(grid.cutoff, s)
    if r < 1:
        raise ValueError(f"stride underflow: 2s = {2 * s} exceeds cutoff {grid.cutoff}")
    x = translate(grid, params.translation)
    seq = combine_plus(x, s, r)
    sv = decompose(hankel(seq)).singular_values
    t = threshold(s, params.noise_level, params.threshold_scale)
    n = count_above(sv, t, params.noise_level, params.zero_noise_floor)
    return FixedSResult(s, r, t, sv, n)


def detect_count_fixed_s(grid: FourierGrid, params: DetectionParams, s: int) -> int:
    """Number of singular values of ``H(s)`` at or above the noise threshold."""
    return fixed_s_analysis(grid, params, s).count


def sweep_analysis(grid: FourierGrid, params: DetectionParams) -> SweepResult:
    s_last = (grid.cutoff - 1) // 2
    if s_last < 2:
        raise ValueError("sweeping detection needs cutoff >= 5")
    n_max = 0
    s_best = 2
    steps = []
    for s in range(2, s_last + 1):
        step = fixed_s_analysis(grid, params, s)
        steps.append(step)
        if step.count > n_max:
            n_max = step.count
            s_best = s
        if s >= s_best + params.patience:
            break
    return SweepResult(n_max, steps)


def detect_count_sweep(grid: FourierGrid, params: DetectionParams) -> int:
    """Largest fixed-s count over ``s = 2 .. floor((cutoff-1)/2)`` with early stopping."""
    return sweep_analysis(grid, params).count
