"""Two-dimensional super-resolution by coordinate combination.

Number detection from combined Hankel spectra, MUSIC-based location
recovery, numerical checks of the supporting inequalities and a
phase-transition harness.
"""
from .combine import CombinedSequence, combine_minus, combine_plus
from .detect import DetectionParams, detect_count_fixed_s, detect_count_sweep
from .model import FourierGrid, NoiseSpec, SourceConfiguration, add_noise, forward_measure, translate
from .recover import RecoveryError, RecoveryResult, recover_sources
from .spectral import SpectralDecomposition, decompose, hankel
from .theory import BoundReport

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CombinedSequence",
    "DetectionParams",
    "FourierGrid",
    "NoiseSpec",
    "RecoveryError",
    "RecoveryResult",
    "SourceConfiguration",
    "SpectralDecomposition",
    "add_noise",
    "combine_minus",
    "combine_plus",
    "decompose",
    "detect_count_fixed_s",
    "detect_count_sweep",
    "forward_measure",
    "hankel",
    "recover_sources",
    "translate",
]
