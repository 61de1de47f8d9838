"""Source configurations, the Fourier forward model and bounded noise.

Measurements live on the integer lattice ``{0, ..., cutoff}^2`` and are
stored as a ``(cutoff + 1, cutoff + 1)`` complex array indexed by
``(omega_1, omega_2)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

DEFAULT_REGION = ((0.0, np.pi / 2), (0.0, np.pi / 2))


@dataclass(frozen=True)
class SourceConfiguration:
    """``n`` point sources with 2-D locations (radians) and complex amplitudes.

    Args:
        locations: ``(n, 2)`` real array.
        amplitudes: ``(n,)`` complex array with nonzero entries.
        region: ``((lo1, hi1), (lo2, hi2))`` box containing every location.
    """

    locations: np.ndarray
    amplitudes: np.ndarray
    region: tuple = DEFAULT_REGION

    def __post_init__(self):
        locs = np.atleast_2d(np.asarray(self.locations, dtype=float))
        amps = np.atleast_1d(np.asarray(self.amplitudes, dtype=complex))
        if locs.ndim != 2 or locs.shape[1] != 2:
            raise ValueError("locations must have shape (n, 2)")
        if amps.shape != (locs.shape[0],):
            raise ValueError("need exactly one amplitude per location")
        if locs.shape[0] == 0:
            raise ValueError("a configuration needs at least one source")
        if np.any(np.abs(amps) == 0):
            raise ValueError("amplitudes must have nonzero modulus")
        region = tuple(tuple(float(v) for v in box) for box in self.region)
        lo = np.array([region[0][0], region[1][0]])
        hi = np.array([region[0][1], region[1][1]])
        if np.any(locs < lo - 1e-12) or np.any(locs > hi + 1e-12):
            raise ValueError("all locations must lie inside the region")
        if locs.shape[0] > 1 and pairwise_l1(locs).min() == 0:
            raise ValueError("locations must be pairwise distinct")
        locs.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "region", region)

    @property
    def n(self) -> int:
        return self.locations.shape[0]

    @property
    def m_min(self) -> float:
        return float(np.abs(self.amplitudes).min())

    @property
    def d_min(self) -> float:
        """Minimum pairwise l1 distance (``inf`` for a single source)."""
        if self.n < 2:
            return float("inf")
        return float(pairwise_l1(self.locations).min())

    def shifted(self, v) -> "SourceConfiguration":
        v = np.asarray(v, dtype=float)
        region = tuple((box[0] + v[i], box[1] + v[i]) for i, box in enumerate(self.region))
        return SourceConfiguration(self.locations + v, self.amplitudes, region)

    def to_dict(self) -> dict:
        return {
            "locations": self.locations.tolist(),
            "amplitudes": [_complex_to_json(a) for a in self.amplitudes],
            "region": [list(box) for box in self.region],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SourceConfiguration":
        return cls(
            np.asarray(data["locations"], dtype=float),
            np.array([_complex_from_json(a) for a in data["amplitudes"]]),
            tuple(tuple(box) for box in data.get("region", DEFAULT_REGION)),
        )


@dataclass(frozen=True)
class FourierGrid:
    """Complex samples on ``{0..cutoff}^2`` with an attached noise level."""

    cutoff: int
    values: np.ndarray
    noise_level: float = 0.0

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 0:
            raise ValueError("cutoff must be a nonnegative integer")
        vals = np.array(self.values, dtype=complex)
        side = int(self.cutoff) + 1
        if vals.size != side * side:
            raise ValueError(f"expected {side * side} values, got {vals.size}")
        vals = vals.reshape(side, side)
        if self.noise_level < 0:
            raise ValueError("noise_level must be >= 0")
        vals.setflags(write=False)
        object.__setattr__(self, "cutoff", int(self.cutoff))
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "noise_level", float(self.noise_level))

    def __getitem__(self, omega):
        return self.values[omega]

    def to_dict(self) -> dict:
        return {
            "cutoff": self.cutoff,
            "noise_level": self.noise_level,
            "values": [_complex_to_json(v) for v in self.values.ravel()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FourierGrid":
        vals = np.array([_complex_from_json(v) for v in data["values"]])
        return cls(int(data["cutoff"]), vals, float(data.get("noise_level", 0.0)))


@dataclass(frozen=True)
class NoiseSpec:
    level: float
    seed: int = 0

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("noise level must be >= 0")


def _complex_to_json(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _complex_from_json(obj) -> complex:
    if isinstance(obj, dict):
        return complex(obj["re"], obj["im"])
    return complex(obj)


def pairwise_l1(locations: np.ndarray) -> np.ndarray:
    """Flat array of l1 distances over all unordered pairs of rows."""
    locs = np.asarray(locations, dtype=float)
    i, j = np.triu_indices(locs.shape[0], k=1)
    return np.abs(locs[i] - locs[j]).sum(axis=1)


def forward_measure(config: SourceConfiguration, cutoff: int) -> FourierGrid:
    """Noiseless samples ``sum_j a_j exp(i y_j . omega)`` on the lattice."""
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    w = np.arange(cutoff + 1)
    e1 = np.exp(1j * np.outer(config.locations[:, 0], w))  # (n, W)
    e2 = np.exp(1j * np.outer(config.locations[:, 1], w))
    vals = np.einsum("j,ja,jb->ab", config.amplitudes, e1, e2)
    return FourierGrid(cutoff, vals, 0.0)


def noise_field(shape, spec: NoiseSpec) -> np.ndarray:
    """Complex perturbations with modulus uniform in [0, level) and uniform phase."""
    rng = np.random.default_rng(spec.seed)
    mod = rng.random(shape)
    phase = rng.uniform(0.0, 2 * np.pi, shape)
    return spec.level * mod * np.exp(1j * phase)


def add_noise(grid: FourierGrid, spec: NoiseSpec) -> FourierGrid:
    if spec.level == 0:
        return FourierGrid(grid.cutoff, grid.values, 0.0)
    w = noise_field(grid.values.shape, spec)
    return FourierGrid(grid.cutoff, grid.values + w, spec.level)


def translate(grid: FourierGrid, v) -> FourierGrid:
    """Multiply each sample by ``exp(i v . omega)``, shifting every source by ``v``."""
    v = np.asarray(v, dtype=float)
    w = np.arange(grid.cutoff + 1)
    phase = np.exp(1j * (v[0] * w[:, None] + v[1] * w[None, :]))
    return FourierGrid(grid.cutoff, grid.values * phase, grid.noise_level)


def angles_to_location(azimuth: float, elevation: float) -> np.ndarray:
    """Direction components ``(sin(el) cos(az), sin(el) sin(az))``."""
    return np.array([np.sin(elevation) * np.cos(azimuth), np.sin(elevation) * np.sin(azimuth)])


def save_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj.to_dict(), indent=2))


def load_grid(path) -> FourierGrid:
    return FourierGrid.from_dict(json.loads(Path(path).read_text()))


def load_config(path) -> SourceConfiguration:
    return SourceConfiguration.from_dict(json.loads(Path(path).read_text()))
