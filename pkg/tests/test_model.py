import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordcomb.model import (
    FourierGrid,
    NoiseSpec,
    SourceConfiguration,
    add_noise,
    angles_to_location,
    forward_measure,
    load_config,
    load_grid,
    save_json,
    translate,
)

REGION = ((0.0, np.pi / 2), (0.0, np.pi / 2))
FULL = ((-4.0, 4.0), (-4.0, 4.0))


def random_config(rng, n=3, region=REGION):
    lo = [region[0][0], region[1][0]]
    hi = [region[0][1], region[1][1]]
    locs = rng.uniform(lo, hi, (n, 2))
    amps = rng.uniform(1, 2, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    return SourceConfiguration(locs, amps, region)


def test_single_source_at_origin_gives_ones():
    g = forward_measure(SourceConfiguration([[0, 0]], [1]), 2)
    assert g.values.shape == (3, 3)
    np.testing.assert_allclose(g.values, 1)
    assert g.noise_level == 0


def test_quarter_turn_source():
    g = forward_measure(SourceConfiguration([[np.pi / 2, 0]], [1]), 1)
    np.testing.assert_allclose([g[0, 0], g[1, 0], g[0, 1], g[1, 1]], [1, 1j, 1, 1j], atol=1e-15)


def test_opposite_sources_cancel():
    cfg = SourceConfiguration([[0, 0], [np.pi, np.pi]], [1, 1], FULL)
    g = forward_measure(cfg, 1)
    assert abs(g[1, 0]) < 1e-15 and abs(g[0, 1]) < 1e-15
    assert g[0, 0] == pytest.approx(2)


def test_measurement_matches_direct_sum():
    cfg = random_config(np.random.default_rng(0), 4)
    g = forward_measure(cfg, 7)
    w = (5, 2)
    direct = sum(a * np.exp(1j * (y @ w)) for y, a in zip(cfg.locations, cfg.amplitudes))
    assert g[w] == pytest.approx(direct, abs=1e-13)


@pytest.mark.parametrize("bad", [
    dict(locations=[[0.1, 0.1]], amplitudes=[0]),
    dict(locations=[[2.0, 0.1]], amplitudes=[1]),
    dict(locations=[[0.1, 0.1], [0.1, 0.1]], amplitudes=[1, 1]),
    dict(locations=[[0.1, 0.1]], amplitudes=[1, 2]),
])
def test_configuration_rejects_invalid(bad):
    with pytest.raises(ValueError):
        SourceConfiguration(**bad)


def test_derived_quantities():
    cfg = SourceConfiguration([[0.1, 0.2], [0.5, 0.2], [0.1, 1.0]], [2, -1j, 3])
    assert cfg.m_min == pytest.approx(1.0)
    assert cfg.d_min == pytest.approx(0.4)


def test_zero_noise_is_identity():
    g = forward_measure(random_config(np.random.default_rng(1)), 4)
    out = add_noise(g, NoiseSpec(0.0, 7))
    np.testing.assert_array_equal(out.values, g.values)


def test_noise_is_seed_deterministic():
    g = forward_measure(random_config(np.random.default_rng(2)), 4)
    a = add_noise(g, NoiseSpec(0.3, 11))
    b = add_noise(g, NoiseSpec(0.3, 11))
    c = add_noise(g, NoiseSpec(0.3, 12))
    np.testing.assert_array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)
    assert a.noise_level == 0.3


def test_noise_strictly_bounded():
    g = FourierGrid(10, np.zeros(121))
    for seed in range(1000):
        w = add_noise(g, NoiseSpec(0.1, seed)).values
        assert np.abs(w).max() < 0.1


def test_negative_noise_rejected():
    with pytest.raises(ValueError):
        NoiseSpec(-1.0)


def test_translate_examples():
    g = FourierGrid(1, np.ones(4))
    assert translate(g, (0, 0)).values.tolist() == g.values.tolist()
    assert translate(g, (0, np.pi / 2))[0, 1] == pytest.approx(1j)


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 2**32 - 1))
def test_translate_properties(v1, v2, seed):
    rng = np.random.default_rng(seed)
    cfg = random_config(rng, 3)
    g = forward_measure(cfg, 6)
    t = translate(g, (v1, v2))
    np.testing.assert_allclose(np.abs(t.values), np.abs(g.values), rtol=1e-12)
    np.testing.assert_allclose(translate(t, (-v1, -v2)).values, g.values, atol=1e-12)
    shifted = cfg.shifted((v1, v2))
    np.testing.assert_allclose(forward_measure(shifted, 6).values, t.values, atol=1e-11)


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), st.integers(0, 2**32 - 1))
def test_measurement_linear_in_amplitudes(c, seed):
    cfg = random_config(np.random.default_rng(seed), 3)
    scaled = SourceConfiguration(cfg.locations, cfg.amplitudes * c if c != 0 else cfg.amplitudes, cfg.region)
    c = c if c != 0 else 1
    np.testing.assert_allclose(forward_measure(scaled, 5).values, c * forward_measure(cfg, 5).values,
                               atol=1e-12 * max(1, abs(c)))


@pytest.mark.parametrize("theta,phi,expect", [
    (0, np.pi / 2, (1, 0)),
    (np.pi / 2, np.pi / 2, (0, 1)),
    (1.234, 0, (0, 0)),
])
def test_angles_to_location(theta, phi, expect):
    np.testing.assert_allclose(angles_to_location(theta, phi), expect, atol=1e-15)


def test_json_round_trip(tmp_path):
    cfg = random_config(np.random.default_rng(3))
    g = add_noise(forward_measure(cfg, 4), NoiseSpec(0.01, 5))
    save_json(cfg, tmp_path / "c.json")
    save_json(g, tmp_path / "g.json")
    cfg2 = load_config(tmp_path / "c.json")
    g2 = load_grid(tmp_path / "g.json")
    np.testing.assert_array_equal(cfg2.locations, cfg.locations)
    np.testing.assert_array_equal(cfg2.amplitudes, cfg.amplitudes)
    np.testing.assert_array_equal(g2.values, g.values)
    assert g2.noise_level == g.noise_level
    raw = json.loads((tmp_path / "g.json").read_text())
    assert set(raw) == {"cutoff", "noise_level", "values"}
    assert set(raw["values"][0]) == {"re", "im"}
    assert len(raw["values"]) == 25


def test_grid_rejects_wrong_size():
    with pytest.raises(ValueError):
        FourierGrid(2, np.zeros(8))
