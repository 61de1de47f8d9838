import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coordcomb.combine import (
    CombinedSequence,
    combine_minus,
    combine_plus,
    combined_nodes,
    default_stride,
    noise_amplification_bound,
)
from coordcomb.model import FourierGrid, NoiseSpec, SourceConfiguration, add_noise, forward_measure

FULL = ((-4.0, 4.0), (-4.0, 4.0))


def power_sums(nodes, amps, count):
    return np.array([np.sum(amps * nodes ** t) for t in range(count)])


def test_plus_single_source_at_origin():
    g = forward_measure(SourceConfiguration([[0, 0]], [1]), 4)
    np.testing.assert_allclose(combine_plus(g, 2, 1).values, [1, 2, 4, 8, 16])


def test_minus_single_source_at_origin():
    g = forward_measure(SourceConfiguration([[0, 0]], [1]), 4)
    np.testing.assert_allclose(combine_minus(g, 2).values, [1, 0, 0, 0, 0], atol=1e-15)


def test_minus_source_at_half_turn():
    g = forward_measure(SourceConfiguration([[0, np.pi]], [1], FULL), 2)
    np.testing.assert_allclose(combine_minus(g, 1).values, [1, 2, 4], atol=1e-13)


def test_first_value_is_origin_sample():
    rng = np.random.default_rng(0)
    g = FourierGrid(6, rng.normal(size=49) + 1j * rng.normal(size=49))
    assert combine_plus(g, 3).values[0] == g[0, 0]
    assert combine_minus(g, 3).values[0] == g[0, 0]


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3))
def test_binomial_identity_exact(seed, n, s):
    rng = np.random.default_rng(seed)
    locs = rng.uniform(0, np.pi, (n, 2))
    amps = rng.uniform(1, 2, n) * np.exp(1j * rng.uniform(0, 2 * np.pi, n))
    cutoff = 2 * s * 2
    g = forward_measure(SourceConfiguration(locs, amps, FULL), cutoff)
    for r in (1, 2):
        d = combined_nodes(locs, r, "plus")
        ref = power_sums(d, amps, 2 * s + 1)
        np.testing.assert_allclose(combine_plus(g, s, r).values, ref, rtol=1e-12, atol=1e-12)
    gm = combined_nodes(locs, 1, "minus")
    np.testing.assert_allclose(combine_minus(g, s).values, power_sums(gm, amps, 2 * s + 1), rtol=1e-12, atol=1e-12)


def test_out_of_range_rejected():
    g = FourierGrid(5, np.zeros(36))
    with pytest.raises(ValueError, match="out of range"):
        combine_plus(g, 3, 1)
    with pytest.raises(ValueError, match="out of range"):
        combine_plus(g, 2, 2)
    with pytest.raises(ValueError):
        combine_minus(g, 3)


def test_default_stride_is_floor():
    assert default_stride(10, 2) == 2
    assert default_stride(10, 3) == 1
    assert default_stride(12, 3) == 2
    assert default_stride(10, 6) == 0


def test_noise_amplification_bound():
    b = noise_amplification_bound(2)
    assert b[0] == 1 and b[3] == 8 and len(b) == 5


def test_combined_noise_respects_bound():
    g = FourierGrid(10, np.zeros(121))
    sigma = 0.01
    worst = 0.0
    for seed in range(1000):
        noisy = add_noise(g, NoiseSpec(sigma, seed))
        worst = max(worst, abs(combine_plus(noisy, 2, 1).values[4]))
    assert worst < 0.16


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(1e-6, 1.0))
def test_noise_term_bounded_per_index(seed, sigma):
    rng = np.random.default_rng(seed)
    locs = rng.uniform(0, np.pi / 2, (2, 2))
    g = forward_measure(SourceConfiguration(locs, [1, 1j]), 10)
    noisy = add_noise(g, NoiseSpec(sigma, seed))
    bound = noise_amplification_bound(5) * sigma
    for fn in (lambda x: combine_plus(x, 5, 1), lambda x: combine_minus(x, 5)):
        assert np.all(np.abs(fn(noisy).values - fn(g).values) < bound)


def test_sequence_validation():
    with pytest.raises(ValueError):
        CombinedSequence(np.zeros(4), 2)
    with pytest.raises(ValueError):
        CombinedSequence(np.zeros(5), 2, 1, "other")
    seq = CombinedSequence(np.arange(5), 2)
    assert len(seq) == 5
    np.testing.assert_allclose(seq.scaled(2j).values, 2j * np.arange(5))


def test_node_modulus_bounds():
    rng = np.random.default_rng(5)
    locs = rng.uniform(0, 2 * np.pi, (500, 2))
    assert np.all(np.abs(combined_nodes(locs)) <= 2 + 1e-12)
    first = rng.uniform(0, np.pi / 3, 500)
    window = np.column_stack([first, first + rng.uniform(np.pi / 3, 2 * np.pi / 3, 500)])
    assert np.all(np.abs(combined_nodes(window)) <= np.sqrt(3) + 1e-12)
