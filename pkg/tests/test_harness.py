import math
import xml.etree.ElementTree as ET
from dataclasses import replace

import numpy as np
import pytest
from scipy import stats

from coordcomb.harness import (
    ExperimentConfig,
    FitError,
    TrialRecord,
    above_threshold_violations,
    boundary_points,
    emit_csv,
    emit_plot,
    fit_boundary_slope,
    location_success,
    read_csv,
    run_location_phase_transition,
    run_number_phase_transition,
    sample_instance,
    trial_seed,
)


def synthetic_records(slope=4.0, intercept=1.0, count=4000, seed=0):
    rng = np.random.default_rng(seed)
    recs = []
    for i in range(count):
        x = rng.uniform(-0.3, 1.0)
        y = rng.uniform(0, 12)
        recs.append(TrialRecord(i, 3, math.pi / (10 ** x * 10), 10.0 ** -y, 10.0 ** x, 10.0 ** y, 3,
                                bool(y >= slope * x + intercept), math.nan, i))
    return recs


def test_single_source_has_no_separation_constraint():
    cfg = ExperimentConfig(n_true=1)
    src, sigma = sample_instance(cfg, np.random.default_rng(0))
    assert src.n == 1 and math.isinf(src.d_min)
    assert 1e-12 <= sigma <= 1


def test_sampled_separation_within_band():
    rng = np.random.default_rng(1)
    for n in (2, 3, 4):
        cfg = ExperimentConfig(n_true=n)
        for _ in range(200):
            src, _ = sample_instance(cfg, rng)
            i, j = np.triu_indices(n, 1)
            d = np.abs(src.locations[i] - src.locations[j]).sum(axis=1)
            # reconstruct the drawn target from the realized minimum, which is exactly D
            target = d.min()
            assert d.min() <= 1.1 * target and np.all(d >= target * (1 - 1e-12))
            assert np.all(src.locations >= 0) and np.all(src.locations <= math.pi / 2)
            assert np.all(np.abs(src.amplitudes) >= 1) and np.all(np.abs(src.amplitudes) <= 2)


def test_sampled_srf_log_uniform():
    cfg = ExperimentConfig(n_true=3)
    rng = np.random.default_rng(2)
    xs = [math.log10(math.pi / (sample_instance(cfg, rng)[0].d_min * cfg.omega)) for _ in range(10_000)]
    assert stats.kstest(xs, stats.uniform(-0.3, 1.3).cdf).statistic < 0.02


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(trials=0)
    with pytest.raises(ValueError):
        ExperimentConfig(srf_log10_range=(1, 1))
    with pytest.raises(ValueError):
        ExperimentConfig.from_dict({"bogus": 1})
    assert ExperimentConfig.from_dict({"n_true": 2, "region": [[0, 1], [0, 1]]}).region == ((0.0, 1.0), (0.0, 1.0))


def test_trial_seed_depends_on_both_inputs():
    assert trial_seed(0, 1) != trial_seed(0, 2)
    assert trial_seed(0, 1) != trial_seed(1, 1)
    assert trial_seed(5, 7) == trial_seed(5, 7)


def test_noiseless_number_batch_succeeds():
    cfg = ExperimentConfig(n_true=3, trials=100, srf_log10_range=(-0.3, -0.1), noiseless=True)
    recs = run_number_phase_transition(cfg)
    assert len(recs) == 100 and all(r.sigma == 0 and r.snr == math.inf for r in recs)
    assert all(r.success for r in recs)


def test_deep_subthreshold_mostly_fails():
    cfg = ExperimentConfig(n_true=3, trials=60, srf_log10_range=(0.99, 1.0), inv_sigma_log10_range=(0.0, 0.01))
    recs = run_number_phase_transition(cfg)
    assert np.mean([r.success for r in recs]) < 0.5


def test_number_batch_reproducible_across_workers():
    cfg = ExperimentConfig(n_true=2, trials=12, seed=9)
    a = run_number_phase_transition(cfg)
    b = run_number_phase_transition(cfg)
    c = run_number_phase_transition(cfg, workers=2)
    rows = [[repr(r.to_row()) for r in recs] for recs in (a, b, c)]
    assert rows[0] == rows[1] == rows[2]


def test_location_success_rule():
    true = np.array([[0.0, 0.0], [3.0, 0.0]])
    assert location_success(true, true + 0.99)[0] is False
    ok, err = location_success(true, true + [0.9, 0.0])
    assert ok and err == pytest.approx(0.9)
    # threshold is gap/3 exactly, strict
    assert location_success(true, true + [1.0, 0.0])[0] is False
    assert location_success(true[:1], true[:1] + 5)[0] is True


def test_noiseless_location_batch():
    cfg = ExperimentConfig(n_true=2, trials=100, srf_log10_range=(-0.3, -0.2), noiseless=True)
    recs = run_location_phase_transition(cfg)
    assert all(r.success for r in recs)
    assert max(r.max_location_error for r in recs) < 1e-3


def test_location_batch_reproducible():
    cfg = ExperimentConfig(n_true=2, trials=6, seed=3)
    a, b = run_location_phase_transition(cfg), run_location_phase_transition(cfg)
    assert [repr(r.to_row()) for r in a] == [repr(r.to_row()) for r in b]


def column_records(slope=4.0, intercept=1.0, dy=0.005):
    # one column of trials per bin centre, so each bin sees the boundary at its centre
    edges = np.linspace(-0.3, 1.0, 21)
    recs = []
    for x in 0.5 * (edges[1:] + edges[:-1]):
        for y in np.arange(0, 12 + dy / 2, dy):
            recs.append(TrialRecord(len(recs), 3, math.pi / (10 ** x * 10), 10.0 ** -y, 10.0 ** x, 10.0 ** y,
                                    3, bool(y >= slope * x + intercept), math.nan, 0))
    return recs


def test_fit_recovers_synthetic_slope():
    slope, intercept = fit_boundary_slope(column_records(), srf_range=(-0.3, 1.0))
    assert slope == pytest.approx(4.0, abs=0.01)
    assert intercept == pytest.approx(1.0, abs=0.01)


def test_fit_on_random_synthetic_records():
    slope, _ = fit_boundary_slope(synthetic_records())
    assert slope == pytest.approx(4.0, abs=0.1)


def test_fit_needs_mixed_bins():
    recs = synthetic_records(slope=0, intercept=-1)  # all succeed
    with pytest.raises(FitError):
        fit_boundary_slope(recs)
    with pytest.raises(FitError):
        boundary_points([])


def test_above_threshold_violations_flags_failures():
    ok = TrialRecord(0, 2, 100.0, 1e-3, 0.003, 1e3, 2, True, math.nan, 0)
    bad = replace(ok, trial_id=1, success=False)
    close = replace(bad, trial_id=2, d_min=1e-6)
    assert above_threshold_violations([ok, bad, close], "number", 10) == [bad]


def test_csv_round_trip(tmp_path):
    recs = synthetic_records(count=50)
    recs.append(replace(recs[0], trial_id=999, max_location_error=math.inf))
    emit_csv(recs, tmp_path / "r.csv")
    back = read_csv(tmp_path / "r.csv")
    # nan never compares equal, so compare the repr of every field
    assert [repr(r.to_row()) for r in back] == [repr(r.to_row()) for r in recs]
    assert back[-1].max_location_error == math.inf


def test_empty_outputs_refused(tmp_path):
    with pytest.raises(ValueError, match="empty"):
        emit_csv([], tmp_path / "x.csv")
    with pytest.raises(ValueError, match="empty"):
        emit_plot([], tmp_path / "x.svg")


def test_csv_unwritable_path(tmp_path):
    with pytest.raises(OSError):
        emit_csv(synthetic_records(count=3), tmp_path / "missing" / "x.csv")


def test_plot_is_valid_svg(tmp_path):
    path = tmp_path / "p.svg"
    emit_plot(synthetic_records(count=500), path, title="demo")
    root = ET.parse(path).getroot()
    assert root.tag.endswith("svg")
