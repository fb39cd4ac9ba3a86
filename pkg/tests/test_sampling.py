import math

import numpy as np
import pytest

from loraeval.network import NetworkConfig
from loraeval.radio import PathLossParams, RadioTables
from loraeval.sampling import (
    MISSED,
    poisson_arrivals,
    sample_matrix,
    sample_rss,
    sample_snr,
    snr_offset_db,
)

from test_analytics import config_at, distance_for_margin


def test_snr_offset_default_value():
    assert snr_offset_db(RadioTables()) == pytest.approx(-144.75, abs=1e-12)


def test_sample_snr_conversion():
    tables = RadioTables()
    assert sample_snr(-120.0, tables) == pytest.approx(24.75, abs=1e-12)
    assert sample_snr(MISSED, tables) == MISSED


def test_sample_rss_deterministic_per_seed():
    cfg = config_at([300.0, 600.0])
    a = [sample_rss(i, 0, cfg, np.random.default_rng(5)) for i in (0, 1)]
    b = [sample_rss(i, 0, cfg, np.random.default_rng(5)) for i in (0, 1)]
    assert a == b


def test_sample_rss_no_fading_recovers_mean():
    pl = PathLossParams(shadow_sigma_db=0.0)
    cfg = config_at([distance_for_margin(1.0)], path_loss=pl)
    got = sample_rss(0, 0, cfg, np.random.default_rng(0))
    assert not got.missed
    # One device: survival is certain, so the draw is exactly the mean RSS.
    assert got.rss_dbm == pytest.approx(-124.0 + 1.0, abs=1e-9)
    assert got.snr_db == pytest.approx(got.rss_dbm + 144.75, abs=1e-9)


def test_sample_rss_below_sensitivity_missed():
    pl = PathLossParams(shadow_sigma_db=0.0)
    cfg = config_at([distance_for_margin(-1.0)], path_loss=pl)
    got = sample_rss(0, 0, cfg, np.random.default_rng(0))
    assert got.missed
    assert got.rss_dbm == MISSED and got.snr_db == MISSED


def test_sample_rss_stream_position_fixed():
    # A missed link consumes the same number of draws as a delivered one,
    # so downstream draws do not depend on earlier outcomes.
    pl = PathLossParams(shadow_sigma_db=0.0)
    near = config_at([distance_for_margin(1.0), 300.0], path_loss=pl)
    far = config_at([distance_for_margin(-1.0), 300.0], path_loss=pl)
    rng_a = np.random.default_rng(33)
    rng_b = np.random.default_rng(33)
    sample_rss(0, 0, near, rng_a)
    sample_rss(0, 0, far, rng_b)
    assert rng_a.random() == rng_b.random()


def test_sample_matrix_shapes_and_determinism():
    cfg = config_at([100.0, 400.0, 800.0])
    a = sample_matrix(cfg, np.random.default_rng(7))
    b = sample_matrix(cfg, np.random.default_rng(7))
    assert a.rss_dbm.shape == (3, 1)
    assert np.array_equal(a.rss_dbm, b.rss_dbm)
    assert np.array_equal(a.snr_db, b.snr_db)
    assert np.array_equal(a.missed, np.isinf(a.rss_dbm))


def test_sample_matrix_no_fading_matches_step_model():
    pl = PathLossParams(shadow_sigma_db=0.0)
    cfg = config_at(
        [distance_for_margin(2.0), distance_for_margin(-2.0)], path_loss=pl, rate=0.0
    )
    got = sample_matrix(cfg, np.random.default_rng(1))
    assert not got.missed[0, 0]
    assert got.missed[1, 0]


def test_sample_matrix_detection_frequency():
    # Empirical delivery rate over many independent draws approaches psi.
    cfg = config_at([distance_for_margin(0.0)], rate=0.0)
    rng = np.random.default_rng(1234)
    n = 20000
    hits = sum(not sample_matrix(cfg, rng).missed[0, 0] for _ in range(n))
    sigma = math.sqrt(0.25 / n)
    assert hits / n == pytest.approx(0.5, abs=4 * sigma)


def test_missed_serial_forms():
    assert MISSED == float("-inf")
    assert not math.isfinite(MISSED)


def test_poisson_arrivals_sorted_in_range():
    rng = np.random.default_rng(11)
    times = poisson_arrivals(rng, 0.001, 1.0e6)
    assert np.all(np.diff(times) >= 0)
    assert times.min() >= 0.0 and times.max() < 1.0e6


def test_poisson_arrivals_count_statistics():
    rng = np.random.default_rng(77)
    counts = [len(poisson_arrivals(rng, 0.001, 1.0e5)) for _ in range(200)]
    mean = np.mean(counts)
    # Mean of 200 Poisson(100) samples: sigma = sqrt(100/200).
    assert mean == pytest.approx(100.0, abs=5 * math.sqrt(100.0 / 200))


def test_poisson_arrivals_empty_cases():
    rng = np.random.default_rng(0)
    assert len(poisson_arrivals(rng, 0.0, 1.0e5)) == 0
    assert len(poisson_arrivals(rng, 0.001, 0.0)) == 0


def test_poisson_arrivals_deterministic():
    a = poisson_arrivals(np.random.default_rng(3), 0.01, 1e4)
    b = poisson_arrivals(np.random.default_rng(3), 0.01, 1e4)
    assert np.array_equal(a, b)
