import math

import numpy as np
import pytest

from loraeval._kernels import available_backends, get_backend
from loraeval.network import NetworkConfig, generate_scenario
from loraeval.oracle import _collision_pairs, mae_sde, run_oracle
from loraeval.analytics import compute_result, interference_prob
from loraeval.radio import PathLossParams

from test_analytics import config_at, distance_for_margin


def brute_force_pairs(starts, eds, toa_by_ed, vuln_by_ed):
    pairs = []
    n = len(starts)
    for i in range(n):
        end_i = starts[i] + toa_by_ed[eds[i]]
        vuln_i = starts[i] + vuln_by_ed[eds[i]]
        for j in range(n):
            if j == i or eds[j] == eds[i]:
                continue
            if starts[j] < end_i and starts[j] + toa_by_ed[eds[j]] > vuln_i:
                pairs.append((i, j))
    return sorted(pairs)


def test_collision_pairs_match_brute_force():
    rng = np.random.default_rng(101)
    for _ in range(40):
        n_ed = int(rng.integers(1, 5))
        n_packets = int(rng.integers(0, 60))
        starts = np.sort(rng.uniform(0.0, 10.0, size=n_packets))
        eds = rng.integers(0, n_ed, size=n_packets).astype(np.int64)
        toa_by_ed = rng.uniform(0.05, 1.5, size=n_ed)
        vuln_by_ed = toa_by_ed * rng.uniform(0.0, 0.2, size=n_ed)
        victims, interferers = _collision_pairs(starts, eds, toa_by_ed, vuln_by_ed)
        got = sorted(zip(victims.tolist(), interferers.tolist()))
        assert got == brute_force_pairs(starts, eds, toa_by_ed, vuln_by_ed)


def test_collision_pairs_exclude_same_device():
    # One chatty device overlapping itself constantly: no pairs at all.
    starts = np.array([0.0, 0.01, 0.02, 0.03])
    eds = np.zeros(4, dtype=np.int64)
    victims, interferers = _collision_pairs(starts, eds, np.array([1.0]), np.array([0.1]))
    assert len(victims) == 0


def test_collision_pairs_respect_preamble_grace():
    # The interferer ends inside the victim's disposable preamble: no pair
    # one way, but the victim's tail still lands on the interferer.
    starts = np.array([0.0, 0.05])
    eds = np.array([0, 1], dtype=np.int64)
    toa = np.array([0.2, 0.2])
    vuln = np.array([0.1, 0.1])
    victims, interferers = _collision_pairs(starts, eds, toa, vuln)
    assert (1, 0) in list(zip(victims.tolist(), interferers.tolist()))
    # Packet 0 becomes vulnerable at t=0.1; packet 1 ends at 0.25 > 0.1.
    assert (0, 1) in list(zip(victims.tolist(), interferers.tolist()))
    # Move the interferer fully inside the grace window of packet 0.
    starts = np.array([0.0, 0.01])
    toa = np.array([1.0, 0.05])
    vuln = np.array([0.1, 0.01])
    victims, interferers = _collision_pairs(starts, eds, toa, vuln)
    pairs = list(zip(victims.tolist(), interferers.tolist()))
    assert (0, 1) not in pairs  # ends at 0.06, before vulnerability at 0.1
    assert (1, 0) in pairs


def test_backends_bit_identical():
    backends = available_backends()
    if len(backends) < 2:
        pytest.skip("only one kernel backend available")
    for seed in (1, 5, 9):
        cfg = generate_scenario(25, 2, area_m=1000.0, seed=seed)
        results = [
            run_oracle(cfg, duration_s=2.0e6, seed=seed + 50, kernel=b) for b in backends
        ]
        base = results[0]
        for other in results[1:]:
            assert np.array_equal(base.received_gw, other.received_gw)
            assert np.array_equal(base.sent, other.sent)
            assert np.array_equal(base.pdr, other.pdr)


def test_oracle_deterministic():
    cfg = generate_scenario(10, 2, area_m=1000.0, seed=4)
    a = run_oracle(cfg, duration_s=1.0e6, seed=8)
    b = run_oracle(cfg, duration_s=1.0e6, seed=8)
    assert np.array_equal(a.received_gw, b.received_gw)
    assert np.array_equal(a.sent, b.sent)


def test_oracle_no_fading_in_range_delivers_everything():
    pl = PathLossParams(shadow_sigma_db=0.0)
    cfg = config_at([distance_for_margin(1.0)], path_loss=pl)
    res = run_oracle(cfg, duration_s=1.0e6, seed=3)
    assert res.sent[0] > 800
    assert res.received[0] == res.sent[0]
    assert res.pdr[0] == 1.0


def test_oracle_no_fading_out_of_range_delivers_nothing():
    pl = PathLossParams(shadow_sigma_db=0.0)
    cfg = config_at([distance_for_margin(-1.0)], path_loss=pl)
    res = run_oracle(cfg, duration_s=1.0e6, seed=3)
    assert res.sent[0] > 800
    assert res.received[0] == 0
    assert res.pdr[0] == 0.0 and res.ee[0] == 0.0


def test_oracle_detection_statistics():
    cfg = config_at([distance_for_margin(0.0)])
    res = run_oracle(cfg, duration_s=1.0e6, seed=17)
    sigma = math.sqrt(0.25 / res.sent[0])
    assert res.pdr[0] == pytest.approx(0.5, abs=4 * sigma)


def test_oracle_collision_statistics_no_fading():
    # Two co-located same-SF devices, no fading: every intruding overlap is
    # fatal, so the loss rate is exactly the analytic overlap probability.
    pl = PathLossParams(shadow_sigma_db=0.0)
    cfg = config_at([100.0, 100.0], path_loss=pl, rate=0.5)
    h = interference_prob(0, 1, cfg)
    res = run_oracle(cfg, duration_s=2.0e4, seed=23)
    for i in (0, 1):
        n = res.sent[i]
        sigma = math.sqrt(h * (1 - h) / n)
        assert res.pdr[i] == pytest.approx(1.0 - h, abs=5 * sigma)


def test_oracle_ee_definitional():
    cfg = generate_scenario(15, 2, area_m=1000.0, seed=2)
    res = run_oracle(cfg, duration_s=1.0e6, seed=6)
    toa = compute_result(cfg).toa_s
    for i in range(cfg.n_ed):
        draw = cfg.tables.power_draw(float(cfg.ed_power_dbm[i]))
        want = 8.0 * 20 * res.pdr[i] / (draw * toa[i])
        assert res.ee[i] == pytest.approx(want, rel=1e-12, abs=0)


def test_oracle_drops_packets_crossing_horizon():
    # Horizon shorter than one SF12 airtime: every arrival is cut off.
    cfg = config_at([100.0], sf=12, rate=0.5)
    res = run_oracle(cfg, duration_s=1.0, seed=9)
    assert res.sent[0] == 0
    assert res.pdr[0] == 0.0


def test_oracle_matches_model_small_scenario():
    cfg = generate_scenario(10, 2, area_m=1000.0, seed=12)
    model = compute_result(cfg)
    res = run_oracle(cfg, duration_s=1.0e7, seed=31)
    mae, sde = mae_sde(res.pdr, model.pdr)
    assert mae <= 1.0e-2
    assert sde <= 2.0e-2


def test_oracle_validates_inputs():
    cfg = config_at([100.0])
    with pytest.raises(ValueError):
        run_oracle(cfg, duration_s=0.0, seed=1)
    with pytest.raises(ValueError):
        run_oracle(cfg, duration_s=1.0e5, seed=1, kernel="bogus")
    bad = config_at([100.0], sf=13)
    with pytest.raises(ValueError):
        run_oracle(bad, duration_s=1.0e5, seed=1)


def test_get_backend_names():
    assert get_backend("pure") is not None
    with pytest.raises(ValueError):
        get_backend("vectorized-nonsense")


def test_mae_sde_hand_values():
    mae, sde = mae_sde(np.array([0.0, 1.0]), np.array([1.0, 1.0]))
    assert mae == pytest.approx(0.5)
    assert sde == pytest.approx(0.5)
    mae, sde = mae_sde(np.array([2.0, 2.0]), np.array([1.0, 1.0]))
    assert mae == pytest.approx(1.0)
    assert sde == pytest.approx(0.0)
