import numpy as np
import pytest

from loraeval.network import (
    InvalidConfigError,
    NetworkConfig,
    distance_matrix,
    generate_scenario,
    validate,
    validate_or_raise,
)


def small_config(**overrides):
    base = dict(
        ed_positions=[[0.0, 30.0], [40.0, 0.0]],
        gw_positions=[[0.0, 0.0]],
        ed_sf=[7, 12],
        ed_power_dbm=[14.0, 2.0],
    )
    base.update(overrides)
    return NetworkConfig(**base)


def test_distance_matrix_hand_values():
    cfg = small_config()
    dist = distance_matrix(cfg)
    assert dist.shape == (2, 1)
    assert dist[0, 0] == pytest.approx(30.0)
    assert dist[1, 0] == pytest.approx(40.0)


def test_valid_config_passes():
    assert validate(small_config()) == []
    validate_or_raise(small_config())


def test_validation_collects_all_problems():
    cfg = small_config(
        ed_positions=[[0.0, 0.0], [50.0, 1.0]],
        ed_sf=[6, 13],
        ed_power_dbm=[3.0, 14.0],
    )
    issues = validate(cfg)
    text = "\n".join(str(v) for v in issues)
    assert "ed_sf[0]" in text and "ed_sf[1]" in text
    assert "ed_power_dbm[0]" in text
    assert "ed_positions[0]" in text and "gateway 0" in text  # sits on the GW
    assert len(issues) == 4


def test_validation_flags_nonfinite_coordinates():
    issues = validate(small_config(ed_positions=[[0.0, 30.0], [np.nan, 1.0]]))
    assert [str(v) for v in issues] == ["ed_positions[1]: coordinates must be finite"]


def test_validation_rejects_bad_rate():
    issues = validate(small_config(packet_rate_hz=-1.0))
    assert any(v.location == "packet_rate_hz" for v in issues)
    issues = validate(small_config(packet_rate_hz=float("nan")))
    assert any(v.location == "packet_rate_hz" for v in issues)
    assert validate(small_config(packet_rate_hz=0.0)) == []


def test_validation_rejects_empty_sides():
    cfg = NetworkConfig(
        ed_positions=np.empty((0, 2)),
        gw_positions=[[0.0, 0.0]],
        ed_sf=np.empty(0, dtype=np.int64),
        ed_power_dbm=np.empty(0),
    )
    assert any("at least one end device" in v.message for v in validate(cfg))


def test_validation_rejects_shape_mismatch():
    cfg = small_config(ed_sf=[7])
    issues = validate(cfg)
    assert any(v.location == "ed_sf" for v in issues)


def test_invalid_config_error_message():
    with pytest.raises(InvalidConfigError) as err:
        validate_or_raise(small_config(ed_sf=[6, 7]))
    assert "ed_sf[0]" in str(err.value)
    assert err.value.violations


def test_replace_assignment_copies():
    cfg = small_config()
    new = cfg.replace_assignment([8, 9], [4.0, 6.0])
    assert list(new.ed_sf) == [8, 9]
    assert list(cfg.ed_sf) == [7, 12]
    assert new.ed_positions is cfg.ed_positions
    assert new.tables is cfg.tables


def test_generate_scenario_deterministic():
    a = generate_scenario(25, 3, area_m=1000.0, seed=42)
    b = generate_scenario(25, 3, area_m=1000.0, seed=42)
    c = generate_scenario(25, 3, area_m=1000.0, seed=43)
    assert np.array_equal(a.ed_positions, b.ed_positions)
    assert np.array_equal(a.gw_positions, b.gw_positions)
    assert np.array_equal(a.ed_sf, b.ed_sf)
    assert np.array_equal(a.ed_power_dbm, b.ed_power_dbm)
    assert not np.array_equal(a.ed_positions, c.ed_positions)


def test_generate_scenario_ranges():
    cfg = generate_scenario(200, 4, area_m=500.0, seed=1)
    assert cfg.n_ed == 200 and cfg.n_gw == 4
    assert cfg.ed_positions.min() >= 0.0 and cfg.ed_positions.max() <= 500.0
    assert set(np.unique(cfg.ed_sf)) <= set(range(7, 13))
    assert set(np.unique(cfg.ed_power_dbm)) <= set(cfg.tables.power_levels_dbm)
    assert validate(cfg) == []


def test_generate_scenario_rejects_bad_args():
    with pytest.raises(ValueError):
        generate_scenario(0, 1, area_m=100.0, seed=1)
    with pytest.raises(ValueError):
        generate_scenario(1, 1, area_m=0.0, seed=1)
