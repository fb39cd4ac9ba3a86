import math

import pytest

from loraeval.radio import (
    DEFAULT_MIN_SNR_DB,
    DEFAULT_SENSITIVITY_DBM,
    DEFAULT_SIR_THRESHOLD_DB,
    DEFAULT_POWER_DRAW_MW,
    SPREADING_FACTORS,
    ChannelParams,
    PathLossParams,
    RadioTables,
    TableLookupError,
    TransmissionConfig,
    mean_rss,
    payload_symbols,
    preamble_time,
    resolve_low_data_rate,
    symbol_time,
    time_on_air,
)

from reference_impls import airtime_reference, auto_low_data_rate

DEFAULT_CHANNEL = ChannelParams()


def test_symbol_time_values():
    assert symbol_time(7, 125e3) == pytest.approx(1.024e-3, abs=1e-12)
    assert symbol_time(12, 125e3) == pytest.approx(32.768e-3, abs=1e-12)
    assert symbol_time(7, 250e3) == pytest.approx(0.512e-3, abs=1e-12)


def test_symbol_time_doubles_per_step():
    for sf in range(7, 12):
        assert symbol_time(sf + 1, 125e3) == pytest.approx(2 * symbol_time(sf, 125e3))


def test_payload_symbol_counts():
    # Hand-expanded counts for the default channel (20 B, CR 1, CRC on,
    # explicit header, low data rate only at SF >= 11).
    expected = {7: 38, 8: 33, 9: 33, 10: 28, 11: 28, 12: 28}
    for sf, count in expected.items():
        cfg = TransmissionConfig(sf, 14.0)
        assert payload_symbols(cfg, DEFAULT_CHANNEL) == count


def test_payload_symbols_floor_at_base():
    # Zero-byte payload bottoms out at the 8-symbol base for small SFs.
    channel = ChannelParams(payload_bytes=0)
    assert payload_symbols(TransmissionConfig(7, 14.0), channel) == 8


def test_time_on_air_hand_case():
    toa = time_on_air(TransmissionConfig(7, 14.0), DEFAULT_CHANNEL)
    assert toa == pytest.approx(51.456e-3, abs=1e-9)


def test_time_on_air_zero_payload():
    channel = ChannelParams(payload_bytes=0)
    toa = time_on_air(TransmissionConfig(7, 14.0), channel)
    assert toa == pytest.approx(20.736e-3, abs=1e-9)


def test_preamble_time():
    assert preamble_time(7, DEFAULT_CHANNEL) == pytest.approx(12.544e-3, abs=1e-12)


def test_time_on_air_matches_rational_reference():
    for sf in SPREADING_FACTORS:
        for cr in (1, 2, 3, 4):
            for payload in (0, 20, 51, 222):
                channel = ChannelParams(coding_rate=cr, payload_bytes=payload)
                got = time_on_air(TransmissionConfig(sf, 14.0, cr), channel)
                want = airtime_reference(
                    sf, 125e3, 8, payload, cr, 1, 1, auto_low_data_rate(sf)
                )
                assert got == pytest.approx(want, abs=1e-6)


def test_time_on_air_monotone():
    times = [time_on_air(TransmissionConfig(sf, 14.0), DEFAULT_CHANNEL) for sf in SPREADING_FACTORS]
    assert all(b > a for a, b in zip(times, times[1:]))
    by_payload = [
        time_on_air(TransmissionConfig(9, 14.0), ChannelParams(payload_bytes=n))
        for n in (0, 10, 20, 40, 80)
    ]
    assert all(b >= a for a, b in zip(by_payload, by_payload[1:]))


def test_low_data_rate_modes():
    assert [resolve_low_data_rate("auto", sf) for sf in SPREADING_FACTORS] == [0, 0, 0, 0, 1, 1]
    assert resolve_low_data_rate("on", 7) == 1
    assert resolve_low_data_rate("off", 12) == 0
    with pytest.raises(ValueError):
        resolve_low_data_rate("sometimes", 7)


def test_mean_rss_values():
    pl = PathLossParams()
    # At the reference distance only the reference loss applies.
    assert mean_rss(14.0, 40.0, pl) == pytest.approx(14.0 - 127.41, abs=1e-12)
    expected_100 = 14.0 - 127.41 - 10 * 2.08 * math.log10(100.0 / 40.0)
    assert mean_rss(14.0, 100.0, pl) == pytest.approx(expected_100, abs=1e-12)
    assert mean_rss(2.0, 100.0, pl) == pytest.approx(expected_100 - 12.0, abs=1e-12)


def test_mean_rss_rejects_nonpositive_distance():
    pl = PathLossParams()
    with pytest.raises(ValueError):
        mean_rss(14.0, 0.0, pl)
    with pytest.raises(ValueError):
        mean_rss(14.0, -5.0, pl)


def test_default_tables():
    tables = RadioTables()
    assert tables.sensitivity(7) == -124.0
    assert tables.sensitivity(12) == -137.0
    assert tables.min_snr(7) == -7.5
    assert tables.min_snr(12) == -20.0
    for sf in SPREADING_FACTORS:
        assert tables.sir_threshold(sf, sf) == 6.0
    assert tables.sir_threshold(7, 12) == -9.0
    assert tables.sir_threshold(12, 7) == -25.0
    assert tables.power_draw(14.0) == 184.0
    assert tables.power_levels_dbm == (2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0)


def test_power_draw_strictly_increasing():
    levels = sorted(DEFAULT_POWER_DRAW_MW)
    draws = [DEFAULT_POWER_DRAW_MW[p] for p in levels]
    assert all(b > a for a, b in zip(draws, draws[1:]))


def test_table_lookup_errors():
    tables = RadioTables()
    with pytest.raises(TableLookupError):
        tables.sensitivity(6)
    with pytest.raises(TableLookupError):
        tables.min_snr(13)
    with pytest.raises(TableLookupError):
        tables.sir_threshold(6, 7)
    with pytest.raises(TableLookupError):
        tables.power_draw(3.0)


def test_tables_reject_bad_shapes():
    with pytest.raises(ValueError):
        RadioTables(sensitivity_dbm={7: -124.0})
    with pytest.raises(ValueError):
        RadioTables(sir_threshold_db=((6.0,) * 6,) * 5)


def test_sensitivity_improves_with_sf():
    values = [DEFAULT_SENSITIVITY_DBM[sf] for sf in SPREADING_FACTORS]
    assert all(b < a for a, b in zip(values, values[1:]))
    snr = [DEFAULT_MIN_SNR_DB[sf] for sf in SPREADING_FACTORS]
    assert all(b < a for a, b in zip(snr, snr[1:]))


def test_sir_diagonal_dominates_row():
    for row in DEFAULT_SIR_THRESHOLD_DB:
        assert max(row) == 6.0


def test_transmission_config_validation():
    with pytest.raises(ValueError):
        TransmissionConfig(6, 14.0)
    with pytest.raises(ValueError):
        TransmissionConfig(7, 14.0, coding_rate=5)


def test_channel_params_validation():
    with pytest.raises(ValueError):
        ChannelParams(bandwidth_hz=0.0)
    with pytest.raises(ValueError):
        ChannelParams(preamble_symbols=4)
    with pytest.raises(ValueError):
        ChannelParams(payload_bytes=-1)
