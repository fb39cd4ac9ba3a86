"""LoRa link primitives: airtime, mean received power, radio parameter tables.

All times are seconds, powers dBm, energies derived from milliwatt draw
tables. Spreading factors run 7..12, coding rate index 1..4 encodes the
4/(4+cr) rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

SPREADING_FACTORS: tuple[int, ...] = (7, 8, 9, 10, 11, 12)

# Receiver sensitivity per spreading factor at 125 kHz, dBm (SX1272-class
# defaults as used by common LoRaWAN simulators; override via RadioTables).
DEFAULT_SENSITIVITY_DBM: dict[int, float] = {
    7: -124.0,
    8: -127.0,
    9: -130.0,
    10: -133.0,
    11: -135.0,
    12: -137.0,
}

# Minimum demodulation SNR per spreading factor, dB.
DEFAULT_MIN_SNR_DB: dict[int, float] = {
    7: -7.5,
    8: -10.0,
    9: -12.5,
    10: -15.0,
    11: -17.5,
    12: -20.0,
}

# Signal-to-interference capture thresholds, dB. Row = spreading factor of
# the transmission under reception, column = spreading factor of the
# interferer, both indexed 7..12 in order.
DEFAULT_SIR_THRESHOLD_DB: tuple[tuple[float, ...], ...] = (
    (6.0, -8.0, -9.0, -9.0, -9.0, -9.0),
    (-11.0, 6.0, -11.0, -12.0, -13.0, -13.0),
    (-15.0, -13.0, 6.0, -13.0, -14.0, -15.0),
    (-19.0, -18.0, -17.0, 6.0, -17.0, -18.0),
    (-22.0, -22.0, -21.0, -20.0, 6.0, -20.0),
    (-25.0, -25.0, -25.0, -24.0, -23.0, 6.0),
)

# Transmit power levels, dBm, and an illustrative radio power draw for each,
# mW. Draw values are an example set in the range of measured SX127x-class
# consumption; replace with hardware measurements for absolute energy
# figures. Relative trends only require the table to grow with power.
DEFAULT_POWER_DRAW_MW: dict[float, float] = {
    2.0: 75.0,
    4.0: 84.0,
    6.0: 95.0,
    8.0: 109.0,
    10.0: 128.0,
    12.0: 152.0,
    14.0: 184.0,
    16.0: 227.0,
}


class TableLookupError(KeyError):
    """Raised when a radio table has no entry for the requested key."""


@dataclass(frozen=True)
class TransmissionConfig:
    """Per-transmission radio settings."""

    spreading_factor: int
    tx_power_dbm: float
    coding_rate: int = 1

    def __post_init__(self) -> None:
        if self.spreading_factor not in SPREADING_FACTORS:
            raise ValueError(f"spreading factor {self.spreading_factor} outside 7..12")
        if not 1 <= self.coding_rate <= 4:
            raise ValueError(f"coding rate index {self.coding_rate} outside 1..4")


@dataclass(frozen=True)
class ChannelParams:
    """Shared channel and frame settings for every uplink in a network.

    header_disabled follows the airtime formula convention: 0 when the
    explicit PHY header is present, 1 when it is omitted. low_data_rate_mode
    is "auto" (on for SF11/12, off otherwise), "on", or "off".
    """

    bandwidth_hz: float = 125e3
    preamble_symbols: int = 8
    coding_rate: int = 1
    payload_bytes: int = 20
    crc_enabled: int = 1
    header_disabled: int = 1
    low_data_rate_mode: str = "auto"
    noise_floor_dbm: float | None = None

    def __post_init__(self) -> None:
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be positive")
        # The collision window subtracts 5 preamble symbols; shorter
        # preambles would make the window formula meaningless.
        if self.preamble_symbols < 5:
            raise ValueError("preamble must be at least 5 symbols")
        if not 1 <= self.coding_rate <= 4:
            raise ValueError(f"coding rate index {self.coding_rate} outside 1..4")
        if self.payload_bytes < 0:
            raise ValueError("payload size cannot be negative")
        if self.crc_enabled not in (0, 1):
            raise ValueError("crc_enabled must be 0 or 1")
        if self.header_disabled not in (0, 1):
            raise ValueError("header_disabled must be 0 or 1")
        if self.low_data_rate_mode not in ("auto", "on", "off"):
            raise ValueError("low_data_rate_mode must be auto, on, or off")


@dataclass(frozen=True)
class PathLossParams:
    """Log-distance path loss with optional log-normal shadowing."""

    ref_loss_db: float = 127.41
    ref_distance_m: float = 40.0
    exponent: float = 2.08
    shadow_sigma_db: float = 3.57

    def __post_init__(self) -> None:
        if self.ref_distance_m <= 0:
            raise ValueError("reference distance must be positive")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadowing sigma cannot be negative")


@dataclass(frozen=True, eq=False)
class RadioTables:
    """Per-spreading-factor and per-power lookup tables."""

    sensitivity_dbm: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_SENSITIVITY_DBM)
    )
    min_snr_db: dict[int, float] = field(
        default_factory=lambda: dict(DEFAULT_MIN_SNR_DB)
    )
    sir_threshold_db: tuple[tuple[float, ...], ...] = DEFAULT_SIR_THRESHOLD_DB
    power_draw_mw: dict[float, float] = field(
        default_factory=lambda: dict(DEFAULT_POWER_DRAW_MW)
    )

    def __post_init__(self) -> None:
        for table_name in ("sensitivity_dbm", "min_snr_db"):
            table = getattr(self, table_name)
            missing = [f for f in SPREADING_FACTORS if f not in table]
            if missing:
                raise ValueError(f"{table_name} missing spreading factors {missing}")
        n = len(SPREADING_FACTORS)
        rows = self.sir_threshold_db
        if len(rows) != n or any(len(row) != n for row in rows):
            raise ValueError("sir_threshold_db must be a 6x6 table over SF 7..12")
        if not self.power_draw_mw:
            raise ValueError("power_draw_mw table cannot be empty")
        if any(v <= 0 for v in self.power_draw_mw.values()):
            raise ValueError("power draw entries must be positive")

    @property
    def power_levels_dbm(self) -> tuple[float, ...]:
        return tuple(sorted(self.power_draw_mw))

    def sensitivity(self, spreading_factor: int) -> float:
        try:
            return self.sensitivity_dbm[spreading_factor]
        except KeyError:
            raise TableLookupError(
                f"sensitivity_dbm has no entry for spreading factor {spreading_factor}"
            ) from None

    def min_snr(self, spreading_factor: int) -> float:
        try:
            return self.min_snr_db[spreading_factor]
        except KeyError:
            raise TableLookupError(
                f"min_snr_db has no entry for spreading factor {spreading_factor}"
            ) from None

    def sir_threshold(self, sf_receiving: int, sf_interferer: int) -> float:
        for sf in (sf_receiving, sf_interferer):
            if sf not in SPREADING_FACTORS:
                raise TableLookupError(
                    f"sir_threshold_db has no entry for spreading factor {sf}"
                )
        return self.sir_threshold_db[sf_receiving - 7][sf_interferer - 7]

    def power_draw(self, tx_power_dbm: float) -> float:
        try:
            return self.power_draw_mw[tx_power_dbm]
        except KeyError:
            raise TableLookupError(
                f"power_draw_mw has no entry for tx power {tx_power_dbm} dBm"
            ) from None


def resolve_low_data_rate(mode: str, spreading_factor: int) -> int:
    """Map a low data rate mode to the optimization flag for one SF."""
    if mode == "auto":
        return 1 if spreading_factor >= 11 else 0
    if mode == "on":
        return 1
    if mode == "off":
        return 0
    raise ValueError(f"unknown low_data_rate_mode {mode!r}")


def symbol_time(spreading_factor: int, bandwidth_hz: float) -> float:
    """Duration of one chirp symbol in seconds: 2^sf / bandwidth."""
    if spreading_factor not in SPREADING_FACTORS:
        raise ValueError(f"spreading factor {spreading_factor} outside 7..12")
    if bandwidth_hz <= 0:
        raise ValueError("bandwidth must be positive")
    return float(2**spreading_factor) / bandwidth_hz


def payload_symbols(cfg: TransmissionConfig, channel: ChannelParams) -> int:
    """Symbol count of the payload part of an uplink frame.

    Integer arithmetic throughout; the ceiling never suffers float rounding.
    """
    sf = cfg.spreading_factor
    ldr = resolve_low_data_rate(channel.low_data_rate_mode, sf)
    denom = 4 * (sf - 2 * ldr)
    if denom <= 0:
        raise ValueError("low data rate optimization needs sf - 2*DE > 0")
    numer = (
        8 * channel.payload_bytes
        - 4 * sf
        + 28
        + 16 * channel.crc_enabled
        - 20 * channel.header_disabled
    )
    blocks = -(-numer // denom)  # ceil for ints of either sign
    return 8 + max(blocks * (cfg.coding_rate + 4), 0)


def preamble_time(spreading_factor: int, channel: ChannelParams) -> float:
    """Preamble duration in seconds: (n_preamble + 4.25) symbols."""
    t_sym = symbol_time(spreading_factor, channel.bandwidth_hz)
    return (channel.preamble_symbols + 4.25) * t_sym


def time_on_air(cfg: TransmissionConfig, channel: ChannelParams) -> float:
    """Total frame duration in seconds: preamble plus payload symbols."""
    t_sym = symbol_time(cfg.spreading_factor, channel.bandwidth_hz)
    n_payload = payload_symbols(cfg, channel)
    return preamble_time(cfg.spreading_factor, channel) + n_payload * t_sym


def mean_rss(tx_power_dbm: float, distance_m: float, path_loss: PathLossParams) -> float:
    """Expected received signal strength in dBm, shadowing excluded.

    Distances below the reference distance are extrapolated with the same
    log-distance slope; a zero distance is undefined and rejected.
    """
    if distance_m <= 0:
        raise ValueError("distance must be positive")
    return (
        tx_power_dbm
        - path_loss.ref_loss_db
        - 10.0 * path_loss.exponent * math.log10(distance_m / path_loss.ref_distance_m)
    )


def snr_from_noise_floor(rss_dbm: float, channel: ChannelParams) -> float:
    """Raw SNR relative to an explicitly configured noise floor."""
    if channel.noise_floor_dbm is None:
        raise ValueError("channel has no noise_floor_dbm configured")
    return rss_dbm - channel.noise_floor_dbm
