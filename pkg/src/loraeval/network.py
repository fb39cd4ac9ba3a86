"""Network scenario container, validation, and random scenario generation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .radio import (
    SPREADING_FACTORS,
    ChannelParams,
    PathLossParams,
    RadioTables,
)


@dataclass
class ConfigViolation:
    """One validation failure, addressed to the offending entity."""

    location: str
    index: int | None
    message: str

    def __str__(self) -> str:
        if self.index is None:
            return f"{self.location}: {self.message}"
        return f"{self.location}[{self.index}]: {self.message}"


class InvalidConfigError(ValueError):
    """Raised when an operation receives a config that fails validation."""

    def __init__(self, violations: list[ConfigViolation]):
        self.violations = violations
        super().__init__("; ".join(str(v) for v in violations))


@dataclass(eq=False)
class NetworkConfig:
    """Full description of one uplink network to evaluate.

    Arrays are treated as immutable once the config is built; evaluation
    results may be cached against the config object identity.
    """

    ed_positions: np.ndarray  # (N, 2) metres
    gw_positions: np.ndarray  # (K, 2) metres
    ed_sf: np.ndarray  # (N,) spreading factors
    ed_power_dbm: np.ndarray  # (N,) transmit powers
    channel: ChannelParams = field(default_factory=ChannelParams)
    path_loss: PathLossParams = field(default_factory=PathLossParams)
    tables: RadioTables = field(default_factory=RadioTables)
    packet_rate_hz: float = 0.001

    def __post_init__(self) -> None:
        self.ed_positions = np.asarray(self.ed_positions, dtype=np.float64)
        self.gw_positions = np.asarray(self.gw_positions, dtype=np.float64)
        self.ed_sf = np.asarray(self.ed_sf, dtype=np.int64)
        self.ed_power_dbm = np.asarray(self.ed_power_dbm, dtype=np.float64)

    @property
    def n_ed(self) -> int:
        return self.ed_positions.shape[0]

    @property
    def n_gw(self) -> int:
        return self.gw_positions.shape[0]

    def replace_assignment(self, ed_sf: np.ndarray, ed_power_dbm: np.ndarray) -> "NetworkConfig":
        """New config sharing everything but the per-device radio settings."""
        return NetworkConfig(
            ed_positions=self.ed_positions,
            gw_positions=self.gw_positions,
            ed_sf=np.asarray(ed_sf, dtype=np.int64).copy(),
            ed_power_dbm=np.asarray(ed_power_dbm, dtype=np.float64).copy(),
            channel=self.channel,
            path_loss=self.path_loss,
            tables=self.tables,
            packet_rate_hz=self.packet_rate_hz,
        )


def distance_matrix(cfg: NetworkConfig) -> np.ndarray:
    """Euclidean device-to-gateway distances, shape (N, K)."""
    delta = cfg.ed_positions[:, None, :] - cfg.gw_positions[None, :, :]
    return np.sqrt((delta**2).sum(axis=-1))


def validate(cfg: NetworkConfig) -> list[ConfigViolation]:
    """Collect every violation instead of stopping at the first."""
    issues: list[ConfigViolation] = []

    def bad(location: str, index: int | None, message: str) -> None:
        issues.append(ConfigViolation(location, index, message))

    if cfg.ed_positions.ndim != 2 or cfg.ed_positions.shape[1] != 2:
        bad("ed_positions", None, "expected shape (N, 2)")
        return issues
    if cfg.gw_positions.ndim != 2 or cfg.gw_positions.shape[1] != 2:
        bad("gw_positions", None, "expected shape (K, 2)")
        return issues

    n, k = cfg.n_ed, cfg.n_gw
    if n < 1:
        bad("ed_positions", None, "need at least one end device")
    if k < 1:
        bad("gw_positions", None, "need at least one gateway")
    if cfg.ed_sf.shape != (n,):
        bad("ed_sf", None, f"expected shape ({n},), got {cfg.ed_sf.shape}")
        return issues
    if cfg.ed_power_dbm.shape != (n,):
        bad("ed_power_dbm", None, f"expected shape ({n},), got {cfg.ed_power_dbm.shape}")
        return issues

    if not np.all(np.isfinite(cfg.ed_positions)):
        for i in np.flatnonzero(~np.isfinite(cfg.ed_positions).all(axis=1)):
            bad("ed_positions", int(i), "coordinates must be finite")
    if not np.all(np.isfinite(cfg.gw_positions)):
        for i in np.flatnonzero(~np.isfinite(cfg.gw_positions).all(axis=1)):
            bad("gw_positions", int(i), "coordinates must be finite")

    for i in np.flatnonzero(~np.isin(cfg.ed_sf, SPREADING_FACTORS)):
        bad("ed_sf", int(i), f"spreading factor {int(cfg.ed_sf[i])} outside 7..12")
    power_levels = np.array(cfg.tables.power_levels_dbm)
    for i in np.flatnonzero(~np.isin(cfg.ed_power_dbm, power_levels)):
        bad(
            "ed_power_dbm",
            int(i),
            f"tx power {cfg.ed_power_dbm[i]} dBm not in the configured power set",
        )

    if n >= 1 and k >= 1 and np.all(np.isfinite(cfg.ed_positions)):
        dist = distance_matrix(cfg)
        for i, j in zip(*np.nonzero(dist == 0.0)):
            bad(
                "ed_positions",
                int(i),
                f"zero ED-GW distance: device sits exactly on gateway {int(j)}",
            )

    # Zero rate is a meaningful degenerate case (no traffic, no collisions);
    # only negative or non-finite rates are rejected.
    if not np.isfinite(cfg.packet_rate_hz) or cfg.packet_rate_hz < 0:
        bad("packet_rate_hz", None, "packet rate must be finite and non-negative")

    return issues


def validate_or_raise(cfg: NetworkConfig) -> None:
    issues = validate(cfg)
    if issues:
        raise InvalidConfigError(issues)


def generate_scenario(
    n_ed: int,
    n_gw: int,
    area_m: float,
    seed: int,
    *,
    channel: ChannelParams | None = None,
    path_loss: PathLossParams | None = None,
    tables: RadioTables | None = None,
    packet_rate_hz: float = 0.001,
) -> NetworkConfig:
    """Uniform random scenario on an area_m x area_m square.

    Draw order is fixed (ED positions, GW positions, spreading factors,
    powers) so a seed pins the whole scenario. The generator is PCG64 via
    numpy.random.default_rng, which is stable across platforms.
    """
    if n_ed < 1 or n_gw < 1:
        raise ValueError("need at least one device and one gateway")
    if area_m <= 0:
        raise ValueError("area side must be positive")
    tables = tables if tables is not None else RadioTables()
    rng = np.random.default_rng(seed)
    ed_positions = rng.uniform(0.0, area_m, size=(n_ed, 2))
    gw_positions = rng.uniform(0.0, area_m, size=(n_gw, 2))
    ed_sf = rng.choice(np.array(SPREADING_FACTORS, dtype=np.int64), size=n_ed)
    ed_power = rng.choice(np.array(tables.power_levels_dbm, dtype=np.float64), size=n_ed)
    return NetworkConfig(
        ed_positions=ed_positions,
        gw_positions=gw_positions,
        ed_sf=ed_sf,
        ed_power_dbm=ed_power,
        channel=channel if channel is not None else ChannelParams(),
        path_loss=path_loss if path_loss is not None else PathLossParams(),
        tables=tables,
        packet_rate_hz=packet_rate_hz,
    )
