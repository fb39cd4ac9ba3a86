"""Random draws of per-uplink reception outcomes from the analytical model.

A sample either carries the received power of a delivered frame or the
MISSED sentinel (-inf), which serializes to null in JSON and an empty CSV
cell. All draws come from a caller-supplied numpy Generator; the package
never touches hidden entropy, so one seed pins every output byte.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytics import evaluate, sensitivity_vector
from .network import NetworkConfig
from .radio import SPREADING_FACTORS, RadioTables

MISSED = float("-inf")


@dataclass(frozen=True)
class SampledReception:
    """One sampled uplink outcome at one gateway."""

    rss_dbm: float
    snr_db: float

    @property
    def missed(self) -> bool:
        return self.rss_dbm == MISSED


@dataclass(frozen=True)
class SampledMatrices:
    """Per-link sampled outcomes for a whole network, MISSED where lost."""

    rss_dbm: np.ndarray  # (N, K)
    snr_db: np.ndarray  # (N, K)

    @property
    def missed(self) -> np.ndarray:
        return np.isneginf(self.rss_dbm)


def snr_offset_db(tables: RadioTables) -> float:
    """Conversion constant from sampled power to SNR: the configured
    sensitivities and demodulation floors averaged over all spreading
    factors. With the default tables this is -144.75 dB."""
    return sum(
        tables.sensitivity(sf) + tables.min_snr(sf) for sf in SPREADING_FACTORS
    ) / len(SPREADING_FACTORS)


def sample_snr(rss_dbm: float, tables: RadioTables) -> float:
    """SNR of one sampled reception; MISSED passes through."""
    if rss_dbm == MISSED:
        return MISSED
    return rss_dbm - snr_offset_db(tables)


def sample_rss(i: int, k: int, cfg: NetworkConfig, rng: np.random.Generator) -> SampledReception:
    """Draw one uplink outcome for device i at gateway k.

    Consumes one Normal fade and one uniform (for the collision survival
    Bernoulli) regardless of outcome, keeping the stream position
    independent of the drawn values.
    """
    result = evaluate(cfg)
    fade = rng.normal(0.0, cfg.path_loss.shadow_sigma_db)
    u = rng.random()
    rss = result.rss_mean[i, k] - fade
    threshold = cfg.tables.sensitivity(int(cfg.ed_sf[i]))
    if rss >= threshold and u < result.survive_prob[i, k]:
        return SampledReception(float(rss), float(rss) - snr_offset_db(cfg.tables))
    return SampledReception(MISSED, MISSED)


def poisson_arrivals(rng: np.random.Generator, rate_hz: float, duration_s: float) -> np.ndarray:
    """Event times of one Poisson stream on [0, duration), sorted."""
    if rate_hz <= 0.0 or duration_s <= 0.0:
        return np.empty(0)
    expected = rate_hz * duration_s
    times = np.empty(0)
    last = 0.0
    while last < duration_s:
        draw = max(int(expected - len(times)) + 1, 64)
        gaps = rng.exponential(1.0 / rate_hz, size=draw)
        times = np.concatenate([times, last + np.cumsum(gaps)])
        last = times[-1]
    return times[times < duration_s]


def sample_matrix(cfg: NetworkConfig, rng: np.random.Generator) -> SampledMatrices:
    """Draw one independent outcome per device-gateway link.

    Matrix draw order is fixed: all fades first, then all survival
    uniforms, each in row-major layout.
    """
    result = evaluate(cfg)
    n, k = result.pdr_gw.shape
    fades = rng.normal(0.0, cfg.path_loss.shadow_sigma_db, size=(n, k))
    uniforms = rng.random(size=(n, k))
    rss = result.rss_mean - fades
    delivered = (rss >= sensitivity_vector(cfg)[:, None]) & (uniforms < result.survive_prob)
    rss = np.where(delivered, rss, MISSED)
    snr = np.where(delivered, rss - snr_offset_db(cfg.tables), MISSED)
    return SampledMatrices(rss_dbm=rss, snr_db=snr)
