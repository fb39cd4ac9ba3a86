"""Closed-form uplink evaluation: detection, collision survival, PDR, energy.

Everything here is deterministic numpy over the network matrices. Shapes
follow the convention (N devices, K gateways): per-link quantities are
(N, K), per-pair quantities (N, N) or (N, N, K) with the first axis the
transmission under reception and the second the interferer.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from .network import NetworkConfig, distance_matrix, validate_or_raise
from .radio import TransmissionConfig, symbol_time, time_on_air

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class EvaluationResult:
    """Per-link and per-device outcomes of one network evaluation."""

    rss_mean: np.ndarray  # (N, K) dBm, shadowing excluded
    detect_prob: np.ndarray  # (N, K) P(received power above sensitivity)
    survive_prob: np.ndarray  # (N, K) P(no colliding uplink corrupts the frame)
    pdr_gw: np.ndarray  # (N, K) per-gateway delivery probability
    pdr: np.ndarray  # (N,) delivery probability over all gateways
    ee: np.ndarray  # (N,) delivered bits per mJ of radio energy
    toa_s: np.ndarray  # (N,) frame airtime, seconds

    @property
    def n_ed(self) -> int:
        return self.pdr.shape[0]

    @property
    def n_gw(self) -> int:
        return self.pdr_gw.shape[1]


def toa_vector(cfg: NetworkConfig) -> np.ndarray:
    """Airtime per device, seconds."""
    by_sf = {
        int(sf): time_on_air(
            TransmissionConfig(int(sf), cfg.tables.power_levels_dbm[0], cfg.channel.coding_rate),
            cfg.channel,
        )
        for sf in np.unique(cfg.ed_sf)
    }
    return np.array([by_sf[int(sf)] for sf in cfg.ed_sf])


def symbol_time_vector(cfg: NetworkConfig) -> np.ndarray:
    """Symbol duration per device, seconds."""
    return np.array([symbol_time(int(sf), cfg.channel.bandwidth_hz) for sf in cfg.ed_sf])


def rss_mean_matrix(cfg: NetworkConfig) -> np.ndarray:
    """Mean received power per device-gateway link, dBm."""
    dist = distance_matrix(cfg)
    pl = cfg.path_loss
    loss = pl.ref_loss_db + 10.0 * pl.exponent * np.log10(dist / pl.ref_distance_m)
    return cfg.ed_power_dbm[:, None] - loss


def sensitivity_vector(cfg: NetworkConfig) -> np.ndarray:
    """Receiver sensitivity threshold per device, dBm."""
    return np.array([cfg.tables.sensitivity(int(sf)) for sf in cfg.ed_sf])


def sir_threshold_matrix(cfg: NetworkConfig) -> np.ndarray:
    """Capture threshold table as a (6, 6) array indexed by sf - 7."""
    return np.asarray(cfg.tables.sir_threshold_db, dtype=np.float64)


def energy_draw_vector(cfg: NetworkConfig) -> np.ndarray:
    """Radio power draw per device while transmitting, mW."""
    return np.array([cfg.tables.power_draw(float(p)) for p in cfg.ed_power_dbm])


def _detection(rss_mean: np.ndarray, threshold: np.ndarray, sigma: float) -> np.ndarray:
    """P(mean power minus a Normal(0, sigma) fade stays above threshold)."""
    if sigma == 0.0:
        return np.where(rss_mean >= threshold, 1.0, 0.0)
    # erfc form avoids cancellation for links far below threshold.
    return 0.5 * erfc((threshold - rss_mean) / (_SQRT2 * sigma))


def _corruption(delta_rss: np.ndarray, sir_threshold: np.ndarray, sigma: float) -> np.ndarray:
    """P(the interferer defeats capture), with both fades folded into one
    Normal of standard deviation 2*sigma."""
    if sigma == 0.0:
        return np.where(delta_rss < sir_threshold, 1.0, 0.0)
    return 0.5 * erfc((delta_rss - sir_threshold) / (2.0 * _SQRT2 * sigma))


def detection_matrix(cfg: NetworkConfig) -> np.ndarray:
    """(N, K) probability that each uplink clears the sensitivity floor."""
    return _detection(
        rss_mean_matrix(cfg),
        sensitivity_vector(cfg)[:, None],
        cfg.path_loss.shadow_sigma_db,
    )


def interference_interval(i: int, j: int, cfg: NetworkConfig) -> float:
    """Length of the window, seconds, in which a start of an uplink from
    device j can overlap the collision-vulnerable part of a frame from
    device i (its last 5 preamble symbols onward)."""
    if i == j:
        raise ValueError("interference window needs two distinct devices")
    toa = toa_vector(cfg)
    offset = (cfg.channel.preamble_symbols - 5) * symbol_time(
        int(cfg.ed_sf[i]), cfg.channel.bandwidth_hz
    )
    return float(toa[i] + toa[j] - offset)


def interference_prob(i: int, j: int, cfg: NetworkConfig) -> float:
    """P(device j starts at least one frame inside the window of device i)."""
    window = interference_interval(i, j, cfg)
    return -math.expm1(-cfg.packet_rate_hz * window)


def capture_corruption_prob(i: int, j: int, k: int, cfg: NetworkConfig) -> float:
    """P(an overlapping frame from j corrupts i at gateway k)."""
    if i == j:
        raise ValueError("capture comparison needs two distinct devices")
    z = rss_mean_matrix(cfg)
    omega = cfg.tables.sir_threshold(int(cfg.ed_sf[i]), int(cfg.ed_sf[j]))
    return float(
        _corruption(z[i, k] - z[j, k], omega, cfg.path_loss.shadow_sigma_db)
    )


def _pair_factor_tensor(
    toa: np.ndarray,
    vuln_offset: np.ndarray,
    rss_mean: np.ndarray,
    sf_index: np.ndarray,
    sir_table: np.ndarray,
    rate_hz: float,
    sigma: float,
) -> np.ndarray:
    """(N, N, K) per-interferer survival factors, ones on the diagonal."""
    n = toa.shape[0]
    window = toa[:, None] + toa[None, :] - vuln_offset[:, None]
    overlap = -np.expm1(-rate_hz * window)
    delta = rss_mean[:, None, :] - rss_mean[None, :, :]
    omega = sir_table[sf_index[:, None], sf_index[None, :]]
    factors = 1.0 - overlap[:, :, None] * _corruption(delta, omega[:, :, None], sigma)
    idx = np.arange(n)
    factors[idx, idx, :] = 1.0
    return factors


def survival_matrix(cfg: NetworkConfig) -> np.ndarray:
    """(N, K) probability that no concurrent uplink corrupts the frame."""
    n, k = cfg.n_ed, cfg.n_gw
    if n == 1 or cfg.packet_rate_hz == 0.0:
        return np.ones((n, k))
    toa = toa_vector(cfg)
    vuln_offset = (cfg.channel.preamble_symbols - 5) * symbol_time_vector(cfg)
    factors = _pair_factor_tensor(
        toa,
        vuln_offset,
        rss_mean_matrix(cfg),
        (cfg.ed_sf - 7).astype(np.intp),
        sir_threshold_matrix(cfg),
        cfg.packet_rate_hz,
        cfg.path_loss.shadow_sigma_db,
    )
    return np.clip(factors.prod(axis=1), 0.0, 1.0)


def compute_result(cfg: NetworkConfig) -> EvaluationResult:
    """Validate and evaluate a config without consulting the result cache."""
    validate_or_raise(cfg)
    rss = rss_mean_matrix(cfg)
    detect = _detection(rss, sensitivity_vector(cfg)[:, None], cfg.path_loss.shadow_sigma_db)
    survive = survival_matrix(cfg)
    pdr_gw = detect * survive
    pdr = 1.0 - np.prod(1.0 - pdr_gw, axis=1)
    toa = toa_vector(cfg)
    ee = 8.0 * cfg.channel.payload_bytes * pdr / (energy_draw_vector(cfg) * toa)
    result = EvaluationResult(
        rss_mean=rss,
        detect_prob=detect,
        survive_prob=survive,
        pdr_gw=pdr_gw,
        pdr=pdr,
        ee=ee,
        toa_s=toa,
    )
    for arr in (rss, detect, survive, pdr_gw, pdr, ee, toa):
        arr.setflags(write=False)
    return result


_RESULT_CACHE: "weakref.WeakKeyDictionary[NetworkConfig, EvaluationResult]" = (
    weakref.WeakKeyDictionary()
)


def evaluate(cfg: NetworkConfig) -> EvaluationResult:
    """Evaluate a network, reusing the cached result for a config object
    that was already evaluated. Configs are treated as immutable."""
    cached = _RESULT_CACHE.get(cfg)
    if cached is None:
        cached = compute_result(cfg)
        _RESULT_CACHE[cfg] = cached
    return cached


class Evaluator:
    """Incremental evaluation for workloads that retune single devices.

    Keeps the pairwise survival factors cached; changing one device only
    recomputes its row and column before re-reducing the products.
    """

    def __init__(self, cfg: NetworkConfig):
        validate_or_raise(cfg)
        self.cfg = cfg
        self.sf = cfg.ed_sf.copy()
        self.power = cfg.ed_power_dbm.copy()
        self._dist = distance_matrix(cfg)
        self._sir = sir_threshold_matrix(cfg)
        self._sigma = cfg.path_loss.shadow_sigma_db
        self._rate = cfg.packet_rate_hz
        self._refresh_all()

    def _device_scalars(self, sf: int) -> tuple[float, float, float]:
        t_sym = symbol_time(sf, self.cfg.channel.bandwidth_hz)
        toa = time_on_air(
            TransmissionConfig(sf, self.cfg.tables.power_levels_dbm[0], self.cfg.channel.coding_rate),
            self.cfg.channel,
        )
        return toa, (self.cfg.channel.preamble_symbols - 5) * t_sym, self.cfg.tables.sensitivity(sf)

    def _refresh_all(self) -> None:
        pl = self.cfg.path_loss
        loss = pl.ref_loss_db + 10.0 * pl.exponent * np.log10(self._dist / pl.ref_distance_m)
        self.z = self.power[:, None] - loss
        scalars = [self._device_scalars(int(sf)) for sf in self.sf]
        self.toa = np.array([s[0] for s in scalars])
        self.vuln_offset = np.array([s[1] for s in scalars])
        self.eta = np.array([s[2] for s in scalars])
        self.detect = _detection(self.z, self.eta[:, None], self._sigma)
        self._factors = _pair_factor_tensor(
            self.toa,
            self.vuln_offset,
            self.z,
            (self.sf - 7).astype(np.intp),
            self._sir,
            self._rate,
            self._sigma,
        )
        self._reduce()

    def _reduce(self) -> None:
        self.survive = np.clip(self._factors.prod(axis=1), 0.0, 1.0)

    def set_device(self, i: int, sf: int | None = None, power_dbm: float | None = None) -> None:
        """Retune one device and refresh the affected row and column."""
        if sf is not None:
            if sf not in (7, 8, 9, 10, 11, 12):
                raise ValueError(f"spreading factor {sf} outside 7..12")
            self.sf[i] = sf
        if power_dbm is not None:
            if power_dbm not in self.cfg.tables.power_draw_mw:
                raise ValueError(f"tx power {power_dbm} dBm outside the configured set")
            self.power[i] = power_dbm

        pl = self.cfg.path_loss
        loss = pl.ref_loss_db + 10.0 * pl.exponent * np.log10(self._dist[i] / pl.ref_distance_m)
        self.z[i] = self.power[i] - loss
        self.toa[i], self.vuln_offset[i], self.eta[i] = self._device_scalars(int(self.sf[i]))
        self.detect[i] = _detection(self.z[i], self.eta[i], self._sigma)

        sf_idx = (self.sf - 7).astype(np.intp)
        # Row: device i as the transmission under reception.
        window_row = self.toa[i] + self.toa - self.vuln_offset[i]
        overlap_row = -np.expm1(-self._rate * window_row)
        omega_row = self._sir[sf_idx[i], sf_idx]
        delta_row = self.z[i][None, :] - self.z
        self._factors[i] = 1.0 - overlap_row[:, None] * _corruption(
            delta_row, omega_row[:, None], self._sigma
        )
        # Column: device i as the interferer.
        window_col = self.toa + self.toa[i] - self.vuln_offset
        overlap_col = -np.expm1(-self._rate * window_col)
        omega_col = self._sir[sf_idx, sf_idx[i]]
        delta_col = self.z - self.z[i][None, :]
        self._factors[:, i] = 1.0 - overlap_col[:, None] * _corruption(
            delta_col, omega_col[:, None], self._sigma
        )
        self._factors[i, i, :] = 1.0
        self._reduce()

    def result(self) -> EvaluationResult:
        pdr_gw = self.detect * self.survive
        pdr = 1.0 - np.prod(1.0 - pdr_gw, axis=1)
        draw = np.array([self.cfg.tables.power_draw(float(p)) for p in self.power])
        ee = 8.0 * self.cfg.channel.payload_bytes * pdr / (draw * self.toa)
        return EvaluationResult(
            rss_mean=self.z.copy(),
            detect_prob=self.detect.copy(),
            survive_prob=self.survive.copy(),
            pdr_gw=pdr_gw,
            pdr=pdr,
            ee=ee,
            toa_s=self.toa.copy(),
        )
