"""Packet-level Monte Carlo cross-check of the analytical model.

Simulates the actual uplink timeline: every device transmits on its own
Poisson schedule, every packet gets an independent fade per gateway, and
any packet overlapping the vulnerable part of another (its last five
preamble symbols onward) triggers a capture comparison with a fresh noise
draw of standard deviation 2 sigma, matching the analytical convention of
folding both fades into one term. Empirical delivery ratios converge to
the closed-form values as the simulated duration grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import DEFAULT_BACKEND, get_backend
from .analytics import (
    energy_draw_vector,
    rss_mean_matrix,
    sensitivity_vector,
    sir_threshold_matrix,
    symbol_time_vector,
    toa_vector,
)
from .network import NetworkConfig, validate_or_raise
from .sampling import poisson_arrivals


@dataclass(frozen=True)
class OracleResult:
    """Empirical per-device outcomes of one simulated timeline."""

    sent: np.ndarray  # (N,) packets fully inside the horizon
    received: np.ndarray  # (N,) packets delivered at >= 1 gateway
    received_gw: np.ndarray  # (N, K) deliveries per gateway
    pdr: np.ndarray  # (N,) received / sent
    ee: np.ndarray  # (N,) delivered bits per mJ, from the empirical pdr
    duration_s: float
    backend: str


def mae_sde(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Mean absolute error and population standard deviation of (a - b)."""
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    return float(np.mean(np.abs(diff))), float(np.std(diff))


def _collision_pairs(
    starts: np.ndarray,
    ed_of_packet: np.ndarray,
    toa_by_ed: np.ndarray,
    vuln_offset_by_ed: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Indices (victim packet, interfering packet) for every overlap that
    intrudes past the victim's disposable preamble. Victims ascending.

    Packets of the same device never collide with each other: the
    analytical model compares distinct devices only.
    """
    n = starts.shape[0]
    if n == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    toa = toa_by_ed[ed_of_packet]
    ends = starts + toa
    vuln_start = starts + vuln_offset_by_ed[ed_of_packet]
    reach = float(toa_by_ed.max())

    # Candidate window per victim: starts within (vuln_start - max airtime,
    # end). The exact per-pair test below trims the conservative lower edge.
    hi = np.searchsorted(starts, ends, side="left")
    lo = np.searchsorted(starts, vuln_start - reach, side="left")
    counts = hi - lo
    victims = np.repeat(np.arange(n, dtype=np.int64), counts)
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    interferers = (
        np.arange(counts.sum(), dtype=np.int64)
        - np.repeat(offsets, counts)
        + np.repeat(lo, counts)
    )
    keep = (
        (interferers != victims)
        & (ed_of_packet[interferers] != ed_of_packet[victims])
        & (ends[interferers] > vuln_start[victims])
    )
    return victims[keep], interferers[keep]


def run_oracle(
    cfg: NetworkConfig,
    duration_s: float,
    seed: int,
    kernel: str = "auto",
) -> OracleResult:
    """Simulate duration_s seconds of traffic and tally deliveries.

    Deterministic for a fixed seed regardless of backend: arrivals are
    drawn per device in index order, then one fade per packet-gateway, then
    one capture noise per collision pair per gateway; the backends consume
    those arrays identically. Packets still in the air at the horizon are
    dropped from both tallies.
    """
    validate_or_raise(cfg)
    if duration_s <= 0:
        raise ValueError("duration must be positive")
    backend = get_backend(kernel)
    backend_name = kernel if kernel != "auto" else DEFAULT_BACKEND

    n_ed, n_gw = cfg.n_ed, cfg.n_gw
    toa = toa_vector(cfg)
    vuln_offset = (cfg.channel.preamble_symbols - 5) * symbol_time_vector(cfg)
    z = rss_mean_matrix(cfg)
    threshold = sensitivity_vector(cfg)
    sigma = cfg.path_loss.shadow_sigma_db
    sf_index = (cfg.ed_sf - 7).astype(np.intp)
    sir_table = sir_threshold_matrix(cfg)

    rng = np.random.default_rng(seed)
    streams = []
    for i in range(n_ed):
        t = poisson_arrivals(rng, cfg.packet_rate_hz, duration_s)
        streams.append(t[t + toa[i] <= duration_s])
    starts = np.concatenate(streams)
    ed_of_packet = np.concatenate(
        [np.full(len(s), i, dtype=np.int64) for i, s in enumerate(streams)]
    )
    order = np.lexsort((ed_of_packet, starts))
    starts, ed_of_packet = starts[order], ed_of_packet[order]
    n_packets = starts.shape[0]

    fading = rng.normal(0.0, sigma, size=(n_packets, n_gw))
    victims, interferers = _collision_pairs(starts, ed_of_packet, toa, vuln_offset)
    sir_noise = rng.normal(0.0, 2.0 * sigma, size=(victims.shape[0], n_gw))
    omega_pair = sir_table[
        sf_index[ed_of_packet[victims]], sf_index[ed_of_packet[interferers]]
    ]

    survive = backend.decide_receptions(
        ed_of_packet,
        z,
        threshold,
        fading,
        victims,
        interferers,
        sir_noise,
        omega_pair,
    )

    sent = np.bincount(ed_of_packet, minlength=n_ed)
    delivered_any = survive.any(axis=1)
    received = np.bincount(ed_of_packet[delivered_any], minlength=n_ed)
    received_gw = np.zeros((n_ed, n_gw), dtype=np.int64)
    for k in range(n_gw):
        received_gw[:, k] = np.bincount(ed_of_packet[survive[:, k]], minlength=n_ed)

    pdr = np.divide(received, sent, out=np.zeros(n_ed), where=sent > 0)
    ee = 8.0 * cfg.channel.payload_bytes * pdr / (energy_draw_vector(cfg) * toa)
    return OracleResult(
        sent=sent,
        received=received,
        received_gw=received_gw,
        pdr=pdr,
        ee=ee,
        duration_s=float(duration_s),
        backend=backend_name,
    )
