"""Vectorized numpy implementation of the reception-decision sweep."""

from __future__ import annotations

import numpy as np


def decide_receptions(
    ed_of_packet: np.ndarray,
    rss_mean: np.ndarray,
    threshold_by_ed: np.ndarray,
    fading: np.ndarray,
    pair_victim: np.ndarray,
    pair_interferer: np.ndarray,
    sir_noise: np.ndarray,
    sir_threshold_pair: np.ndarray,
) -> np.ndarray:
    """Per-packet, per-gateway delivery decisions.

    A packet is delivered at a gateway when its faded power clears the
    sensitivity threshold and every colliding packet loses the capture
    comparison. pair_victim must be sorted ascending (grouped per packet).
    """
    rss = rss_mean[ed_of_packet] - fading
    survive = rss >= threshold_by_ed[ed_of_packet][:, None]
    if pair_victim.size:
        delta = (
            rss_mean[ed_of_packet[pair_victim]]
            - rss_mean[ed_of_packet[pair_interferer]]
        )
        fail = (delta + sir_noise) < sir_threshold_pair[:, None]
        victims, starts = np.unique(pair_victim, return_index=True)
        any_fail = np.logical_or.reduceat(fail, starts, axis=0)
        survive[victims] &= ~any_fail
    return survive
