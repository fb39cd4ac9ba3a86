# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled reception-decision sweep.

Mirrors the numpy backend exactly: identical inputs give bit-identical
outputs, since both perform the same float64 comparisons in the same
per-element order.
"""

import numpy as np

cimport numpy as cnp


def decide_receptions(
    cnp.int64_t[::1] ed_of_packet,
    double[:, ::1] rss_mean,
    double[::1] threshold_by_ed,
    double[:, ::1] fading,
    cnp.int64_t[::1] pair_victim,
    cnp.int64_t[::1] pair_interferer,
    double[:, ::1] sir_noise,
    double[::1] sir_threshold_pair,
):
    """Per-packet, per-gateway delivery decisions; see the pure backend."""
    cdef Py_ssize_t n_packets = ed_of_packet.shape[0]
    cdef Py_ssize_t n_gw = rss_mean.shape[1]
    cdef Py_ssize_t n_pairs = pair_victim.shape[0]
    cdef Py_ssize_t t, k, p, ed, victim, interferer

    out = np.zeros((n_packets, n_gw), dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] survive = out

    for t in range(n_packets):
        ed = ed_of_packet[t]
        for k in range(n_gw):
            if rss_mean[ed, k] - fading[t, k] >= threshold_by_ed[ed]:
                survive[t, k] = 1

    for p in range(n_pairs):
        t = pair_victim[p]
        victim = ed_of_packet[t]
        interferer = ed_of_packet[pair_interferer[p]]
        for k in range(n_gw):
            if survive[t, k] and (
                rss_mean[victim, k] - rss_mean[interferer, k] + sir_noise[p, k]
                < sir_threshold_pair[p]
            ):
                survive[t, k] = 0

    return out.view(np.bool_)
