"""Adaptive data rate control loop and link-loss recovery backoff.

Two state machines cooperate per device: the network-server side collects
SNR measurements and reassigns (spreading factor, tx power) every time its
buffer fills; the device side counts unacknowledged uplinks and falls back
to more robust settings when the link goes quiet. run_adr_simulation wires
both to the sampling model over a merged uplink timeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analytics import Evaluator
from .network import NetworkConfig
from .radio import RadioTables
from .sampling import poisson_arrivals, snr_offset_db

UPLINK_ATTEMPT = "uplink_attempt"
ADR_RECEIVED = "adr_received"
REQUEST_ACKNOWLEDGED = "request_acknowledged"

# The controller walks the power grid in fixed 2 dB moves, one move per
# 3 dB of spare link margin.
_POWER_STEP_DBM = 2.0
_MARGIN_STEP_DB = 3.0
_MIN_SF = 7
_MAX_SF = 12


@dataclass
class AdrState:
    """Network-server view of one device's link quality."""

    current_sf: int
    current_power_dbm: float
    tables: RadioTables = field(default_factory=RadioTables)
    device_margin_db: float = 10.0
    buffer_capacity: int = 20
    snr_buffer: list[float] = field(default_factory=list)

    def __post_init__(self) -> None:
        levels = self.tables.power_levels_dbm
        if len(levels) > 1 and any(
            abs((b - a) - _POWER_STEP_DBM) > 1e-12 for a, b in zip(levels, levels[1:])
        ):
            raise ValueError("rate control needs a power grid spaced 2 dBm apart")
        if self.current_power_dbm not in self.tables.power_draw_mw:
            raise ValueError(
                f"tx power {self.current_power_dbm} dBm not in the configured power set"
            )
        if not _MIN_SF <= self.current_sf <= _MAX_SF:
            raise ValueError(f"spreading factor {self.current_sf} outside 7..12")


def adr_reset(state: AdrState) -> None:
    """Drop collected measurements without touching the assignment."""
    state.snr_buffer.clear()


def adr_add_measurement(state: AdrState, snr_db: float) -> tuple[int, float] | None:
    """Record one uplink's best SNR; on a full buffer, recompute and return
    the (spreading factor, power) assignment and start a fresh buffer.

    The spare margin over the demodulation floor (minus the configured
    device margin) is spent in 3 dB steps: first on lowering the spreading
    factor, then on lowering power; a deficit instead raises power.
    """
    state.snr_buffer.append(snr_db)
    if len(state.snr_buffer) < state.buffer_capacity:
        return None

    margin = (
        max(state.snr_buffer)
        - state.tables.min_snr(state.current_sf)
        - state.device_margin_db
    )
    steps = int(margin / _MARGIN_STEP_DB)  # truncates toward zero
    sf = state.current_sf
    power = state.current_power_dbm
    levels = state.tables.power_levels_dbm
    power_min, power_max = levels[0], levels[-1]

    while steps > 0 and sf > _MIN_SF:
        sf -= 1
        steps -= 1
    while steps > 0 and power > power_min:
        power -= _POWER_STEP_DBM
        steps -= 1
    while steps < 0 and power < power_max:
        power += _POWER_STEP_DBM
        steps += 1

    state.current_sf = sf
    state.current_power_dbm = power
    state.snr_buffer.clear()
    return sf, power


@dataclass
class BackoffState:
    """Device-side counter of uplinks since the last acknowledged downlink."""

    limit: int = 64
    delay: int = 32
    ack_counter: int = 0

    def __post_init__(self) -> None:
        if self.limit < 1 or self.delay < 1:
            raise ValueError("backoff limit and delay must be positive")


def backoff_step(
    state: BackoffState,
    event: str,
    sf: int,
    power_dbm: float,
    *,
    max_sf: int = _MAX_SF,
    max_power_dbm: float = 16.0,
) -> tuple[int, float]:
    """Advance the backoff machine by one event; returns the possibly
    adjusted (spreading factor, power).

    An attempt that brings the counter to limit + delay jumps power to the
    maximum; each further full delay of silence raises the spreading factor
    one step, capped. Receiving a parameter downlink resets the counter; an
    acknowledged parameter request resets it only once past the limit.
    """
    if event == UPLINK_ATTEMPT:
        state.ack_counter += 1
        edge = state.limit + state.delay
        if state.ack_counter == edge:
            power_dbm = max_power_dbm
        elif (
            state.ack_counter > edge
            and (state.ack_counter - state.limit) % state.delay == 0
        ):
            sf = min(sf + 1, max_sf)
    elif event == ADR_RECEIVED:
        state.ack_counter = 0
    elif event == REQUEST_ACKNOWLEDGED:
        if state.ack_counter > state.limit:
            state.ack_counter = 0
    else:
        raise ValueError(f"unknown backoff event {event!r}")
    return sf, power_dbm


@dataclass(frozen=True)
class TraceEvent:
    """One row of the simulation trace."""

    time_s: float
    ed: int
    event: str  # "uplink", "adr", or "backoff"
    sf: int
    power_dbm: float
    snr_db: float | None


@dataclass(frozen=True)
class AdrSimResult:
    events: list[TraceEvent]
    final_config: NetworkConfig
    attempts: np.ndarray  # (N,) uplinks tried
    received: np.ndarray  # (N,) uplinks seen by at least one gateway


def run_adr_simulation(
    cfg: NetworkConfig,
    duration_s: float,
    seed: int,
    *,
    ack_limit: int = 64,
    ack_delay: int = 32,
    device_margin_db: float = 10.0,
) -> AdrSimResult:
    """Simulate both control loops over a merged uplink timeline.

    Per uplink, in order: the reception is sampled with the device's
    current settings, a received frame feeds the network-server controller
    (best SNR across gateways), the device backoff counter advances, and
    any parameter change takes effect from the next uplink. Deterministic
    for a fixed seed: arrivals are drawn per device in index order, then
    the event loop consumes one fade and one uniform per gateway per uplink.
    """
    evaluator = Evaluator(cfg)
    n, k = cfg.n_ed, cfg.n_gw
    rng = np.random.default_rng(seed)

    streams = [poisson_arrivals(rng, cfg.packet_rate_hz, duration_s) for _ in range(n)]
    times = np.concatenate(streams) if streams else np.empty(0)
    owners = np.concatenate(
        [np.full(len(s), i, dtype=np.int64) for i, s in enumerate(streams)]
    ) if streams else np.empty(0, dtype=np.int64)
    order = np.lexsort((owners, times))
    times, owners = times[order], owners[order]

    adr_states = [
        AdrState(int(cfg.ed_sf[i]), float(cfg.ed_power_dbm[i]), cfg.tables, device_margin_db)
        for i in range(n)
    ]
    backoffs = [BackoffState(ack_limit, ack_delay) for _ in range(n)]
    max_power = cfg.tables.power_levels_dbm[-1]
    offset = snr_offset_db(cfg.tables)
    sigma = cfg.path_loss.shadow_sigma_db

    events: list[TraceEvent] = []
    attempts = np.zeros(n, dtype=np.int64)
    received_counts = np.zeros(n, dtype=np.int64)

    for t, ed in zip(times, owners):
        ed = int(ed)
        sf_used = int(evaluator.sf[ed])
        power_used = float(evaluator.power[ed])
        attempts[ed] += 1

        fades = rng.normal(0.0, sigma, size=k)
        uniforms = rng.random(size=k)
        rss = evaluator.z[ed] - fades
        delivered = (rss >= evaluator.eta[ed]) & (uniforms < evaluator.survive[ed])
        got_through = bool(delivered.any())
        snr_max = float(rss[delivered].max() - offset) if got_through else None
        events.append(TraceEvent(float(t), ed, "uplink", sf_used, power_used, snr_max))

        assignment = None
        if got_through:
            received_counts[ed] += 1
            server = adr_states[ed]
            # The server reads the device's actual settings off the frame.
            server.current_sf = sf_used
            server.current_power_dbm = power_used
            assignment = adr_add_measurement(server, snr_max)

        state = backoffs[ed]
        recovered_sf, recovered_power = backoff_step(
            state, UPLINK_ATTEMPT, sf_used, power_used, max_power_dbm=max_power
        )
        if got_through:
            if state.ack_counter > state.limit:
                backoff_step(state, REQUEST_ACKNOWLEDGED, sf_used, power_used)
            backoff_step(state, ADR_RECEIVED, sf_used, power_used)

        next_sf, next_power = sf_used, power_used
        if assignment is not None:
            next_sf, next_power = assignment
            events.append(TraceEvent(float(t), ed, "adr", next_sf, next_power, None))
        if (recovered_sf, recovered_power) != (sf_used, power_used):
            if assignment is None:
                # A concurrent server assignment outranks local recovery.
                next_sf, next_power = recovered_sf, recovered_power
            events.append(
                TraceEvent(float(t), ed, "backoff", recovered_sf, recovered_power, None)
            )
        if (next_sf, next_power) != (sf_used, power_used):
            evaluator.set_device(ed, sf=next_sf, power_dbm=next_power)

    final = cfg.replace_assignment(evaluator.sf, evaluator.power)
    return AdrSimResult(
        events=events,
        final_config=final,
        attempts=attempts,
        received=received_counts,
    )
