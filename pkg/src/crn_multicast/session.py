"""One multicast session over a layered tree.

Per layer entry the transmitter announces the packet (MA), collects
acknowledgements (ACK), samples the channel state, computes per-receiver link
metrics over the idle channels, and selects one unified channel. A receiver
gets the packet iff a channel was selected and the packet's air time on that
channel fits within the channel's sampled availability. A destination is
delivered iff every hop on its root path succeeded, and its throughput is the
packet size divided by the summed air time along that path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .assignment import LinkMetrics, Scheme, select_channel
from .channel import ChannelModel, EventState, sample_event_state, sample_gain
from .phy import PhyParams, data_rate, pos, received_power, tx_time
from .topology import LayerSchedule, Topology, Tree, layerize


class TreeKind(Enum):
    SPT = "spt"
    MST = "mst"


@dataclass(frozen=True)
class SessionConfig:
    phy: PhyParams
    scheme: Scheme
    tree_kind: TreeKind
    destinations: frozenset[int]

    def __post_init__(self):
        if not self.destinations:
            raise ValueError("a session needs at least one destination")


@dataclass(frozen=True)
class HopRecord:
    """What happened at one transmitter event."""

    transmitter: int
    receivers: tuple[int, ...]
    chosen_channel: int | None
    tx_time: tuple[float, ...]  # per receiver, on the chosen channel; NaN if none
    success: tuple[bool, ...]
    available_time: float  # sampled availability of the chosen channel; NaN if none


@dataclass(frozen=True)
class SessionResult:
    delivered: dict[int, bool]
    throughput: dict[int, float]  # bits/s per destination; 0 when undelivered
    total_throughput: float
    avg_throughput: float  # total divided by the number of destinations
    pdr: float  # delivered fraction of destinations
    hops: tuple[HopRecord, ...]
    control_trace: tuple[tuple[str, int, int], ...]  # (kind, from, to), kind MA or ACK


@dataclass(frozen=True)
class EventDraw:
    """Pre-drawn randomness for one layer entry."""

    state: EventState
    gains: np.ndarray  # (receivers, channels) fading power gains


@dataclass(frozen=True)
class InjectedEvent:
    """Externally supplied metrics for one layer entry (test/replay seam)."""

    transmitter: int
    receivers: tuple[int, ...]
    idle: np.ndarray  # (M,) bool
    pos: np.ndarray  # (R, M); zero on busy channels
    tx_time: np.ndarray  # (R, M) s
    available_time: np.ndarray  # (M,) s; NaN on busy channels


def draw_events(schedule: LayerSchedule, model: ChannelModel, rng: np.random.Generator) -> list[EventDraw]:
    """Sample channel states and fading gains for every schedule entry up front,
    so several schemes can replay the same draws."""
    out = []
    for entry in schedule.entries:
        state = sample_event_state(model, rng)
        gains = sample_gain(rng, size=(len(entry.receivers), model.m))
        out.append(EventDraw(state, gains))
    return out


def link_metrics(phy: PhyParams, distances: np.ndarray, draw: EventDraw, mu_idle: np.ndarray, receivers) -> LinkMetrics:
    """Evaluate the link equations for one event: gains to received power to
    rate to air time to success probability, per receiver and channel."""
    pr = received_power(phy, distances[:, None], draw.gains)
    rate = data_rate(phy, pr)
    t = tx_time(phy, rate)
    p = np.where(draw.state.idle[None, :], pos(t, mu_idle[None, :]), 0.0)
    return LinkMetrics(tuple(receivers), p, rate, t, mu_idle, draw.state.idle)


def execute_schedule(
    schedule: LayerSchedule,
    per_event: list[tuple[LinkMetrics, np.ndarray]],
    destinations,
    packet_bits: int,
    scheme: Scheme,
    rng: np.random.Generator | None = None,
    replay_all: bool = False,
) -> SessionResult:
    """Run the per-layer select/judge loop over prepared (metrics, availability)
    pairs.

    With replay_all=False (sampled sessions) an entry whose transmitter never
    received the packet is skipped outright: no control messages, no decision,
    no hop record. With replay_all=True (injected replays) every supplied event
    is evaluated and recorded, but receivers below a failed relay still count
    as undelivered.
    """
    root = schedule.entries[0].transmitter
    reached = {root}
    air_time = {root: 0.0}
    hops: list[HopRecord] = []
    trace: list[tuple[str, int, int]] = []
    for entry, (metrics, avail) in zip(schedule.entries, per_event):
        live = entry.transmitter in reached
        if not live and not replay_all:
            continue
        for r in entry.receivers:
            trace.append(("MA", entry.transmitter, r))
        for r in entry.receivers:
            trace.append(("ACK", r, entry.transmitter))
        decision = select_channel(scheme, metrics, rng)
        if decision.channel is None:
            times = tuple(math.nan for _ in entry.receivers)
            success = tuple(False for _ in entry.receivers)
            hop_avail = math.nan
        else:
            hop_avail = float(avail[decision.channel])
            times = tuple(float(t) for t in metrics.tx_time[:, decision.channel])
            success = tuple(t <= hop_avail for t in times)
        hops.append(HopRecord(entry.transmitter, entry.receivers, decision.channel, times, success, hop_avail))
        if live:
            for r, t, ok in zip(entry.receivers, times, success):
                if ok:
                    reached.add(r)
                    air_time[r] = air_time[entry.transmitter] + t
    dests = sorted(destinations)
    delivered = {k: k in reached for k in dests}
    throughput = {k: (packet_bits / air_time[k] if delivered[k] else 0.0) for k in dests}
    total = sum(throughput.values())
    return SessionResult(
        delivered=delivered,
        throughput=throughput,
        total_throughput=total,
        avg_throughput=total / len(dests),
        pdr=sum(delivered.values()) / len(dests),
        hops=tuple(hops),
        control_trace=tuple(trace),
    )


def _check_pruned(tree: Tree, destinations) -> None:
    dests = set(destinations)
    if not dests:
        raise ValueError("a session needs at least one destination")
    if tree.root in dests:
        raise ValueError("the root cannot be one of its own destinations")
    spanned = set(tree.nodes())
    if not dests <= spanned:
        raise ValueError(f"destinations not spanned by the tree: {sorted(dests - spanned)}")
    stray = [u for u in tree.leaves() if u not in dests]
    if stray:
        raise ValueError(f"tree is not pruned to the destination set, stray leaves: {stray}")


def run_session(
    topology: Topology,
    tree: Tree,
    cfg: SessionConfig,
    channel_model: ChannelModel,
    rng: np.random.Generator,
) -> SessionResult:
    """Sample and execute one full multicast session on a pruned tree."""
    _check_pruned(tree, cfg.destinations)
    bad = [u for u in tree.nodes() if not 0 <= u < topology.n]
    if bad:
        raise ValueError(f"tree nodes outside the topology: {bad}")
    schedule = layerize(tree)
    draws = draw_events(schedule, channel_model, rng)
    per_event = []
    for entry, draw in zip(schedule.entries, draws):
        distances = np.array([tree.edge_dist[r] for r in entry.receivers])
        metrics = link_metrics(cfg.phy, distances, draw, channel_model.mu_idle, entry.receivers)
        per_event.append((metrics, draw.state.available_time))
    return execute_schedule(schedule, per_event, cfg.destinations, cfg.phy.packet_bits, cfg.scheme, rng)


def inject_metrics_session(
    tree: Tree,
    events: list[InjectedEvent],
    destinations,
    packet_bits: int,
    mu_idle: np.ndarray | None = None,
    scheme: Scheme = Scheme.POS,
    rng: np.random.Generator | None = None,
) -> SessionResult:
    """Replay a session from externally supplied link tables instead of sampling.

    Events must line up one-to-one with the tree's layer schedule (same
    transmitters and receiver sets, in order). Every event is evaluated, even
    below a failed relay, so all selections can be inspected; delivery still
    requires the full root path to succeed. Data rates are recovered from the
    injected air times, so rate-based selection stays available.
    """
    _check_pruned(tree, destinations)
    schedule = layerize(tree)
    if len(events) != len(schedule.entries):
        raise ValueError(f"expected {len(schedule.entries)} events for this tree, got {len(events)}")
    if mu_idle is None:
        if scheme is Scheme.MASA:
            raise ValueError("availability-based selection needs mu_idle")
        mu_idle = np.full(events[0].idle.size, np.nan)
    per_event = []
    for entry, ev in zip(schedule.entries, events):
        if ev.transmitter != entry.transmitter or set(ev.receivers) != set(entry.receivers):
            raise ValueError(
                f"event for transmitter {ev.transmitter} does not match the "
                f"schedule entry ({entry.transmitter} -> {entry.receivers})"
            )
        order = [ev.receivers.index(r) for r in entry.receivers]
        with np.errstate(divide="ignore"):
            rate = np.where(ev.tx_time > 0.0, packet_bits / ev.tx_time, np.inf)
        metrics = LinkMetrics(
            entry.receivers,
            np.asarray(ev.pos, dtype=float)[order],
            rate[order],
            np.asarray(ev.tx_time, dtype=float)[order],
            np.asarray(mu_idle, dtype=float),
            np.asarray(ev.idle, dtype=bool),
        )
        per_event.append((metrics, np.asarray(ev.available_time, dtype=float)))
    return execute_schedule(schedule, per_event, destinations, packet_bits, scheme, rng, replay_all=True)


def session_to_csv(result: SessionResult) -> str:
    """Record set for fixture diffing: one row per destination plus a summary
    row carrying the PDR and the total throughput."""
    lines = ["dest,delivered,throughput_bps"]
    for k in sorted(result.delivered):
        lines.append(f"{k},{int(result.delivered[k])},{result.throughput[k]!r}")
    lines.append(f"summary,{result.pdr!r},{result.total_throughput!r}")
    return "\n".join(lines) + "\n"
