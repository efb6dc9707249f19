"""Monte Carlo harness: paired trials, parameter sweeps, aggregation, CSV files.

A trial fixes one topology and destination set from its seed, then replays the
same pre-drawn channel states and fading gains under every requested scheme
(common random numbers), so scheme comparisons differ only in channel choice.
Sweeps repeat trials with seeds seed+i at each value of one swept variable and
aggregate means with 95% normal-approximation confidence intervals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .assignment import Scheme
from .channel import ChannelModel, make_channels
from .phy import PhyParams
from .session import SessionResult, TreeKind, draw_events, execute_schedule, link_metrics
from .topology import build_mst, build_spt, generate_topology, layerize, prune_tree


class DataFormatError(ValueError):
    """A results file does not match the expected CSV schema."""


@dataclass(frozen=True)
class ScenarioParams:
    """Full parameter set for one simulated scenario."""

    n_nodes: int = 40
    n_dest: int = 16
    m_channels: int = 20
    bandwidth_hz: float = 1e6
    packet_bits: int = 32768  # 4 KB at 1024 bytes per KB
    pt_watts: float = 0.1
    p_idle: float = 0.9
    mu_min_s: float = 0.002
    mu_max_s: float = 0.070
    noise_psd: float = 1e-18
    path_loss_exp: float = 4.0
    carrier_freq_hz: float = 600e6
    area_side_m: float = 200.0
    comm_range_m: float = 60.0

    def validate(self) -> None:
        if self.n_nodes < 2:
            raise ValueError("n_nodes must be at least 2")
        if not 1 <= self.n_dest < self.n_nodes:
            raise ValueError("n_dest must satisfy 1 <= n_dest < n_nodes")
        if self.m_channels < 1:
            raise ValueError("m_channels must be at least 1")
        if not 0.0 < self.p_idle < 1.0:
            raise ValueError("p_idle must lie strictly between 0 and 1")
        for name in (
            "bandwidth_hz",
            "packet_bits",
            "pt_watts",
            "mu_min_s",
            "mu_max_s",
            "noise_psd",
            "path_loss_exp",
            "carrier_freq_hz",
            "area_side_m",
            "comm_range_m",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.mu_min_s > self.mu_max_s:
            raise ValueError("mu_min_s must not exceed mu_max_s")

    def phy(self) -> PhyParams:
        return PhyParams.from_carrier(
            pt=self.pt_watts,
            path_loss_exp=self.path_loss_exp,
            carrier_freq_hz=self.carrier_freq_hz,
            noise_psd=self.noise_psd,
            bandwidth=self.bandwidth_hz,
            packet_bits=self.packet_bits,
        )

    def channels(self) -> ChannelModel:
        return make_channels(self.m_channels, self.mu_min_s, self.mu_max_s, self.p_idle)


# The swept variable names accepted by SweepSpec, mapped to ScenarioParams fields.
SWEEP_VARIABLES = {
    "bw": "bandwidth_hz",
    "packet_bits": "packet_bits",
    "M": "m_channels",
    "pt": "pt_watts",
    "p_idle": "p_idle",
    "n_dest": "n_dest",
    "n_nodes": "n_nodes",
}

_TREE_CODE = {TreeKind.SPT: 0, TreeKind.MST: 1}
_SCHEME_CODE = {Scheme.POS: 0, Scheme.MASA: 1, Scheme.MDR: 2, Scheme.RS: 3}

# Sub-stream tags hashed into per-purpose generators, so adding schemes or
# tree kinds never shifts anyone else's draws.
_STREAM_TOPOLOGY = 0
_STREAM_DESTINATIONS = 1
_STREAM_EVENTS = 2
_STREAM_SELECTION = 3


def _rng(seed: int, *stream: int) -> np.random.Generator:
    return np.random.default_rng((seed, *stream))


@dataclass(frozen=True)
class TrialOutcome:
    avg_throughput_bps: float
    pdr: float


def run_scenario_sessions(
    params: ScenarioParams,
    schemes,
    trees,
    seed: int,
    channel_model: ChannelModel | None = None,
) -> dict[tuple[TreeKind, Scheme], SessionResult]:
    """One seeded scenario: full session results per (tree kind, scheme).

    All schemes of one tree kind see bitwise-identical channel states and
    gains; only their channel decisions (and hence successes) differ.
    """
    params.validate()
    if seed < 0:
        raise ValueError("seed must be non-negative")
    model = channel_model if channel_model is not None else params.channels()
    topo = generate_topology(
        params.n_nodes, params.area_side_m, params.comm_range_m, _rng(seed, _STREAM_TOPOLOGY)
    )
    dest_rng = _rng(seed, _STREAM_DESTINATIONS)
    destinations = frozenset(
        int(v) for v in dest_rng.choice(np.arange(1, params.n_nodes), size=params.n_dest, replace=False)
    )
    phy = params.phy()
    results: dict[tuple[TreeKind, Scheme], SessionResult] = {}
    for tree_kind in trees:
        build = build_spt if tree_kind is TreeKind.SPT else build_mst
        pruned = prune_tree(build(topo, 0), destinations)
        schedule = layerize(pruned)
        draws = draw_events(schedule, model, _rng(seed, _STREAM_EVENTS, _TREE_CODE[tree_kind]))
        per_event = []
        for entry, draw in zip(schedule.entries, draws):
            distances = np.array([pruned.edge_dist[r] for r in entry.receivers])
            metrics = link_metrics(phy, distances, draw, model.mu_idle, entry.receivers)
            per_event.append((metrics, draw.state.available_time))
        for scheme in schemes:
            sel_rng = _rng(seed, _STREAM_SELECTION, _TREE_CODE[tree_kind], _SCHEME_CODE[scheme])
            results[(tree_kind, scheme)] = execute_schedule(
                schedule, per_event, destinations, phy.packet_bits, scheme, sel_rng
            )
    return results


def run_trial(
    params: ScenarioParams,
    schemes,
    trees,
    seed: int,
    channel_model: ChannelModel | None = None,
) -> dict[tuple[TreeKind, Scheme], TrialOutcome]:
    """Paired trial summary: average throughput and PDR per (tree, scheme)."""
    sessions = run_scenario_sessions(params, schemes, trees, seed, channel_model)
    return {key: TrialOutcome(res.avg_throughput, res.pdr) for key, res in sessions.items()}


@dataclass(frozen=True)
class SweepSpec:
    base: ScenarioParams
    variable: str
    values: tuple
    trials: int
    seed: int
    schemes: tuple[Scheme, ...] = (Scheme.POS, Scheme.MASA, Scheme.MDR, Scheme.RS)
    trees: tuple[TreeKind, ...] = (TreeKind.SPT, TreeKind.MST)

    def __post_init__(self):
        if self.variable not in SWEEP_VARIABLES:
            raise ValueError(
                f"unknown sweep variable {self.variable!r}, expected one of {sorted(SWEEP_VARIABLES)}"
            )
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if not self.schemes or not self.trees:
            raise ValueError("sweep needs at least one scheme and one tree kind")


@dataclass(frozen=True)
class TrialRow:
    tree: TreeKind
    scheme: Scheme
    variable: str
    value: float | int
    trial: int
    avg_throughput_bps: float
    pdr: float


@dataclass(frozen=True)
class AggregateRow:
    tree: TreeKind
    scheme: Scheme
    variable: str
    value: float | int
    mean_throughput_bps: float
    ci95_throughput: float
    mean_pdr: float
    ci95_pdr: float
    trials: int


def _mean_ci95(values: list[float]) -> tuple[float, float]:
    mean = float(np.mean(values))
    if len(values) < 2:
        return mean, 0.0
    half = 1.96 * float(np.std(values, ddof=1)) / math.sqrt(len(values))
    return mean, half


def aggregate_trials(rows: list[TrialRow]) -> list[AggregateRow]:
    """Collapse per-trial rows into mean and CI rows, one per
    (tree, scheme, value), in first-seen order."""
    groups: dict[tuple, list[TrialRow]] = {}
    for row in rows:
        groups.setdefault((row.tree, row.scheme, row.variable, row.value), []).append(row)
    out = []
    for (tree, scheme, variable, value), members in groups.items():
        mean_tp, ci_tp = _mean_ci95([r.avg_throughput_bps for r in members])
        mean_pdr, ci_pdr = _mean_ci95([r.pdr for r in members])
        out.append(
            AggregateRow(tree, scheme, variable, value, mean_tp, ci_tp, mean_pdr, ci_pdr, len(members))
        )
    return out


def run_sweep(spec: SweepSpec) -> tuple[list[TrialRow], list[AggregateRow]]:
    """Run trials at every swept value with trial seeds seed+i and aggregate.

    Reusing trial seeds across values pairs the sweep points through common
    topologies and draws, which keeps trends smooth at modest trial counts.
    """
    field = SWEEP_VARIABLES[spec.variable]
    rows: list[TrialRow] = []
    for value in spec.values:
        params = replace(spec.base, **{field: value})
        for i in range(spec.trials):
            outcomes = run_trial(params, spec.schemes, spec.trees, spec.seed + i)
            for (tree, scheme), oc in outcomes.items():
                rows.append(
                    TrialRow(tree, scheme, spec.variable, value, i, oc.avg_throughput_bps, oc.pdr)
                )
    return rows, aggregate_trials(rows)


TRIALS_HEADER = "tree,scheme,variable,value,trial,avg_throughput_bps,pdr"
AGGREGATE_HEADER = (
    "tree,scheme,variable,value,mean_throughput_bps,ci95_throughput,mean_pdr,ci95_pdr,trials"
)


def _fmt(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def trials_to_csv(rows: list[TrialRow]) -> str:
    lines = [TRIALS_HEADER]
    for r in rows:
        lines.append(
            f"{r.tree.value},{r.scheme.value},{r.variable},{_fmt(r.value)},"
            f"{r.trial},{r.avg_throughput_bps!r},{r.pdr!r}"
        )
    return "\n".join(lines) + "\n"


def aggregate_to_csv(rows: list[AggregateRow]) -> str:
    lines = [AGGREGATE_HEADER]
    for r in rows:
        lines.append(
            f"{r.tree.value},{r.scheme.value},{r.variable},{_fmt(r.value)},"
            f"{r.mean_throughput_bps!r},{r.ci95_throughput!r},{r.mean_pdr!r},{r.ci95_pdr!r},{r.trials}"
        )
    return "\n".join(lines) + "\n"


def _parse_number(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _parse_csv(text: str, header: str, path) -> list[tuple[int, list[str]]]:
    lines = text.splitlines()
    if not lines or lines[0] != header:
        raise DataFormatError(f"{path}, line 1: expected header {header!r}")
    n_fields = header.count(",") + 1
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != n_fields:
            raise DataFormatError(f"{path}, line {lineno}: expected {n_fields} fields, got {len(fields)}")
        rows.append((lineno, fields))
    return rows


def read_trials_csv(path) -> list[TrialRow]:
    rows = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, f in _parse_csv(text, TRIALS_HEADER, path):
        try:
            rows.append(
                TrialRow(
                    TreeKind(f[0]), Scheme(f[1]), f[2], _parse_number(f[3]),
                    int(f[4]), float(f[5]), float(f[6]),
                )
            )
        except ValueError as exc:
            raise DataFormatError(f"{path}, line {lineno}: {exc}") from exc
    return rows


def read_aggregate_csv(path) -> list[AggregateRow]:
    rows = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, f in _parse_csv(text, AGGREGATE_HEADER, path):
        try:
            rows.append(
                AggregateRow(
                    TreeKind(f[0]), Scheme(f[1]), f[2], _parse_number(f[3]),
                    float(f[4]), float(f[5]), float(f[6]), float(f[7]), int(f[8]),
                )
            )
        except ValueError as exc:
            raise DataFormatError(f"{path}, line {lineno}: {exc}") from exc
    return rows


def write_sweep_csv(rows: list[TrialRow], agg: list[AggregateRow], out_dir) -> tuple[Path, Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trials_path = out / "trials.csv"
    agg_path = out / "aggregate.csv"
    trials_path.write_text(trials_to_csv(rows), encoding="utf-8", newline="\n")
    agg_path.write_text(aggregate_to_csv(agg), encoding="utf-8", newline="\n")
    return trials_path, agg_path
