"""Monte Carlo simulator for tree-based multicast in multi-hop cognitive radio
networks: random topologies, SPT/MST multicast trees, per-layer unified channel
assignment (pos, masa, mdr, rs) under a Markov idle/busy primary-user model
with Rayleigh fading, and throughput/packet-delivery-rate measurement."""

from .assignment import Decision, LinkMetrics, Scheme, select_channel
from .channel import ChannelModel, ChannelParams, EventState, make_channels, sample_event_state, sample_gain
from .experiment import (
    AggregateRow,
    ScenarioParams,
    SweepSpec,
    TrialRow,
    aggregate_trials,
    run_scenario_sessions,
    run_sweep,
    run_trial,
)
from .phy import PhyParams, data_rate, pos, received_power, tx_time
from .session import (
    HopRecord,
    InjectedEvent,
    SessionConfig,
    SessionResult,
    TreeKind,
    inject_metrics_session,
    run_session,
    session_to_csv,
)
from .topology import (
    LayerEntry,
    LayerSchedule,
    Point,
    Topology,
    Tree,
    build_mst,
    build_spt,
    dump_topology,
    generate_topology,
    layerize,
    load_topology,
    prune_tree,
    tree_from_parents,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateRow",
    "ChannelModel",
    "ChannelParams",
    "Decision",
    "EventState",
    "HopRecord",
    "InjectedEvent",
    "LayerEntry",
    "LayerSchedule",
    "LinkMetrics",
    "PhyParams",
    "Point",
    "ScenarioParams",
    "Scheme",
    "SessionConfig",
    "SessionResult",
    "SweepSpec",
    "Topology",
    "Tree",
    "TreeKind",
    "TrialRow",
    "aggregate_trials",
    "build_mst",
    "build_spt",
    "data_rate",
    "dump_topology",
    "generate_topology",
    "inject_metrics_session",
    "layerize",
    "load_topology",
    "make_channels",
    "pos",
    "prune_tree",
    "received_power",
    "run_scenario_sessions",
    "run_session",
    "run_sweep",
    "run_trial",
    "sample_event_state",
    "sample_gain",
    "select_channel",
    "session_to_csv",
    "tree_from_parents",
    "tx_time",
]
