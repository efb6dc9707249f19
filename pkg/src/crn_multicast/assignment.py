"""Unified-channel selection for one multicast transmitter event.

One transmitter must reach all of its children on a single channel, so group
schemes score each idle channel by the worst receiver on it (max-min). Four
schemes are supported:

  pos   pick the idle channel with the largest minimum success probability
  masa  pick the idle channel with the largest mean availability time
  mdr   pick the idle channel with the largest minimum data rate
  rs    pick uniformly at random among the idle channels

A unicast hop is the single-receiver special case (the minimum over one
receiver is that receiver), so no separate rule is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Scheme(Enum):
    POS = "pos"
    MASA = "masa"
    MDR = "mdr"
    RS = "rs"


@dataclass(frozen=True)
class LinkMetrics:
    """Per-receiver, per-channel link metrics for one transmitter event.

    Matrices are (receivers x channels); busy channels carry zero success
    probability.
    """

    receivers: tuple[int, ...]
    pos: np.ndarray  # success probability
    rate: np.ndarray  # bits/s
    tx_time: np.ndarray  # s
    mu_idle: np.ndarray  # (M,) mean availability per channel, s
    idle: np.ndarray  # (M,) bool

    def __post_init__(self):
        r, m = len(self.receivers), len(self.mu_idle)
        if r == 0 or m == 0:
            raise ValueError("metrics need at least one receiver and one channel")
        for name in ("pos", "rate", "tx_time"):
            if getattr(self, name).shape != (r, m):
                raise ValueError(f"{name} must have shape ({r}, {m})")
        if self.idle.shape != (m,):
            raise ValueError(f"idle must have shape ({m},)")
        if np.any(self.pos[:, ~self.idle] != 0.0):
            raise ValueError("busy channels must carry zero success probability")


@dataclass(frozen=True)
class Decision:
    """Outcome of channel selection; channel is None when no channel is idle."""

    channel: int | None
    min_pos_at_choice: float


def select_channel(scheme: Scheme, metrics: LinkMetrics, rng: np.random.Generator | None = None) -> Decision:
    """Pick the unified channel for one event under the given scheme.

    Ties go to the lowest channel index (np.argmax returns the first maximum).
    An empty idle set yields a Decision without a channel: the event fails.
    """
    idle_idx = np.flatnonzero(metrics.idle)
    if idle_idx.size == 0:
        return Decision(None, 0.0)
    if scheme is Scheme.POS:
        worst = metrics.pos[:, idle_idx].min(axis=0)
        j = idle_idx[int(np.argmax(worst))]
    elif scheme is Scheme.MASA:
        j = idle_idx[int(np.argmax(metrics.mu_idle[idle_idx]))]
    elif scheme is Scheme.MDR:
        worst = metrics.rate[:, idle_idx].min(axis=0)
        j = idle_idx[int(np.argmax(worst))]
    elif scheme is Scheme.RS:
        if rng is None:
            raise ValueError("random selection needs an rng")
        j = idle_idx[int(rng.integers(idle_idx.size))]
    else:  # pragma: no cover
        raise ValueError(f"unknown scheme {scheme!r}")
    return Decision(int(j), float(metrics.pos[:, j].min()))
