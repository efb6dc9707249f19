"""Primary-user channel occupancy and Rayleigh fading.

Each licensed channel alternates between busy (primary user present) and idle
periods. Secondary transmissions sample channel state per transmitter event:
an idle flag per channel plus, for idle channels, the residual time the
channel stays available. Residuals are exponential with the channel's mean
idle duration, which is the memoryless residual of exponential idle periods.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class ChannelParams:
    mu_idle: float  # mean idle-period duration, s
    p_idle: float  # long-run fraction of time the channel is idle

    @property
    def mean_busy(self) -> float:
        """Mean busy-period duration implied by mu_idle and p_idle, s."""
        return self.mu_idle * (1.0 - self.p_idle) / self.p_idle


@dataclass(frozen=True)
class ChannelModel:
    channels: tuple[ChannelParams, ...]

    def __post_init__(self):
        if len(self.channels) < 1:
            raise ValueError("a channel model needs at least one channel")

    @property
    def m(self) -> int:
        return len(self.channels)

    @cached_property
    def mu_idle(self) -> np.ndarray:
        return np.array([c.mu_idle for c in self.channels])

    @cached_property
    def p_idle(self) -> np.ndarray:
        return np.array([c.p_idle for c in self.channels])


@dataclass(frozen=True)
class EventState:
    """Channel state seen by one transmitter event."""

    idle: np.ndarray  # bool, shape (M,)
    available_time: np.ndarray  # s, shape (M,); NaN on busy channels

    @property
    def idle_channels(self) -> np.ndarray:
        return np.flatnonzero(self.idle)


def make_channels(m: int, mu_min: float, mu_max: float, p_idle: float) -> ChannelModel:
    """Model with m channels whose mean idle durations are evenly spaced over
    [mu_min, mu_max] (a single channel gets mu_min) and a common idle probability."""
    if m < 1:
        raise ValueError("channel count must be at least 1")
    if not 0.0 < mu_min <= mu_max:
        raise ValueError("need 0 < mu_min <= mu_max")
    if not 0.0 < p_idle < 1.0:
        raise ValueError("p_idle must lie strictly between 0 and 1")
    mu = np.linspace(mu_min, mu_max, m) if m > 1 else np.array([mu_min])
    return ChannelModel(tuple(ChannelParams(float(x), p_idle) for x in mu))


def sample_event_state(model: ChannelModel, rng: np.random.Generator) -> EventState:
    """Draw one per-event channel state: independent idle flags and residual
    availability per channel."""
    idle = rng.random(model.m) < model.p_idle
    # Residuals are drawn for every channel, busy ones included, so that runs
    # differing only in p_idle consume identical generator positions.
    residual = rng.exponential(model.mu_idle)
    return EventState(idle, np.where(idle, residual, np.nan))


def sample_gain(rng: np.random.Generator, size=None):
    """Rayleigh-fading power gain: exponential with mean 1."""
    g = rng.exponential(1.0, size)
    return float(g) if size is None else g
