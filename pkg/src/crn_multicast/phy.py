"""Link-budget equations: received power, Shannon rate, air time, success probability.

All quantities are SI: watts, meters, hertz, seconds, bits. Functions accept
scalars or numpy arrays and broadcast like numpy ufuncs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


@dataclass(frozen=True)
class PhyParams:
    """Radio parameters shared by every link in a scenario."""

    pt: float  # transmit power, W
    path_loss_exp: float  # path loss exponent, ~2 free space .. ~6 heavy clutter
    wavelength: float  # carrier wavelength, m
    noise_psd: float  # thermal noise power spectral density, W/Hz
    bandwidth: float  # channel bandwidth, Hz
    packet_bits: int  # data packet size, bits

    def __post_init__(self):
        for name in ("pt", "path_loss_exp", "wavelength", "noise_psd", "bandwidth", "packet_bits"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")

    @classmethod
    def from_carrier(cls, *, pt, path_loss_exp, carrier_freq_hz, noise_psd, bandwidth, packet_bits):
        """Build params with the wavelength derived from the carrier frequency."""
        return cls(pt, path_loss_exp, SPEED_OF_LIGHT / carrier_freq_hz, noise_psd, bandwidth, packet_bits)


def received_power(phy: PhyParams, d, gain):
    """Power at the receiver over distance d with a given fading power gain, W."""
    d = np.asarray(d, dtype=float)
    gain = np.asarray(gain, dtype=float)
    if np.any(d <= 0.0):
        raise ValueError("distance must be positive (co-located nodes)")
    if np.any(gain < 0.0):
        raise ValueError("gain must be non-negative")
    pr = phy.pt / d**phy.path_loss_exp * (phy.wavelength / (4.0 * math.pi)) ** 2 * gain
    return float(pr) if pr.ndim == 0 else pr


def data_rate(phy: PhyParams, pr):
    """Achievable rate for a received power, bits/s."""
    pr = np.asarray(pr, dtype=float)
    if np.any(pr < 0.0):
        raise ValueError("received power must be non-negative")
    r = phy.bandwidth * np.log2(1.0 + pr / (phy.bandwidth * phy.noise_psd))
    return float(r) if r.ndim == 0 else r


def tx_time(phy: PhyParams, rate):
    """Air time to send one packet at a given rate, s. Zero rate maps to +inf."""
    rate = np.asarray(rate, dtype=float)
    if np.any(rate < 0.0):
        raise ValueError("rate must be non-negative")
    with np.errstate(divide="ignore"):
        t = np.where(rate > 0.0, phy.packet_bits / rate, np.inf)
    return float(t) if t.ndim == 0 else t


def pos(tx_time, mu_idle):
    """Probability that a transmission of the given air time finishes within the
    remaining idle period of a channel whose mean idle duration is mu_idle."""
    t = np.asarray(tx_time, dtype=float)
    mu = np.asarray(mu_idle, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("tx_time must be non-negative")
    if np.any(mu <= 0.0):
        raise ValueError("mu_idle must be positive")
    p = np.exp(-t / mu)
    return float(p) if p.ndim == 0 else p
