"""Channel realizations and the environment-derived support.

Three generation modes are supported: i.i.d. Rayleigh per subcarrier,
multipath (random taps whose DFT gives the subcarrier gains; the implied
time-domain operator is circulant), and a constant scalar gain.  Also
provides Clarke's coherence-time rule and the top-k-gain support used for
environment-aware user identification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .signal_core import RngStream

SPEED_OF_LIGHT_MPS = 299_792_458.0

MODE_IID_RAYLEIGH = "iid_rayleigh"
MODE_MULTIPATH = "multipath"
MODE_CONSTANT = "constant"


@dataclass(frozen=True)
class ChannelRealization:
    """Per-subcarrier complex gains, optionally backed by time-domain taps."""

    n: int
    freq_gains: np.ndarray
    taps: np.ndarray | None
    mode: str

    def __post_init__(self):
        gains = np.asarray(self.freq_gains, dtype=complex)
        object.__setattr__(self, "freq_gains", gains)
        if gains.shape != (self.n,):
            raise ValueError(f"expected {self.n} gains, got shape {gains.shape}")
        if self.taps is not None:
            object.__setattr__(self, "taps", np.asarray(self.taps, dtype=complex))


def rayleigh_freq_channel(n: int, rng: RngStream) -> ChannelRealization:
    """Independent unit-variance circularly-symmetric Gaussian gain per
    subcarrier (Rayleigh magnitudes)."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    gen = rng.generator()
    gains = (gen.standard_normal(n) + 1j * gen.standard_normal(n)) / np.sqrt(2.0)
    return ChannelRealization(n, gains, None, MODE_IID_RAYLEIGH)


def multipath_time_channel(num_taps: int, n: int, rng: RngStream) -> ChannelRealization:
    """Random impulse response with unit expected total power.

    The frequency gains are the n-point DFT of the zero-padded taps, so the
    implied time-domain operator is the circulant matrix with the padded
    taps as first column.
    """
    if num_taps < 1:
        raise ValueError(f"tap count must be >= 1, got {num_taps}")
    if num_taps > n:
        raise ValueError(f"tap count {num_taps} exceeds dimension {n}")
    gen = rng.generator()
    taps = (gen.standard_normal(num_taps) + 1j * gen.standard_normal(num_taps))
    taps /= np.sqrt(2.0 * num_taps)
    padded = np.zeros(n, dtype=complex)
    padded[:num_taps] = taps
    return ChannelRealization(n, np.fft.fft(padded), taps, MODE_MULTIPATH)


def constant_channel(n: int, h: complex) -> ChannelRealization:
    """All subcarriers share the single gain h (narrowband/static link)."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    if h == 0:
        raise ValueError("constant gain must be nonzero")
    return ChannelRealization(n, np.full(n, complex(h)), None, MODE_CONSTANT)


def perturb_gains(channel: ChannelRealization, variance: float, rng: RngStream) -> ChannelRealization:
    """One side's imperfect view of a reciprocal channel: adds complex
    Gaussian error of the given variance to every gain."""
    if variance < 0:
        raise ValueError("perturbation variance must be >= 0")
    if variance == 0:
        return channel
    gen = rng.generator()
    err = (gen.standard_normal(channel.n) + 1j * gen.standard_normal(channel.n))
    err *= np.sqrt(variance / 2.0)
    return ChannelRealization(channel.n, channel.freq_gains + err, None, MODE_IID_RAYLEIGH)


def coherence_time(carrier_hz: float, speed_mps: float) -> float:
    """Clarke's rule 9/(16*pi*f_d) with Doppler f_d = speed*carrier/c."""
    if carrier_hz <= 0 or speed_mps <= 0:
        raise ValueError("carrier frequency and speed must be > 0")
    doppler_hz = speed_mps * carrier_hz / SPEED_OF_LIGHT_MPS
    return 9.0 / (16.0 * math.pi * doppler_hz)


def eaui_support(channel: ChannelRealization, k: int) -> tuple:
    """Indices of the k largest-|gain| subcarriers, ascending.

    Ties break toward the lower index, so the result is a deterministic
    function of the realization.
    """
    if k < 1 or k > channel.n:
        raise ValueError(f"need 1 <= k <= {channel.n}, got {k}")
    magnitudes = np.abs(channel.freq_gains)
    order = np.argsort(-magnitudes, kind="stable")
    return tuple(sorted(int(i) for i in order[:k]))
