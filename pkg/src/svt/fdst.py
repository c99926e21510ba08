"""Frequency-domain sparse transmission: end-to-end encode/transmit/decode.

The sparse vector rides on subcarriers of an n-point inverse transform; the
receiver keeps only the first m time-domain samples and recovers the support
from the consecutive-row partial IDFT alone (no channel knowledge), then
runs LMMSE plus slicing on the support-restricted system for the symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channel_model import ChannelRealization
from .errors import UndecodableSupportError
from .recovery import lmmse_detect, match_support_tolerant, omp
from .signal_core import RngStream, awgn, partial_idft, qam_demodulate, qam_modulate
from .sparse_codec import CodecConfig, SparseVector, decode_sparse

UI_DATA_POSITIONS = "data_positions"
UI_EAUI = "eaui"


@dataclass(frozen=True)
class FdstConfig:
    """Static parameters of one frequency-domain sparse transmission link."""

    n: int = 512
    m: int = 256
    k: int = 36
    bits_per_symbol: int = 4
    sample_rate_hz: float = 7.68e6
    ui_mode: str = UI_EAUI
    tolerance: int = 1
    noise_variance: float = 0.0
    circular: bool = True

    def __post_init__(self):
        if not 1 <= self.m <= self.n:
            raise ValueError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if not 1 <= self.k <= self.m:
            raise ValueError(f"need 1 <= k <= m, got k={self.k}, m={self.m}")
        if self.sample_rate_hz <= 0:
            raise ValueError("sample rate must be > 0")
        if self.ui_mode not in (UI_DATA_POSITIONS, UI_EAUI):
            raise ValueError(f"unknown ui_mode {self.ui_mode!r}")
        if self.ui_mode == UI_EAUI and self.bits_per_symbol == 0:
            raise ValueError("eaui mode carries payload on symbols; bits_per_symbol must be > 0")
        if self.tolerance < 0:
            raise ValueError("tolerance must be >= 0")
        if self.noise_variance < 0:
            raise ValueError("noise variance must be >= 0")

    @property
    def codec(self) -> CodecConfig:
        return CodecConfig(self.n, self.k, self.bits_per_symbol)

    @property
    def payload_bits(self) -> int:
        if self.ui_mode == UI_EAUI:
            return self.k * self.bits_per_symbol
        return self.codec.payload_bits


@dataclass(frozen=True)
class FdstDecodeOutput:
    """Decoder verdict for one received block.

    ``bits`` is None when the recovered support has no bit preimage (a block
    error, not a failure).  ``ui_matched`` is None outside EA-UI operation.
    """

    support: tuple
    bits: np.ndarray | None
    ui_matched: bool | None
    samples_used: int


@lru_cache(maxsize=8)
def _sensing_matrix(n: int, m: int) -> np.ndarray:
    mat = partial_idft(n, 0, m)
    mat.setflags(write=False)
    return mat


def fdst_transmit(
    sv: SparseVector,
    channel: ChannelRealization,
    noise_variance: float,
    rng: RngStream,
) -> np.ndarray:
    """n time-domain samples of the faded block: IDFT of the per-subcarrier
    product gains*s, plus AWGN.

    Equivalent to applying the circulant time-domain channel to the IDFT of
    s, by the diagonalization of circulant matrices in the DFT basis.
    """
    if sv.n != channel.n:
        raise ValueError(f"vector dimension {sv.n} != channel dimension {channel.n}")
    x = channel.freq_gains * sv.dense()
    time_samples = np.sqrt(sv.n) * np.fft.ifft(x)
    return awgn(time_samples, noise_variance, rng)


def _recover_support(y: np.ndarray, config: FdstConfig, expected_support):
    y = np.asarray(y, dtype=complex).ravel()
    if y.size < config.m:
        raise ValueError(f"need at least m={config.m} samples, got {y.size}")
    y_early = y[: config.m]
    sensing = _sensing_matrix(config.n, config.m)
    result = omp(y_early, sensing, config.k)
    support = result.support
    matched = None
    if expected_support is not None:
        support, matched = match_support_tolerant(
            result.support,
            expected_support,
            config.tolerance,
            config.n if config.circular else None,
        )
    return y_early, sensing, support, matched


def fdst_decode(
    y,
    config: FdstConfig,
    channel_at_rx: ChannelRealization,
    expected_support=None,
) -> FdstDecodeOutput:
    """Two-step decode of one block from its first m time-domain samples.

    Support identification uses only the early samples and the partial IDFT
    (channel-free); when ``expected_support`` is given the tolerant matching
    rule corrects near-miss indices.  Symbol detection then runs LMMSE on
    the support-restricted faded system followed by the slicer.
    """
    y_early, sensing, support, matched = _recover_support(y, config, expected_support)
    if channel_at_rx.n != config.n:
        raise ValueError(
            f"channel dimension {channel_at_rx.n} != configured n {config.n}"
        )
    reduced = sensing[:, list(support)] * channel_at_rx.freq_gains[list(support)][None, :]
    estimates = lmmse_detect(y_early, reduced, config.noise_variance)

    if config.ui_mode == UI_EAUI:
        bits = qam_demodulate(estimates, 1 << config.bits_per_symbol)
        return FdstDecodeOutput(support, bits, matched, config.m)

    codec = config.codec
    if codec.bits_per_symbol:
        sliced_bits = qam_demodulate(estimates, codec.qam_order)
        symbols = qam_modulate(sliced_bits, codec.qam_order)
    else:
        symbols = np.ones(config.k, dtype=complex)
    try:
        bits = decode_sparse(SparseVector(config.n, support, symbols), codec)
    except UndecodableSupportError:
        bits = None
    return FdstDecodeOutput(support, bits, matched, config.m)


def eaui_identify(y, config: FdstConfig, own_support) -> bool:
    """Channel-free check whether a block was addressed to this receiver:
    recover the support from the early samples and compare it (tolerantly)
    with the receiver's own support."""
    if len(tuple(own_support)) != config.k:
        raise ValueError(f"own support must have k={config.k} elements")
    _, _, _, matched = _recover_support(y, config, own_support)
    return bool(matched)


@dataclass(frozen=True)
class LatencyBreakdown:
    buffering_s: float
    total_s: float


def latency_model(m: int, sample_rate_hz: float, decode_seconds: float = 0.0) -> LatencyBreakdown:
    """Processing latency split: buffering m samples plus the caller-measured
    decode time.  Only the buffering component is modeled here."""
    if m < 1:
        raise ValueError("sample count must be >= 1")
    if sample_rate_hz <= 0:
        raise ValueError("sample rate must be > 0")
    if decode_seconds < 0:
        raise ValueError("decode time must be >= 0")
    buffering = m / sample_rate_hz
    return LatencyBreakdown(buffering, buffering + decode_seconds)
