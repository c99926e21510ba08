"""Sparse vector coding: random antipodal spreading and channel-free decoding.

A k-sparse vector is spread by a short random codebook C (entries
+-1/sqrt(m), unit-norm columns) and sent through an approximately constant
scalar channel: y = h*C*s + v.  Because C is channel-independent, support
identification needs no channel knowledge.  Also hosts the floating-point
operation counts used to compare greedy decoding with the convolutional
decoder.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import UndecodableSupportError
from .signal_core import RngStream, awgn
from .sparse_codec import CodecConfig, SparseVector, int_to_bits, support_rank
from .recovery import omp


@dataclass(frozen=True)
class Codebook:
    """Random antipodal spreading matrix with unit-norm columns."""

    m: int
    n: int
    entries: np.ndarray
    seed: int

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        object.__setattr__(self, "entries", entries)
        if entries.shape != (self.m, self.n):
            raise ValueError(
                f"entries shape {entries.shape} != ({self.m}, {self.n})"
            )
        scale = 1.0 / np.sqrt(self.m)
        if not np.all(np.isclose(np.abs(entries), scale)):
            raise ValueError("entries must all be +-1/sqrt(m)")


def generate_codebook(m: int, n: int, rng: RngStream) -> Codebook:
    """i.i.d. equiprobable +-1 entries, scaled so every column has unit norm."""
    if m < 1 or n < 1:
        raise ValueError(f"codebook dimensions must be >= 1, got ({m}, {n})")
    gen = rng.generator()
    signs = gen.integers(0, 2, size=(m, n)) * 2 - 1
    return Codebook(m, n, signs / np.sqrt(m), rng.master_seed)


def save_codebook(codebook: Codebook, path) -> None:
    """Text export: first line ``m n seed``, then m rows of n signs
    (+1/-1; the 1/sqrt(m) scaling is implied)."""
    signs = np.where(codebook.entries > 0, 1, -1)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{codebook.m} {codebook.n} {codebook.seed}\n")
        for row in signs:
            fh.write(" ".join(f"{v:+d}" for v in row) + "\n")


def load_codebook(path) -> Codebook:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ValueError(f"malformed codebook header in {path}")
        m, n, seed = (int(v) for v in header)
        signs = np.array(
            [[int(v) for v in fh.readline().split()] for _ in range(m)], dtype=float
        )
    if signs.shape != (m, n):
        raise ValueError(f"codebook body shape {signs.shape} != ({m}, {n})")
    return Codebook(m, n, signs / np.sqrt(m), seed)


def svc_transmit(
    sv: SparseVector,
    codebook: Codebook,
    h: complex,
    noise_variance: float,
    rng: RngStream,
) -> np.ndarray:
    """m received samples of one spread block: h*C*s plus AWGN."""
    if sv.n != codebook.n:
        raise ValueError(f"vector dimension {sv.n} != codebook columns {codebook.n}")
    clean = complex(h) * (codebook.entries @ sv.dense())
    return awgn(clean, noise_variance, rng)


@dataclass(frozen=True)
class SvcDecodeOutput:
    """``bits`` is None when the recovered support has no bit preimage."""

    support: tuple
    bits: np.ndarray | None
    symbol_estimates: np.ndarray


def svc_decode(y, codebook: Codebook, k: int, config: CodecConfig) -> SvcDecodeOutput:
    """Channel-free decode: OMP against the codebook, then the combinadic
    rank of the support yields the payload word.

    Payload rides on positions only; symbol estimates are kept purely as
    diagnostics.  Position-plus-symbol operation is available through the
    codec directly.
    """
    y = np.asarray(y, dtype=complex).ravel()
    if y.size != codebook.m:
        raise ValueError(f"measurement length {y.size} != codebook rows {codebook.m}")
    if config.bits_per_symbol != 0:
        raise ValueError("svc_decode carries payload on positions only (bits_per_symbol=0)")
    if config.n != codebook.n or config.k != k:
        raise ValueError("codec config does not match codebook/k")
    result = omp(y, codebook.entries, k)
    rank = support_rank(result.support, config.n, config.k)
    if rank >= (1 << config.position_bits):
        return SvcDecodeOutput(result.support, None, result.symbol_estimates)
    bits = int_to_bits(rank, config.position_bits)
    return SvcDecodeOutput(result.support, bits, result.symbol_estimates)


def flops_omp(m: int, n: int, k: int) -> int:
    """Floating-point operations of k-iteration OMP on an m x n system:
    2mnk + k(k+1)(4m^2+3m-1)/2 + km^3 - 2k.  Exact integer (k(k+1) is even).
    """
    _check_sizes(m=m, n=n)
    if k < 0:
        raise ValueError("sparsity k must be >= 0")
    return 2 * m * n * k + k * (k + 1) * (4 * m * m + 3 * m - 1) // 2 + k * m**3 - 2 * k


@dataclass(frozen=True)
class FlopsParams:
    """System and network sizes entering the convolutional-decoder count."""

    m: int
    n: int
    k: int
    filters: int = 32       # T
    pool: int = 2           # p
    kernel: int = 3         # q
    hidden_layers: int = 6  # L

    def __post_init__(self):
        for name in ("m", "n", "k", "filters", "pool", "kernel", "hidden_layers"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.pool > self.filters:
            raise ValueError("pooling size cannot exceed filter count")


def flops_deep_svc(params: FlopsParams) -> float:
    """Floating-point operations of the convolutional support decoder:
    2mT(2q + (p-1)/p - 1 + (4q+1)L/p - (T-p)/T^2) + (4m+k+3)n - k(k+1)/2 - 1.

    Evaluated in exact rational arithmetic, then rounded once to float.
    """
    m, n, k = params.m, params.n, params.k
    T, p, q, L = params.filters, params.pool, params.kernel, params.hidden_layers
    inner = (
        2 * q
        + Fraction(p - 1, p)
        - 1
        + Fraction((4 * q + 1) * L, p)
        - Fraction(T - p, T * T)
    )
    total = 2 * m * T * inner + (4 * m + k + 3) * n - Fraction(k * (k + 1), 2) - 1
    return float(total)


def _check_sizes(**sizes: int) -> None:
    for name, value in sizes.items():
        if value < 1:
            raise ValueError(f"{name} must be >= 1, got {value}")
