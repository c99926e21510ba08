"""Bijective mapping between information bits and k-sparse complex vectors.

Positions carry ``floor(log2(C(n, k)))`` bits through the combinatorial
number system (lexicographic rank of the support), and the k active symbols
carry ``k * bits_per_symbol`` QAM bits.  All combinatorics use exact integer
arithmetic; no floating point enters the rank computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import UndecodableSupportError
from .signal_core import qam_demodulate, qam_modulate

SYMBOL_BIT_CHOICES = (0, 2, 4, 6)


@dataclass(frozen=True)
class SparseVector:
    """A k-sparse vector of dimension n: sorted support plus active symbols."""

    n: int
    support: tuple
    symbols: np.ndarray

    def __post_init__(self):
        support = tuple(int(i) for i in self.support)
        object.__setattr__(self, "support", support)
        symbols = np.asarray(self.symbols, dtype=complex)
        object.__setattr__(self, "symbols", symbols)
        k = len(support)
        if not 1 <= k <= self.n:
            raise ValueError(f"support size {k} must be in [1, {self.n}]")
        if any(b <= a for a, b in zip(support, support[1:])):
            raise ValueError("support indices must be strictly increasing")
        if support[0] < 0 or support[-1] >= self.n:
            raise ValueError(f"support indices must lie in [0, {self.n})")
        if symbols.shape != (k,):
            raise ValueError(f"expected {k} symbols, got shape {symbols.shape}")
        if not np.all(np.isfinite(symbols)):
            raise ValueError("symbols must be finite")
        if np.any(symbols == 0):
            raise ValueError("active symbols must be nonzero")

    @property
    def k(self) -> int:
        return len(self.support)

    def dense(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=complex)
        out[list(self.support)] = self.symbols
        return out


@dataclass(frozen=True)
class CodecConfig:
    """Dimension, sparsity, and per-symbol modulation depth of the codec."""

    n: int
    k: int
    bits_per_symbol: int = 0

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.bits_per_symbol not in SYMBOL_BIT_CHOICES:
            raise ValueError(
                f"bits_per_symbol must be one of {SYMBOL_BIT_CHOICES}, "
                f"got {self.bits_per_symbol}"
            )

    @property
    def position_bits(self) -> int:
        return math.comb(self.n, self.k).bit_length() - 1

    @property
    def symbol_bits(self) -> int:
        return self.k * self.bits_per_symbol

    @property
    def payload_bits(self) -> int:
        return self.position_bits + self.symbol_bits

    @property
    def qam_order(self) -> int:
        return 1 << self.bits_per_symbol


def capacity(n: int, k: int, bits_per_symbol: int) -> int:
    """Total bits one block conveys: k*b_s plus floor(log2(C(n, k))).

    Computed with exact integer arithmetic (C(n, k) can exceed 100 bits).
    """
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    if bits_per_symbol < 0:
        raise ValueError("bits_per_symbol must be >= 0")
    return k * bits_per_symbol + (math.comb(n, k).bit_length() - 1)


def _validate_support(support: Sequence[int], n: int, k: int) -> tuple:
    support = tuple(int(i) for i in support)
    if len(support) != k:
        raise ValueError(f"support has {len(support)} elements, expected k={k}")
    if any(b <= a for a, b in zip(support, support[1:])):
        raise ValueError("support must be strictly increasing")
    if support[0] < 0 or support[-1] >= n:
        raise ValueError(f"support indices must lie in [0, {n})")
    return support


def support_rank(support: Sequence[int], n: int, k: int) -> int:
    """Lexicographic (combinadic) rank of a sorted k-subset of [0, n)."""
    support = _validate_support(support, n, k)
    rank = 0
    prev = -1
    for slot, c in enumerate(support):
        for v in range(prev + 1, c):
            rank += math.comb(n - 1 - v, k - 1 - slot)
        prev = c
    return rank


def support_unrank(rank: int, n: int, k: int) -> tuple:
    """Inverse of :func:`support_rank`: the rank-th k-subset in lex order."""
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= n, got k={k}, n={n}")
    rank = int(rank)
    if rank < 0 or rank >= math.comb(n, k):
        raise ValueError(f"rank {rank} outside [0, C({n},{k}))")
    support = []
    c = 0
    for slot in range(k):
        while True:
            count = math.comb(n - 1 - c, k - 1 - slot)
            if rank < count:
                break
            rank -= count
            c += 1
        support.append(c)
        c += 1
    return tuple(support)


def bits_to_int(bits: np.ndarray) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def int_to_bits(value: int, width: int) -> np.ndarray:
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.int64)


def encode_sparse(bits, config: CodecConfig) -> SparseVector:
    """Encode a payload word: position bits select the support (combinadic
    unrank), remaining bits become QAM symbols in support order."""
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size != config.payload_bits:
        raise ValueError(
            f"payload must be {config.payload_bits} bits, got {bits.size}"
        )
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    rank = bits_to_int(bits[: config.position_bits])
    support = support_unrank(rank, config.n, config.k)
    if config.bits_per_symbol:
        symbols = qam_modulate(bits[config.position_bits:], config.qam_order)
    else:
        symbols = np.ones(config.k, dtype=complex)
    return SparseVector(config.n, support, symbols)


def decode_sparse(sv: SparseVector, config: CodecConfig) -> np.ndarray:
    """Exact inverse of :func:`encode_sparse`.

    Symbols are sliced to the nearest constellation point before bit
    extraction, so noisy symbol estimates are accepted.  A support whose
    rank has no bit-word preimage raises UndecodableSupportError, which
    upstream decoders count as a block error.
    """
    if sv.n != config.n or sv.k != config.k:
        raise ValueError(
            f"sparse vector ({sv.n}, k={sv.k}) does not match config "
            f"({config.n}, k={config.k})"
        )
    rank = support_rank(sv.support, config.n, config.k)
    if rank >= (1 << config.position_bits):
        raise UndecodableSupportError(
            f"support rank {rank} >= 2^{config.position_bits}; no bit preimage"
        )
    position_part = int_to_bits(rank, config.position_bits)
    if config.bits_per_symbol:
        symbol_part = qam_demodulate(sv.symbols, config.qam_order)
        return np.concatenate([position_part, symbol_part])
    return position_part


def measurement_bound(n: int, k: int, c: float, log_base: float = 10.0) -> float:
    """The c*k*log(n/k) measurement-count estimate for recovering a k-sparse
    vector of dimension n.

    The logarithm base is a parameter (default 10): the usual statement of
    the bound leaves it unstated, and base 10 is the choice consistent with
    the worked 11%-of-1024 example this library reproduces.
    """
    if not 1 <= k < n:
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    if c <= 0:
        raise ValueError("constant c must be > 0")
    if log_base <= 1:
        raise ValueError("log base must be > 1")
    return c * k * math.log(n / k, log_base)
