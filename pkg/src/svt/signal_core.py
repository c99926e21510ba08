"""Complex-baseband numeric substrate shared by every transmission scheme.

Provides unitary DFT/IDFT construction, consecutive-row partial IDFT
selection, mutual coherence of a sensing matrix, Gray-mapped square QAM,
and circularly-symmetric AWGN, all on top of plain numpy arrays.

Conventions fixed here (and relied on everywhere else):

* DFT matrix ``F[a, b] = exp(-2j*pi*a*b/n) / sqrt(n)`` (unitary); the IDFT
  is its conjugate transpose.
* QAM constellations are Gray-labeled per axis and scaled to unit average
  energy; the all-zeros word maps to the most-positive level on both axes,
  so for order 4 the bits ``00`` map to ``(1+1j)/sqrt(2)``.
* Demodulation slices to the minimum-distance constellation point, breaking
  exact ties toward the lowest constellation index.
* Noise of variance ``v`` means total complex variance ``v`` (``v/2`` per
  real dimension).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QAM_ORDERS = (4, 16, 64)


@dataclass(frozen=True)
class RngStream:
    """Deterministic, independently-seedable randomness source.

    Two streams with the same ``(master_seed, stream_id)`` always produce
    identical samples; distinct ``stream_id`` values give statistically
    independent streams.  ``generator()`` returns a *fresh* generator each
    call, so every operation consuming an RngStream is a pure function of
    its inputs and the two seed fields.
    """

    master_seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        return np.random.default_rng([self.master_seed, self.stream_id])


def dft_matrix(n: int) -> np.ndarray:
    """Unitary n-point DFT matrix F with F[a,b] = exp(-2j*pi*a*b/n)/sqrt(n)."""
    if n < 1:
        raise ValueError(f"DFT size must be >= 1, got {n}")
    idx = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(idx, idx) / n) / np.sqrt(n)


def idft_matrix(n: int) -> np.ndarray:
    """Conjugate transpose of :func:`dft_matrix`."""
    return dft_matrix(n).conj().T


def partial_idft(n: int, offset: int, m: int) -> np.ndarray:
    """m x n submatrix of the unitary IDFT taking rows offset..offset+m-1.

    This is the sensing matrix obtained by keeping ``m`` consecutive
    time-domain samples of an ``n``-point inverse transform.
    """
    if n < 1:
        raise ValueError(f"transform size must be >= 1, got {n}")
    if m < 1 or m > n:
        raise ValueError(f"sample count m={m} must satisfy 1 <= m <= n={n}")
    if offset < 0 or offset + m > n:
        raise ValueError(
            f"sample window [{offset}, {offset + m}) falls outside [0, {n})"
        )
    rows = np.arange(offset, offset + m)
    cols = np.arange(n)
    return np.exp(2j * np.pi * np.outer(rows, cols) / n) / np.sqrt(n)


def mutual_coherence(matrix: np.ndarray) -> float:
    """Largest normalized inner-product magnitude over distinct column pairs.

    Returns a value in [0, 1]; raises on zero columns (undefined
    normalization) or on matrices with fewer than two columns.
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[1] < 2:
        raise ValueError("mutual coherence needs a matrix with >= 2 columns")
    norms = np.linalg.norm(matrix, axis=0)
    if np.any(norms == 0):
        raise ValueError("matrix has a zero column; coherence is undefined")
    gram = np.abs(matrix.conj().T @ matrix) / np.outer(norms, norms)
    np.fill_diagonal(gram, 0.0)
    return min(float(gram.max()), 1.0)


def _gray_to_binary(g: int) -> int:
    mask = g >> 1
    while mask:
        g ^= mask
        mask >>= 1
    return g


def _constellation(order: int) -> np.ndarray:
    """Gray-labeled square QAM points indexed by symbol integer, unit energy.

    The symbol integer concatenates the I-axis Gray word (high bits) and the
    Q-axis Gray word (low bits); on each axis the all-zeros word is the
    most-positive amplitude level.
    """
    if order not in QAM_ORDERS:
        raise ValueError(f"unsupported QAM order {order}; expected one of {QAM_ORDERS}")
    bits_per_axis = int(np.log2(order)) // 2
    levels_count = 1 << bits_per_axis
    # gray word g -> amplitude level; binary 0 is the top level
    axis = np.empty(levels_count)
    for g in range(levels_count):
        axis[g] = (levels_count - 1) - 2 * _gray_to_binary(g)
    i_axis = np.repeat(axis, levels_count)
    q_axis = np.tile(axis, levels_count)
    points = i_axis + 1j * q_axis
    return points / np.sqrt(2.0 * (order - 1) / 3.0)


_CONSTELLATIONS = {order: _constellation(order) for order in QAM_ORDERS}


def qam_constellation(order: int) -> np.ndarray:
    """Read-only copy of the Gray-mapped unit-energy constellation."""
    if order not in _CONSTELLATIONS:
        raise ValueError(f"unsupported QAM order {order}; expected one of {QAM_ORDERS}")
    return _CONSTELLATIONS[order].copy()


def qam_modulate(bits, order: int) -> np.ndarray:
    """Map a 0/1 sequence to Gray-coded square QAM symbols of unit average energy."""
    const = _CONSTELLATIONS.get(order)
    if const is None:
        raise ValueError(f"unsupported QAM order {order}; expected one of {QAM_ORDERS}")
    bits = np.asarray(bits, dtype=np.int64).ravel()
    bps = int(np.log2(order))
    if bits.size % bps:
        raise ValueError(f"bit count {bits.size} is not a multiple of {bps}")
    if bits.size == 0:
        return np.empty(0, dtype=complex)
    if np.any((bits != 0) & (bits != 1)):
        raise ValueError("bits must be 0 or 1")
    weights = 1 << np.arange(bps - 1, -1, -1)
    symbols_idx = bits.reshape(-1, bps) @ weights
    return const[symbols_idx]


def qam_demodulate(symbols, order: int) -> np.ndarray:
    """Minimum-distance slicing back to bits; exact inverse of qam_modulate
    on noiseless input.  Ties go to the lowest constellation index."""
    const = _CONSTELLATIONS.get(order)
    if const is None:
        raise ValueError(f"unsupported QAM order {order}; expected one of {QAM_ORDERS}")
    symbols = np.asarray(symbols, dtype=complex).ravel()
    if symbols.size == 0:
        return np.empty(0, dtype=np.int64)
    d2 = np.abs(symbols[:, None] - const[None, :]) ** 2
    idx = np.argmin(d2, axis=1)  # first minimum = lowest index
    bps = int(np.log2(order))
    shifts = np.arange(bps - 1, -1, -1)
    return ((idx[:, None] >> shifts) & 1).astype(np.int64).ravel()


def awgn(signal, noise_variance: float, rng: RngStream) -> np.ndarray:
    """Add circularly-symmetric complex Gaussian noise of the given total
    per-sample variance."""
    if noise_variance < 0:
        raise ValueError(f"noise variance must be >= 0, got {noise_variance}")
    signal = np.asarray(signal, dtype=complex)
    if noise_variance == 0:
        return signal.copy()
    gen = rng.generator()
    scale = np.sqrt(noise_variance / 2.0)
    noise = scale * (gen.standard_normal(signal.shape) + 1j * gen.standard_normal(signal.shape))
    return signal + noise
