"""Greedy sparse recovery and linear symbol detection.

``omp`` identifies a k-element support by iteratively picking the column
most correlated with the residual and least-squares refitting over the
selected set.  ``lmmse_detect`` estimates the active symbols on a known
support, and ``match_support_tolerant`` is the relaxed support-comparison
rule that corrects near-miss index errors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericalDegeneracyError


@dataclass(frozen=True)
class RecoveryResult:
    """Support estimate (ascending) with matching coefficients and the final
    residual norm."""

    support: tuple
    symbol_estimates: np.ndarray
    residual_norm: float
    iterations: int


def omp(y, matrix, k: int) -> RecoveryResult:
    """Orthogonal matching pursuit with exactly k iterations.

    Per iteration: pick the unselected column maximizing
    ``|<column, residual>| / ||column||`` (ties toward the lowest index),
    then refit all selected columns by least squares and update the
    residual.  The sparsity k is fixed by design, so no residual-threshold
    stopping rule is applied.
    """
    matrix = np.asarray(matrix, dtype=complex)
    y = np.asarray(y, dtype=complex).ravel()
    if matrix.ndim != 2:
        raise ValueError("sensing matrix must be 2-D")
    m, n = matrix.shape
    if y.shape != (m,):
        raise ValueError(f"measurement length {y.size} != matrix rows {m}")
    if not 1 <= k <= min(m, n):
        raise ValueError(f"need 1 <= k <= min(m, n)={min(m, n)}, got k={k}")

    col_norms = np.linalg.norm(matrix, axis=0)
    safe_norms = np.where(col_norms > 0, col_norms, 1.0)
    residual = y.copy()
    selected: list[int] = []
    available = np.ones(n, dtype=bool)
    coef = np.zeros(0, dtype=complex)
    for _ in range(k):
        corr = np.abs(matrix.conj().T @ residual) / safe_norms
        corr[~available] = -1.0
        pick = int(np.argmax(corr))
        selected.append(pick)
        available[pick] = False
        sub = matrix[:, selected]
        coef, _, rank, _ = np.linalg.lstsq(sub, y, rcond=None)
        if rank < len(selected):
            raise NumericalDegeneracyError(
                f"selected columns {selected} are rank deficient (rank {rank})"
            )
        residual = y - sub @ coef

    order = np.argsort(selected)
    support = tuple(int(selected[i]) for i in order)
    estimates = coef[order]
    return RecoveryResult(support, estimates, float(np.linalg.norm(residual)), k)


def lmmse_detect(y, reduced_matrix, noise_variance: float) -> np.ndarray:
    """LMMSE symbol estimate on a known support under a unit-energy prior:
    ``(A^H A + noise_variance I)^-1 A^H y``.

    With zero noise variance this is the least-squares solution; a singular
    system (possible only then) raises NumericalDegeneracyError.
    """
    reduced_matrix = np.asarray(reduced_matrix, dtype=complex)
    y = np.asarray(y, dtype=complex).ravel()
    if reduced_matrix.ndim != 2:
        raise ValueError("reduced matrix must be 2-D")
    m, k = reduced_matrix.shape
    if y.shape != (m,):
        raise ValueError(f"measurement length {y.size} != matrix rows {m}")
    if k > m:
        raise ValueError(f"support size {k} exceeds measurement count {m}")
    if noise_variance < 0:
        raise ValueError("noise variance must be >= 0")
    gram = reduced_matrix.conj().T @ reduced_matrix
    gram[np.diag_indices(k)] += noise_variance
    rhs = reduced_matrix.conj().T @ y
    try:
        estimate = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericalDegeneracyError(f"regularized system singular: {exc}") from exc
    if not np.all(np.isfinite(estimate)):
        raise NumericalDegeneracyError("regularized system numerically singular")
    return estimate


def _index_distance(a: int, b: int, n: int | None) -> int:
    d = abs(a - b)
    if n is not None:
        d = min(d, n - d)
    return d


def match_support_tolerant(
    decoded: Sequence[int],
    expected: Sequence[int],
    d: int,
    n: int | None = None,
) -> tuple[tuple, bool]:
    """Relaxed support comparison correcting near-miss index errors.

    Pairs the sorted decoded indices with the sorted expected indices in
    order (for sorted sequences the order-preserving assignment minimizes
    the largest pair distance, so no correctable case is missed); if every
    pair lies within distance ``d`` the expected support is returned as the
    correction, otherwise the decoded support is returned unchanged.
    Distance is circular mod ``n`` when ``n`` is given — all cyclic shifts
    of the pairing are then tried, which handles supports wrapping the band
    edge — and plain absolute difference otherwise.  With ``d = 0`` this is
    exact set equality.
    """
    decoded = tuple(sorted(int(i) for i in decoded))
    expected = tuple(sorted(int(i) for i in expected))
    if len(decoded) != len(expected):
        raise ValueError(
            f"support sizes differ: {len(decoded)} vs {len(expected)}"
        )
    if d < 0:
        raise ValueError("tolerance d must be >= 0")
    k = len(decoded)
    shifts = range(k) if n is not None else (0,)
    for shift in shifts:
        if all(
            _index_distance(decoded[(i + shift) % k], expected[i], n) <= d
            for i in range(k)
        ):
            return expected, True
    return decoded, False
