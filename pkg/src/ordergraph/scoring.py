"""The trace score of a reordered confusion matrix and its swap deltas.

``score(M, W, perm) = sum_ij W[i, j] * M[perm[i], perm[j]]``, which is
``tr(W^T M')`` for the reordered matrix ``M'``.  Scores are exact integers.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import PositionOutOfRangeError, ScoreOverflowError, SizeMismatchError
from .matrix import ClassOrdering, ConfusionMatrix, permute_grid
from .weights import WeightMatrix

_INT64_SAFE = 1 << 62


def counts_of(M) -> np.ndarray:
    if isinstance(M, ConfusionMatrix):
        return M.counts
    if isinstance(M, WeightMatrix):
        return M.weights
    return np.asarray(M)


def score_bound(M, W) -> int:
    """Upper bound on |score| and, within a factor of two, on any swap delta."""
    m = counts_of(M)
    w = counts_of(W)
    return int(np.abs(w).max(initial=0)) * int(np.abs(m).sum(dtype=object))


def check_no_overflow(M, W) -> None:
    bound = score_bound(M, W)
    if bound >= _INT64_SAFE:
        raise ScoreOverflowError(
            f"score bound {bound} does not fit the 64-bit accumulator"
        )


def _check_sizes(m: np.ndarray, w: np.ndarray, ordering: ClassOrdering) -> None:
    if not (m.shape[0] == w.shape[0] == ordering.n):
        raise SizeMismatchError(
            f"sizes differ: matrix {m.shape[0]}, weights {w.shape[0]}, ordering {ordering.n}"
        )


def score(M, W, ordering: ClassOrdering | None = None) -> int:
    """Weighted sum of the reordered matrix; identity ordering when omitted.

    Uses int64 when the result provably fits and falls back to exact
    Python-integer arithmetic otherwise, so the value is never wrapped.
    """
    m = counts_of(M)
    w = counts_of(W)
    if ordering is None:
        ordering = ClassOrdering.identity(m.shape[0])
    _check_sizes(m, w, ordering)
    permuted = permute_grid(m, ordering)
    if score_bound(m, w) < _INT64_SAFE:
        return int((w.astype(np.int64) * permuted.astype(np.int64)).sum())
    return int((w.astype(object) * permuted.astype(object)).sum())


def swap_delta(M, W, ordering: ClassOrdering, a: int, b: int) -> int:
    """``score`` after exchanging positions a and b, minus ``score`` before. O(n)."""
    m = counts_of(M)
    w = counts_of(W)
    _check_sizes(m, w, ordering)
    n = ordering.n
    if not (0 <= a < b < n):
        raise PositionOutOfRangeError(f"need 0 <= a < b < {n}, got a={a}, b={b}")
    check_no_overflow(m, w)
    return int(
        _kernels.swap_delta(
            m.astype(np.int64), w.astype(np.int64), ordering.array, a, b
        )
    )


def swap_positions(ordering: ClassOrdering, a: int, b: int) -> ClassOrdering:
    perm = list(ordering.perm)
    perm[a], perm[b] = perm[b], perm[a]
    return ClassOrdering(tuple(perm))
