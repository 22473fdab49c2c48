"""Exact maximization by enumerating every ordering, for small n only."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import SizeMismatchError, TooLargeError
from .matrix import ClassOrdering
from .scoring import check_no_overflow, counts_of

DEFAULT_GUARD = 9


class OracleResult(NamedTuple):
    max_score: int
    argmax: ClassOrdering
    argmax_count: int


def exhaustive_best(M, W, max_n_guard: int = DEFAULT_GUARD) -> OracleResult:
    """Maximum score over all n! orderings.

    The returned argmax is the lexicographically smallest maximizer, so the
    answer does not depend on enumeration order.  Raises TooLargeError above
    ``max_n_guard`` classes.
    """
    m = np.array(counts_of(M), dtype=np.int64)
    w = np.array(counts_of(W), dtype=np.int64)
    if m.shape != w.shape:
        raise SizeMismatchError(f"matrix is {m.shape[0]}, weights are {w.shape[0]}")
    n = m.shape[0]
    if n > max_n_guard:
        raise TooLargeError(f"n={n} exceeds the exhaustive-search guard of {max_n_guard}")
    check_no_overflow(m, w)
    best, argmax, count = _kernels.heap_enumerate(m, w, n)
    return OracleResult(int(best), ClassOrdering(tuple(argmax.tolist())), int(count))
