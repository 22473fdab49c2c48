"""Compiled inner loops.

Everything here works on int64 arrays and assumes the caller has already
checked that scores fit in 64 bits (see ``scoring.check_no_overflow``).
``M`` is the confusion matrix in original class indices, ``W`` the weight
matrix over positions, ``perm`` the position -> class ordering.
"""

import math

import numpy as np
from numba import njit

from .rng import next_below, next_float


@njit(cache=True, nogil=True)
def perm_score(M, W, perm):
    n = perm.shape[0]
    total = np.int64(0)
    for i in range(n):
        mi = perm[i]
        for j in range(n):
            w = W[i, j]
            if w != 0:
                total += w * M[mi, perm[j]]
    return total


@njit(cache=True, nogil=True)
def swap_delta(M, W, perm, a, b):
    """Score change from exchanging the classes at positions a and b (a != b)."""
    n = perm.shape[0]
    ca = perm[a]
    cb = perm[b]
    d = np.int64(0)
    for k in range(n):
        if k == a or k == b:
            continue
        ck = perm[k]
        # row a/b against column k, then column a/b against row k
        d += (W[a, k] - W[b, k]) * (M[cb, ck] - M[ca, ck])
        d += (W[k, a] - W[k, b]) * (M[ck, cb] - M[ck, ca])
    # the four cells where rows and columns a, b intersect
    d += (W[a, a] - W[b, b]) * (M[cb, cb] - M[ca, ca])
    d += (W[a, b] - W[b, a]) * (M[cb, ca] - M[ca, cb])
    return d


@njit(cache=True, nogil=True)
def reversal_delta(M, W, perm, a, b):
    """Score change from reversing the segment perm[a..b] (inclusive, a < b)."""
    n = perm.shape[0]
    d = np.int64(0)
    for i in range(a, b + 1):
        old_i = perm[i]
        new_i = perm[a + b - i]
        for j in range(n):
            if a <= j <= b:
                new_j = perm[a + b - j]
            else:
                new_j = perm[j]
            d += W[i, j] * (M[new_i, new_j] - M[old_i, perm[j]])
    for i in range(n):
        if a <= i <= b:
            continue
        ci = perm[i]
        for j in range(a, b + 1):
            d += W[i, j] * (M[ci, perm[a + b - j]] - M[ci, perm[j]])
    return d


@njit(cache=True, nogil=True)
def _propose(state, n):
    a = next_below(state, n)
    b = next_below(state, n - 1)
    if b >= a:
        b += 1
    if a > b:
        a, b = b, a
    return a, b


@njit(cache=True, nogil=True)
def mean_abs_swap_delta(M, W, perm, samples, state):
    n = perm.shape[0]
    if n < 2:
        return 0.0
    total = 0.0
    for _ in range(samples):
        a, b = _propose(state, n)
        total += abs(swap_delta(M, W, perm, a, b))
    return total / samples


@njit(cache=True, nogil=True)
def anneal_chain(
    M, W, perm, iterations, t0, alpha, min_temp, reversal_prob, state,
    tr_current, tr_best, tr_temp, tr_accepted,
):
    """Metropolis loop maximizing the score; ``perm`` is updated in place.

    Returns (best_perm, best_score, initial_score). Trace arrays receive one
    entry per iteration: the temperature recorded is the one used for that
    iteration's acceptance test.
    """
    n = perm.shape[0]
    current = perm_score(M, W, perm)
    initial = current
    best = current
    best_perm = perm.copy()
    temp = t0
    for it in range(iterations):
        accepted = False
        if n >= 2:
            a, b = _propose(state, n)
            use_reversal = reversal_prob > 0.0 and next_float(state) < reversal_prob
            if use_reversal:
                delta = reversal_delta(M, W, perm, a, b)
            else:
                delta = swap_delta(M, W, perm, a, b)
            if delta >= 0:
                accepted = True
            elif next_float(state) < math.exp(delta / temp):
                accepted = True
            if accepted:
                if use_reversal:
                    lo = a
                    hi = b
                    while lo < hi:
                        tmp = perm[lo]
                        perm[lo] = perm[hi]
                        perm[hi] = tmp
                        lo += 1
                        hi -= 1
                else:
                    tmp = perm[a]
                    perm[a] = perm[b]
                    perm[b] = tmp
                current += delta
                if current > best:
                    best = current
                    best_perm[:] = perm
        tr_current[it] = current
        tr_best[it] = best
        tr_temp[it] = temp
        tr_accepted[it] = accepted
        temp = max(alpha * temp, min_temp)
    return best_perm, best, initial


@njit(cache=True, nogil=True)
def _lex_less(x, y):
    for i in range(x.shape[0]):
        if x[i] != y[i]:
            return x[i] < y[i]
    return False


@njit(cache=True, nogil=True)
def heap_enumerate(M, W, n):
    """Visit all n! orderings with Heap's algorithm, one transposition apart.

    Returns (max_score, lexicographically smallest maximizer, maximizer count).
    """
    perm = np.arange(n)
    c = np.zeros(n, dtype=np.int64)
    current = perm_score(M, W, perm)
    best = current
    argmax = perm.copy()
    count = np.int64(1)
    i = 1
    while i < n:
        if c[i] < i:
            if i % 2 == 0:
                a = 0
            else:
                a = c[i]
            current += swap_delta(M, W, perm, a, i)
            tmp = perm[a]
            perm[a] = perm[i]
            perm[i] = tmp
            if current > best:
                best = current
                argmax[:] = perm
                count = 1
            elif current == best:
                count += 1
                if _lex_less(perm, argmax):
                    argmax[:] = perm
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1
    return best, argmax, count
