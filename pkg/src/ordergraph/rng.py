"""Portable seeded random numbers.

All randomness in the package comes from xoshiro256** (Blackman & Vigna),
with its four 64-bit state words filled from a splitmix64 sequence.  Both are
fully specified integer algorithms, so a given seed produces the same stream
on every platform and numpy version.

The generator state is a ``uint64[4]`` array so the compiled kernels can
advance it in place.  ``stream`` selects independent sub-streams of one seed.
"""

import numpy as np
from numba import njit

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM_MUL = 0xD1B54A32D192ED03

# stream ids used across the package
STREAM_PERMUTATION = 0
STREAM_ANNEAL = 1
STREAM_CALIBRATION = 2
STREAM_SYNTH = 3


def splitmix64(x: int) -> tuple[int, int]:
    """One splitmix64 step. Returns (new_state, output)."""
    x = (x + _GOLDEN) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return x, z ^ (z >> 31)


def mix64(k: int) -> int:
    """splitmix64 output for input ``k``; used to derive per-chain seeds."""
    return splitmix64(k & MASK64)[1]


def seed_state(seed: int, stream: int = 0) -> np.ndarray:
    x = (seed ^ (stream * _STREAM_MUL)) & MASK64
    words = []
    for _ in range(4):
        x, out = splitmix64(x)
        words.append(out)
    return np.array(words, dtype=np.uint64)


@njit(cache=True, nogil=True)
def _rotl(x, k):
    return (x << np.uint64(k)) | (x >> np.uint64(64 - k))


@njit(cache=True, nogil=True)
def next_u64(s):
    result = _rotl(s[1] * np.uint64(5), 7) * np.uint64(9)
    t = s[1] << np.uint64(17)
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@njit(cache=True, nogil=True)
def next_float(s):
    """Uniform double in [0, 1) from the top 53 bits."""
    return np.float64(next_u64(s) >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True, nogil=True)
def next_below(s, bound):
    """Unbiased integer in [0, bound) by rejection sampling; bound >= 1."""
    r = np.uint64(bound)
    threshold = (np.uint64(0) - r) % r
    while True:
        x = next_u64(s)
        if x >= threshold:
            return np.int64(x % r)


@njit(cache=True, nogil=True)
def shuffle_inplace(s, arr):
    """Fisher-Yates, walking from the last slot down."""
    for i in range(arr.shape[0] - 1, 0, -1):
        j = next_below(s, i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp


@njit(cache=True, nogil=True)
def fill_integers(s, lo, hi, out):
    """Fill ``out`` with uniform integers from the closed range [lo, hi]."""
    span = hi - lo + 1
    for i in range(out.shape[0]):
        out[i] = lo + next_below(s, span)
