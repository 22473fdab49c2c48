"""Simulated annealing over class orderings.

Each chain runs a fixed number of Metropolis iterations: propose a random
transposition (or, optionally, a segment reversal), always accept
non-worsening moves, accept a worsening move of size ``delta`` with
probability ``exp(delta / T)``, then cool geometrically ``T <- max(alpha*T,
min_temp)``.  The best ordering seen is tracked separately from the walk.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterator, Optional, Union

import numpy as np

from . import _kernels, rng
from .errors import ConfigError, SizeMismatchError
from .matrix import ClassOrdering, TaskLayout, random_ordering, reverse_ordering
from .scoring import check_no_overflow, counts_of, score

log = logging.getLogger(__name__)

ACCEPT_TARGET = 0.8
THREADS_ENV = "ORDERGRAPH_THREADS"


@dataclass(frozen=True)
class AnnealConfig:
    seed: int
    iterations: int = 200_000
    cooling: float = 0.99995
    init_temp: Union[float, str] = "calibrated"
    calibration_samples: int = 200
    restarts: int = 1
    reversal_move_prob: float = 0.0
    min_temp: float = 1e-9
    canonicalize: bool = False

    def __post_init__(self):
        if not isinstance(self.iterations, int) or self.iterations < 1:
            raise ConfigError("iterations must be a positive integer")
        if not 0.0 < self.cooling < 1.0:
            raise ConfigError("cooling factor must lie strictly between 0 and 1")
        if self.restarts < 1:
            raise ConfigError("restarts must be at least 1")
        if not 0.0 <= self.reversal_move_prob <= 1.0:
            raise ConfigError("reversal_move_prob must lie in [0, 1]")
        if not self.min_temp > 0.0:
            raise ConfigError("min_temp must be positive")
        if self.calibration_samples < 2:
            raise ConfigError("calibration_samples must be at least 2")
        if isinstance(self.init_temp, str):
            if self.init_temp != "calibrated":
                raise ConfigError("init_temp must be a positive number or 'calibrated'")
        elif not self.init_temp > 0:
            raise ConfigError("init_temp must be positive")


@dataclass(frozen=True, eq=False)
class AnnealTrace:
    """Per-iteration record of one chain, stored column-wise."""

    current_score: np.ndarray
    best_score: np.ndarray
    temperature: np.ndarray
    accepted: np.ndarray

    @property
    def iteration(self) -> np.ndarray:
        return np.arange(len(self.current_score))

    def __len__(self):
        return len(self.current_score)

    def __iter__(self) -> Iterator[tuple[int, int, int, float, bool]]:
        for i in range(len(self)):
            yield self[i]

    def __getitem__(self, i):
        return (
            i,
            int(self.current_score[i]),
            int(self.best_score[i]),
            float(self.temperature[i]),
            bool(self.accepted[i]),
        )

    def __eq__(self, other):
        if not isinstance(other, AnnealTrace):
            return NotImplemented
        return all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("current_score", "best_score", "temperature", "accepted")
        )

    @classmethod
    def empty(cls) -> "AnnealTrace":
        return cls(
            np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0), np.zeros(0, bool)
        )


@dataclass(frozen=True)
class AnnealResult:
    best: ClassOrdering
    best_score: int
    initial_score: int
    trace: AnnealTrace
    restart_id: int = 0
    seed: Optional[int] = None
    initial_temperature: float = 0.0


def chain_seed(seed: int, k: int) -> int:
    """Seed of restart chain ``k``: the base seed xor a splitmix64 hash of k."""
    return (seed ^ rng.mix64(k)) & rng.MASK64


def _arrays(M, W, n_expected: Optional[int] = None):
    m = np.array(counts_of(M), dtype=np.int64)
    w = np.array(counts_of(W), dtype=np.int64)
    if m.shape != w.shape or (n_expected is not None and m.shape[0] != n_expected):
        raise SizeMismatchError(
            f"sizes differ: matrix {m.shape[0]}, weights {w.shape[0]}"
            + ("" if n_expected is None else f", ordering {n_expected}")
        )
    check_no_overflow(m, w)
    return m, w


def calibrate_initial_temperature(
    M, W, start: ClassOrdering, samples: int = 200, seed: int = 0, min_temp: float = 1e-9
) -> float:
    """Temperature at which a move of average size is accepted with probability 0.8.

    Samples random transpositions of ``start`` and returns
    ``mean|delta| / ln(1/0.8)``, or ``min_temp`` when every sampled delta is 0.
    """
    if samples < 2:
        raise ConfigError("need at least 2 calibration samples")
    m, w = _arrays(M, W, start.n)
    state = rng.seed_state(seed, rng.STREAM_CALIBRATION)
    mean_abs = _kernels.mean_abs_swap_delta(m, w, start.array, samples, state)
    if mean_abs == 0.0:
        return min_temp
    return max(mean_abs / math.log(1.0 / ACCEPT_TARGET), min_temp)


def anneal(
    M, W, start: Optional[ClassOrdering], config: AnnealConfig, restart_id: int = 0
) -> AnnealResult:
    """Run a single annealing chain from ``start`` (seeded random when None)."""
    n = counts_of(M).shape[0]
    if start is None:
        start = random_ordering(n, config.seed)
    m, w = _arrays(M, W, start.n)
    if config.init_temp == "calibrated":
        t0 = calibrate_initial_temperature(
            m, w, start, config.calibration_samples, config.seed, config.min_temp
        )
    else:
        t0 = max(float(config.init_temp), config.min_temp)

    iters = config.iterations
    tr_current = np.empty(iters, dtype=np.int64)
    tr_best = np.empty(iters, dtype=np.int64)
    tr_temp = np.empty(iters, dtype=np.float64)
    tr_accepted = np.empty(iters, dtype=np.bool_)
    perm = start.array.copy()
    best_perm, best_score, initial = _kernels.anneal_chain(
        m, w, perm, iters, t0, config.cooling, config.min_temp,
        config.reversal_move_prob, rng.seed_state(config.seed, rng.STREAM_ANNEAL),
        tr_current, tr_best, tr_temp, tr_accepted,
    )
    for arr in (tr_current, tr_best, tr_temp, tr_accepted):
        arr.setflags(write=False)

    best = ClassOrdering(tuple(best_perm.tolist()))
    if config.canonicalize and np.array_equal(w, w[::-1, ::-1]):
        flipped = reverse_ordering(best)
        if flipped.perm < best.perm:
            best = flipped
    log.debug(
        "chain %d: T0=%.4g initial=%d best=%d", restart_id, t0, initial, best_score
    )
    return AnnealResult(
        best=best,
        best_score=int(best_score),
        initial_score=int(initial),
        trace=AnnealTrace(tr_current, tr_best, tr_temp, tr_accepted),
        restart_id=restart_id,
        seed=config.seed,
        initial_temperature=t0,
    )


def _thread_count(restarts: int, threads: Optional[int]) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV, "0")
        try:
            threads = int(raw)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if threads <= 0:
        threads = os.cpu_count() or 1
    return max(1, min(threads, restarts))


def multi_restart(
    M,
    W,
    config: AnnealConfig,
    layout: Optional[TaskLayout] = None,
    threads: Optional[int] = None,
) -> AnnealResult:
    """Best of ``config.restarts`` independent chains.

    Chain k uses seed ``chain_seed(config.seed, k)`` for both its random
    start and its moves. The winner has the highest best_score, ties going to
    the lowest k, so the result does not depend on how chains are scheduled.
    ``threads`` caps concurrency; None reads ORDERGRAPH_THREADS (0 = auto).
    """
    n = counts_of(M).shape[0]
    if layout is not None:
        layout.check(n)
    _arrays(M, W, n)

    def run(k: int) -> AnnealResult:
        s = chain_seed(config.seed, k)
        return anneal(M, W, random_ordering(n, s), replace(config, seed=s, restarts=1), k)

    workers = _thread_count(config.restarts, threads)
    if workers == 1:
        results = [run(k) for k in range(config.restarts)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, range(config.restarts)))
    winner = results[0]
    for r in results[1:]:
        if r.best_score > winner.best_score:
            winner = r
    assert winner.best_score == score(M, W, winner.best)
    return replace(winner, seed=config.seed)
