"""Synthetic confusion matrices with planted block structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import ConfigError
from .matrix import (
    ClassOrdering,
    ConfusionMatrix,
    TaskLayout,
    apply_ordering,
    random_ordering,
)


@dataclass(frozen=True)
class SynthSpec:
    num_blocks: int
    block_size: int
    diag_range: tuple[int, int] = (50, 80)
    within_range: tuple[int, int] = (20, 40)
    cross_range: tuple[int, int] = (0, 2)
    seed: int = 0

    def __post_init__(self):
        if self.num_blocks < 1 or self.block_size < 1:
            raise ConfigError("num_blocks and block_size must be at least 1")
        for name in ("diag_range", "within_range", "cross_range"):
            lo, hi = getattr(self, name)
            if not 0 <= lo <= hi:
                raise ConfigError(f"{name} must satisfy 0 <= lo <= hi, got ({lo}, {hi})")

    @property
    def n(self) -> int:
        return self.num_blocks * self.block_size


def block_cm(spec: SynthSpec) -> tuple[ConfusionMatrix, TaskLayout]:
    """Matrix whose classes come in ``num_blocks`` consecutive blocks.

    Every cell is drawn independently, so the result is not symmetric.
    Draws happen for all three ranges at every cell and the relevant one is
    kept, which keeps the stream layout independent of the block pattern.
    """
    n = spec.n
    state = rng.seed_state(spec.seed, rng.STREAM_SYNTH)
    draws = {}
    for name in ("diag_range", "within_range", "cross_range"):
        lo, hi = getattr(spec, name)
        out = np.empty(n * n, dtype=np.int64)
        rng.fill_integers(state, lo, hi, out)
        draws[name] = out.reshape(n, n)

    block = np.arange(n) // spec.block_size
    same = block[:, None] == block[None, :]
    counts = np.where(same, draws["within_range"], draws["cross_range"])
    np.fill_diagonal(counts, np.diagonal(draws["diag_range"]))
    layout = TaskLayout((spec.block_size,) * spec.num_blocks)
    return ConfusionMatrix(counts), layout


def shuffle_cm(M: ConfusionMatrix, seed: int) -> tuple[ConfusionMatrix, ClassOrdering]:
    """Relabel classes at random. Returns (shuffled matrix, the ordering used).

    ``apply_ordering(shuffled, invert_ordering(truth)) == M``, and shuffled
    class i is original class ``truth[i]``.
    """
    truth = random_ordering(M.n, seed)
    return apply_ordering(M, truth), truth
