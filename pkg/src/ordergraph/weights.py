"""Objective weight matrices, one generator per ordering strategy.

A weight matrix says where in the reordered confusion matrix confusion mass
is rewarded.  All generators produce symmetric, zero-diagonal, nonnegative
integer matrices; the diagonal carries no information because the set of
diagonal counts is the same under every reordering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, DegenerateSizeError, MissingLayoutError, ValidationError
from .matrix import TaskLayout

BAND_KINDS = ("maxconf", "minconf")
TASK_KINDS = ("eqtask", "inctask", "dectask")
KINDS = BAND_KINDS + TASK_KINDS

# lowercase identifiers -> names used in the literature
DISPLAY_NAMES = {
    "maxconf": "maxConf",
    "minconf": "minConf",
    "eqtask": "eqTaskConf",
    "inctask": "incTaskConf",
    "dectask": "decTaskConf",
}

_PROFILE_OF_KIND = {"eqtask": "equal", "inctask": "increasing", "dectask": "decreasing"}


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    weights: np.ndarray
    strategy: str = "custom"

    def __post_init__(self):
        w = np.asarray(self.weights)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise ValidationError(f"weight matrix must be square, got shape {w.shape}")
        if w.dtype.kind not in "iu":
            raise ValidationError("weights must be integers")
        if (w < 0).any():
            raise ValidationError("weights must be nonnegative")
        if not np.array_equal(w, w.T):
            raise ValidationError("weight matrix must be symmetric")
        if np.diagonal(w).any():
            raise ValidationError("weight matrix must have a zero diagonal")
        w = np.array(w, dtype=np.int64)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def is_reversal_symmetric(self) -> bool:
        """True when ``W[i, j] == W[n-1-i, n-1-j]`` everywhere."""
        return bool(np.array_equal(self.weights, self.weights[::-1, ::-1]))

    def __eq__(self, other):
        if not isinstance(other, WeightMatrix):
            return NotImplemented
        return np.array_equal(self.weights, other.weights)

    def __repr__(self):
        return f"WeightMatrix(n={self.n}, strategy={self.strategy!r})"


@dataclass(frozen=True)
class StrategySpec:
    kind: str
    layout: Optional[TaskLayout] = None
    within_weight: int = 1
    cross_weight: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown strategy {self.kind!r}; expected one of {KINDS}")
        if self.kind in TASK_KINDS and self.layout is None:
            raise MissingLayoutError(f"strategy {self.kind!r} needs a task layout")
        if self.kind in BAND_KINDS and self.layout is not None:
            raise ConfigError(f"strategy {self.kind!r} takes no task layout")
        if self.within_weight < 1:
            raise ConfigError("within_weight must be a positive integer")
        if self.cross_weight < 0:
            raise ConfigError("cross_weight must be nonnegative")


def band_weights(n: int, direction: str = "max") -> WeightMatrix:
    """Linear band kernel.

    ``max`` rewards mass next to the diagonal (``n - |i-j|``), ``min`` rewards
    mass far from it (``|i-j|``).
    """
    if n < 2:
        raise DegenerateSizeError(f"band weights need n >= 2, got {n}")
    idx = np.arange(n)
    dist = np.abs(idx[:, None] - idx[None, :])
    if direction == "max":
        w = n - dist
    elif direction == "min":
        w = dist.copy()
    else:
        raise ConfigError(f"direction must be 'max' or 'min', got {direction!r}")
    np.fill_diagonal(w, 0)
    return WeightMatrix(w, f"band:{direction}")


def task_block_weights(
    layout: Optional[TaskLayout],
    profile: str = "equal",
    within_weight: int = 1,
    cross_weight: int = 0,
) -> WeightMatrix:
    """Block-diagonal kernel over the tasks of ``layout``.

    Pairs inside task t get ``within_weight`` scaled by the profile:
    1 (equal), t+1 (increasing) or T-t (decreasing). Pairs in different tasks
    get ``cross_weight``.
    """
    if layout is None:
        raise MissingLayoutError("task_block_weights needs a task layout")
    T = layout.num_tasks
    task = layout.task_of_position()
    if profile == "equal":
        ramp = np.ones(T, dtype=np.int64)
    elif profile == "increasing":
        ramp = np.arange(1, T + 1, dtype=np.int64)
    elif profile == "decreasing":
        ramp = np.arange(T, 0, -1, dtype=np.int64)
    else:
        raise ConfigError(f"unknown profile {profile!r}")
    same = task[:, None] == task[None, :]
    w = np.where(same, within_weight * ramp[task][:, None], cross_weight).astype(np.int64)
    np.fill_diagonal(w, 0)
    return WeightMatrix(
        w, f"tasks:{profile}(sizes={list(layout.sizes)},within={within_weight},cross={cross_weight})"
    )


def build_weights(spec: StrategySpec, n: int) -> WeightMatrix:
    if spec.kind == "maxconf":
        return band_weights(n, "max")
    if spec.kind == "minconf":
        return band_weights(n, "min")
    spec.layout.check(n)
    return task_block_weights(
        spec.layout, _PROFILE_OF_KIND[spec.kind], spec.within_weight, spec.cross_weight
    )
