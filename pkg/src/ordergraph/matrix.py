"""Core domain types: confusion matrices, orderings, task layouts, taxonomies.

Orderings use the position -> class convention: ``perm[p]`` is the class
placed at position ``p``, and reordering a matrix ``M`` by ``perm`` gives
``M'[i, j] = M[perm[i], perm[j]]`` (rows and columns moved together).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from . import rng
from .errors import (
    IncompleteTaxonomyError,
    InvalidPermutationError,
    LabelMismatchError,
    LayoutMismatchError,
    NegativeEntryError,
    NonSquareError,
    SizeMismatchError,
    ValidationError,
)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _as_int_grid(raw) -> np.ndarray:
    if isinstance(raw, np.ndarray):
        arr = raw
    else:
        rows = [list(r) for r in raw]
        if len({len(r) for r in rows}) > 1:
            raise NonSquareError("rows have different lengths")
        arr = np.array(rows, dtype=object)
        if arr.size == 0:
            arr = arr.reshape(len(rows), 0)
    if arr.ndim != 2:
        raise NonSquareError(f"expected a 2-d grid, got {arr.ndim} dimension(s)")
    if arr.dtype.kind not in "iub":
        for v in arr.flat:
            if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
                raise ValidationError(f"non-integer entry {v!r}")
    return arr


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """Square grid of counts; ``counts[i, j]`` = samples of class i predicted as j.

    ``labels`` is ``None`` when the matrix carries no class names; ``names``
    then falls back to ``"0" .. "n-1"``.
    """

    counts: np.ndarray
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        arr = _as_int_grid(self.counts)
        rows, cols = arr.shape
        if rows != cols:
            raise NonSquareError(f"confusion matrix is {rows}x{cols}, not square")
        if rows == 0:
            raise ValidationError("confusion matrix is empty")
        if (arr < 0).any():
            i, j = np.argwhere(arr < 0)[0]
            raise NegativeEntryError(f"negative count {arr[i, j]} at ({i}, {j})")
        arr = np.array(arr, dtype=np.int64)
        object.__setattr__(self, "counts", _frozen(arr))
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != rows:
                raise LabelMismatchError(f"{len(labels)} labels for {rows} classes")
            if len(set(labels)) != len(labels):
                raise LabelMismatchError("duplicate class labels")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.counts.shape[0]

    @property
    def names(self) -> tuple[str, ...]:
        if self.labels is None:
            return tuple(str(i) for i in range(self.n))
        return self.labels

    def __eq__(self, other):
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return f"ConfusionMatrix(n={self.n}, total={int(self.counts.sum())})"


@dataclass(frozen=True)
class ClassOrdering:
    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        n = len(perm)
        if n == 0:
            raise InvalidPermutationError("empty ordering")
        if sorted(perm) != list(range(n)):
            raise InvalidPermutationError(f"{perm} is not a permutation of 0..{n - 1}")
        object.__setattr__(self, "perm", perm)

    @property
    def n(self) -> int:
        return len(self.perm)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.perm, dtype=np.int64)

    def __len__(self):
        return len(self.perm)

    def __iter__(self):
        return iter(self.perm)

    def __getitem__(self, p):
        return self.perm[p]

    @classmethod
    def identity(cls, n: int) -> "ClassOrdering":
        return cls(tuple(range(n)))


@dataclass(frozen=True)
class TaskLayout:
    """Sizes of consecutive tasks along an ordering."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes:
            raise LayoutMismatchError("task layout has no tasks")
        if any(s < 1 for s in sizes):
            raise LayoutMismatchError(f"task sizes must be positive, got {sizes}")
        object.__setattr__(self, "sizes", sizes)

    @classmethod
    def equal(cls, n: int, num_tasks: int) -> "TaskLayout":
        """``num_tasks`` tasks of equal size; refuses splits that do not divide n."""
        if num_tasks < 1 or n % num_tasks:
            raise LayoutMismatchError(
                f"{num_tasks} tasks do not evenly divide {n} classes; "
                "pass explicit task sizes for a ragged split"
            )
        return cls((n // num_tasks,) * num_tasks)

    @property
    def num_tasks(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def boundaries(self) -> tuple[int, ...]:
        """Prefix sums, starting at 0 and ending at n."""
        out = [0]
        for s in self.sizes:
            out.append(out[-1] + s)
        return tuple(out)

    def task_of_position(self) -> np.ndarray:
        return np.repeat(np.arange(self.num_tasks), self.sizes)

    def reversed(self) -> "TaskLayout":
        return TaskLayout(self.sizes[::-1])

    def check(self, n: int) -> None:
        if self.n != n:
            raise LayoutMismatchError(f"task sizes sum to {self.n}, expected {n}")


@dataclass(frozen=True)
class TaxonomyMap:
    group_of: Mapping[int, int] = field(hash=False)

    def check(self, n: int) -> None:
        missing = [c for c in range(n) if c not in self.group_of]
        if missing:
            raise IncompleteTaxonomyError(
                f"taxonomy has no group for {len(missing)} class(es), first: {missing[0]}"
            )
        extra = [c for c in self.group_of if not 0 <= c < n]
        if extra:
            raise IncompleteTaxonomyError(f"taxonomy names unknown class {extra[0]}")


def validate_matrix(raw, labels: Optional[Sequence[str]] = None) -> ConfusionMatrix:
    return ConfusionMatrix(raw, None if labels is None else tuple(labels))


def _check_size(n: int, ordering: ClassOrdering) -> None:
    if ordering.n != n:
        raise SizeMismatchError(f"ordering has {ordering.n} classes, matrix has {n}")


def permute_grid(grid: np.ndarray, ordering: ClassOrdering) -> np.ndarray:
    p = ordering.array
    return grid[np.ix_(p, p)]


def apply_ordering(M, ordering: ClassOrdering):
    """Reorder rows and columns of ``M`` together.

    Accepts a :class:`ConfusionMatrix` (labels follow their classes), a
    :class:`~ordergraph.weights.WeightMatrix`, or a bare square array.
    """
    from .weights import WeightMatrix

    if isinstance(M, ConfusionMatrix):
        _check_size(M.n, ordering)
        labels = None if M.labels is None else tuple(M.labels[c] for c in ordering)
        return ConfusionMatrix(permute_grid(M.counts, ordering), labels)
    if isinstance(M, WeightMatrix):
        _check_size(M.n, ordering)
        return WeightMatrix(permute_grid(M.weights, ordering), f"{M.strategy}|permuted")
    arr = np.asarray(M)
    _check_size(arr.shape[0], ordering)
    return permute_grid(arr, ordering)


def random_ordering(n: int, seed: int) -> ClassOrdering:
    """Seeded uniform permutation (Fisher-Yates over xoshiro256**)."""
    if n < 1:
        raise ValidationError("n must be at least 1")
    perm = np.arange(n, dtype=np.int64)
    rng.shuffle_inplace(rng.seed_state(seed, rng.STREAM_PERMUTATION), perm)
    return ClassOrdering(tuple(perm.tolist()))


def coarse_grained_ordering(taxonomy: TaxonomyMap, n: int) -> ClassOrdering:
    taxonomy.check(n)
    return ClassOrdering(tuple(sorted(range(n), key=lambda c: (taxonomy.group_of[c], c))))


def split_tasks(ordering: ClassOrdering, layout: TaskLayout) -> list[frozenset[int]]:
    return [frozenset(c) for c in split_tasks_ordered(ordering, layout)]


def split_tasks_ordered(ordering: ClassOrdering, layout: TaskLayout) -> list[list[int]]:
    """Like :func:`split_tasks` but keeps each task's classes in sequence order."""
    layout.check(ordering.n)
    b = layout.boundaries
    return [list(ordering.perm[b[t] : b[t + 1]]) for t in range(layout.num_tasks)]


def reverse_ordering(ordering: ClassOrdering) -> ClassOrdering:
    return ClassOrdering(ordering.perm[::-1])


def invert_ordering(ordering: ClassOrdering) -> ClassOrdering:
    inv = [0] * ordering.n
    for p, c in enumerate(ordering.perm):
        inv[c] = p
    return ClassOrdering(tuple(inv))
