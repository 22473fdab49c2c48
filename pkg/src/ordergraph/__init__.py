"""Class orderings for class-incremental learning, found by annealing a
trace score over permutations of a confusion matrix."""

from .anneal import AnnealConfig, AnnealResult, AnnealTrace, anneal, calibrate_initial_temperature, multi_restart
from .matrix import (
    ClassOrdering,
    ConfusionMatrix,
    TaskLayout,
    TaxonomyMap,
    apply_ordering,
    coarse_grained_ordering,
    invert_ordering,
    random_ordering,
    reverse_ordering,
    split_tasks,
    validate_matrix,
)
from .oracle import exhaustive_best
from .scoring import score, swap_delta
from .synth import SynthSpec, block_cm, shuffle_cm
from .weights import StrategySpec, WeightMatrix, band_weights, build_weights, task_block_weights

__all__ = [
    "AnnealConfig",
    "AnnealResult",
    "AnnealTrace",
    "ClassOrdering",
    "ConfusionMatrix",
    "StrategySpec",
    "SynthSpec",
    "TaskLayout",
    "TaxonomyMap",
    "WeightMatrix",
    "anneal",
    "apply_ordering",
    "band_weights",
    "block_cm",
    "build_weights",
    "calibrate_initial_temperature",
    "coarse_grained_ordering",
    "exhaustive_best",
    "invert_ordering",
    "multi_restart",
    "random_ordering",
    "reverse_ordering",
    "score",
    "shuffle_cm",
    "split_tasks",
    "swap_delta",
    "task_block_weights",
    "validate_matrix",
]
