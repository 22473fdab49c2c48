import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from conftest import EXAMPLE_CM, matrix_and_perm, random_perm
from ordergraph import (
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
from ordergraph.errors import (
    IncompleteTaxonomyError,
    InvalidPermutationError,
    LabelMismatchError,
    LayoutMismatchError,
    NegativeEntryError,
    NonSquareError,
    SizeMismatchError,
    ValidationError,
)


def _relabel_oracle(grid, perm):
    n = len(perm)
    return [[grid[perm[i]][perm[j]] for j in range(n)] for i in range(n)]


class TestValidateMatrix:
    def test_well_formed(self):
        M = validate_matrix(EXAMPLE_CM)
        assert M.n == 3
        assert M.names == ("0", "1", "2")
        assert M.labels is None

    def test_non_square(self):
        with pytest.raises(NonSquareError):
            validate_matrix([[1, 2], [3, 4], [5, 6]])

    def test_ragged(self):
        with pytest.raises(NonSquareError):
            validate_matrix([[1, 2], [3]])

    def test_negative(self):
        with pytest.raises(NegativeEntryError):
            validate_matrix([[0, -1], [0, 0]])

    def test_non_integer(self):
        with pytest.raises(ValidationError):
            validate_matrix([[0, 1.5], [0, 0]])

    @pytest.mark.parametrize("labels", [("a",), ("a", "a")])
    def test_label_mismatch(self, labels):
        with pytest.raises(LabelMismatchError):
            validate_matrix([[1, 0], [0, 1]], labels)

    def test_immutable(self, example_cm):
        with pytest.raises(ValueError):
            example_cm.counts[0, 0] = 9


class TestApplyOrdering:
    def test_example(self, example_cm):
        sigma = ClassOrdering((2, 0, 1))
        expected = [[6, 1, 0], [0, 5, 1], [2, 0, 4]]
        assert _relabel_oracle(EXAMPLE_CM, sigma.perm) == expected
        assert apply_ordering(example_cm, sigma).counts.tolist() == expected

    def test_identity(self, example_cm):
        assert apply_ordering(example_cm, ClassOrdering.identity(3)) == example_cm

    def test_two_by_two_swap(self):
        a, b, c, d = 1, 2, 3, 4
        M = ConfusionMatrix([[a, b], [c, d]])
        assert apply_ordering(M, ClassOrdering((1, 0))).counts.tolist() == [[d, c], [b, a]]

    def test_labels_follow(self):
        M = ConfusionMatrix(EXAMPLE_CM, ("cat", "dog", "fox"))
        assert apply_ordering(M, ClassOrdering((2, 0, 1))).labels == ("fox", "cat", "dog")

    def test_size_mismatch(self, example_cm):
        with pytest.raises(SizeMismatchError):
            apply_ordering(example_cm, ClassOrdering((1, 0)))

    @given(matrix_and_perm())
    def test_matches_relabel_oracle(self, mp):
        M, sigma = mp
        assert apply_ordering(M, sigma).counts.tolist() == _relabel_oracle(
            M.counts.tolist(), sigma.perm
        )

    @given(matrix_and_perm())
    def test_preserves_diagonal_and_total(self, mp):
        M, sigma = mp
        P = apply_ordering(M, sigma)
        assert sorted(np.diagonal(P.counts)) == sorted(np.diagonal(M.counts))
        assert P.counts.sum() == M.counts.sum()

    @given(matrix_and_perm())
    def test_inverse_round_trip(self, mp):
        M, sigma = mp
        assert apply_ordering(apply_ordering(M, sigma), invert_ordering(sigma)) == M


class TestClassOrdering:
    def test_rejects_non_bijection(self):
        with pytest.raises(InvalidPermutationError):
            ClassOrdering((0, 0, 1))
        with pytest.raises(InvalidPermutationError):
            ClassOrdering((1, 2))

    def test_reverse(self):
        assert reverse_ordering(ClassOrdering((2, 0, 1))).perm == (1, 0, 2)

    def test_invert(self):
        assert invert_ordering(ClassOrdering((2, 0, 1))).perm == (1, 2, 0)

    def test_invert_involution(self, gen):
        for _ in range(20):
            sigma = random_perm(gen, 8)
            assert invert_ordering(invert_ordering(sigma)) == sigma

    @given(st.permutations(range(9)))
    def test_invert_definition(self, perm):
        sigma = ClassOrdering(tuple(perm))
        tau = invert_ordering(sigma)
        assert all(tau[sigma[p]] == p for p in range(9))


class TestRandomOrdering:
    def test_single(self):
        assert random_ordering(1, 12345).perm == (0,)

    def test_deterministic(self):
        assert random_ordering(4, 7) == random_ordering(4, 7)

    def test_seed_matters(self):
        assert random_ordering(20, 1) != random_ordering(20, 2)

    @given(st.integers(1, 60), st.integers(0, 2**64 - 1))
    def test_bijection(self, n, seed):
        assert sorted(random_ordering(n, seed).perm) == list(range(n))

    def test_uniform_over_s5(self):
        counts = Counter(random_ordering(5, seed).perm for seed in range(1000))
        assert set(counts) == set(itertools.permutations(range(5)))
        observed = [counts[p] for p in itertools.permutations(range(5))]
        assert stats.chisquare(observed).pvalue > 0.001

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            random_ordering(0, 1)


class TestCoarseGrained:
    def test_example(self):
        tax = TaxonomyMap({0: 1, 1: 0, 2: 1, 3: 0})
        assert coarse_grained_ordering(tax, 4).perm == (1, 3, 0, 2)

    def test_single_group(self):
        tax = TaxonomyMap({c: 7 for c in range(6)})
        assert coarse_grained_ordering(tax, 6) == ClassOrdering.identity(6)

    def test_incomplete(self):
        with pytest.raises(IncompleteTaxonomyError):
            coarse_grained_ordering(TaxonomyMap({0: 0, 1: 0}), 3)

    @given(st.lists(st.integers(0, 5), min_size=1, max_size=40))
    def test_groups_contiguous(self, groups):
        tax = TaxonomyMap(dict(enumerate(groups)))
        order = coarse_grained_ordering(tax, len(groups))
        seq = [groups[c] for c in order]
        runs = [g for g, _ in itertools.groupby(seq)]
        assert len(runs) == len(set(runs))
        assert seq == sorted(seq)


class TestTaskLayout:
    def test_equal(self):
        assert TaskLayout.equal(100, 10).sizes == (10,) * 10

    def test_equal_requires_divisor(self):
        with pytest.raises(LayoutMismatchError):
            TaskLayout.equal(10, 3)

    def test_boundaries(self):
        assert TaskLayout((2, 3, 1)).boundaries == (0, 2, 5, 6)

    def test_rejects_zero_size(self):
        with pytest.raises(LayoutMismatchError):
            TaskLayout((2, 0))


class TestSplitTasks:
    def test_example(self):
        assert split_tasks(ClassOrdering((2, 0, 1)), TaskLayout((2, 1))) == [{2, 0}, {1}]

    def test_single_task(self):
        assert split_tasks(ClassOrdering((1, 2, 0)), TaskLayout((3,))) == [{0, 1, 2}]

    def test_ten_equal_tasks(self):
        tasks = split_tasks(random_ordering(100, 3), TaskLayout.equal(100, 10))
        assert len(tasks) == 10 and all(len(t) == 10 for t in tasks)

    def test_mismatch(self):
        with pytest.raises(LayoutMismatchError):
            split_tasks(ClassOrdering((0, 1, 2)), TaskLayout((2, 2)))

    @given(st.data())
    def test_partition(self, data):
        n = data.draw(st.integers(1, 30))
        perm = data.draw(st.permutations(range(n)))
        cuts = sorted(data.draw(st.sets(st.integers(1, n - 1), max_size=n - 1))) if n > 1 else []
        edges = [0, *cuts, n]
        layout = TaskLayout(tuple(b - a for a, b in zip(edges, edges[1:])))
        tasks = split_tasks(ClassOrdering(tuple(perm)), layout)
        assert sum(len(t) for t in tasks) == n
        assert set().union(*tasks) == set(range(n))
