import numpy as np

from ordergraph import (
    SynthSpec,
    TaskLayout,
    apply_ordering,
    block_cm,
    invert_ordering,
    random_ordering,
    score,
    shuffle_cm,
    task_block_weights,
)


def _offdiag(same_block: bool, M, s):
    n = M.n
    block = np.arange(n) // s
    mask = (block[:, None] == block[None, :]) == same_block
    np.fill_diagonal(mask, False)
    return M.counts[mask]


def test_ranges_respected():
    spec = SynthSpec(3, 4, diag_range=(50, 80), within_range=(20, 40), cross_range=(0, 2), seed=5)
    M, layout = block_cm(spec)
    assert M.n == 12 and layout.sizes == (4, 4, 4)
    d = np.diagonal(M.counts)
    assert d.min() >= 50 and d.max() <= 80
    w = _offdiag(True, M, 4)
    assert w.min() >= 20 and w.max() <= 40
    c = _offdiag(False, M, 4)
    assert c.min() >= 0 and c.max() <= 2


def test_single_block_uses_within_range():
    M, _ = block_cm(SynthSpec(1, 6, within_range=(7, 9), cross_range=(100, 100), seed=1))
    vals = _offdiag(True, M, 6)
    assert len(vals) == 30 and vals.min() >= 7 and vals.max() <= 9


def test_zero_cross_is_block_diagonal():
    M, _ = block_cm(SynthSpec(4, 3, cross_range=(0, 0), within_range=(1, 5), seed=2))
    assert not _offdiag(False, M, 3).any()
    assert _offdiag(True, M, 3).all()


def test_asymmetric():
    M, _ = block_cm(SynthSpec(2, 5, seed=3))
    assert not np.array_equal(M.counts, M.counts.T)


def test_deterministic():
    spec = SynthSpec(2, 3, seed=17)
    assert block_cm(spec)[0] == block_cm(spec)[0]
    assert block_cm(SynthSpec(2, 3, seed=18))[0] != block_cm(spec)[0]


def test_planted_beats_random_orderings():
    # Monte-Carlo separability check backing the block-recovery thresholds
    M, layout = block_cm(SynthSpec(4, 5, (50, 80), (20, 40), (0, 2), seed=1))
    W = task_block_weights(TaskLayout((5, 5, 5, 5)))
    planted = score(M, W)
    rand = np.array([score(M, W, random_ordering(20, 10_000 + k)) for k in range(10_000)])
    assert (rand < planted).mean() > 0.99


class TestShuffle:
    def test_deterministic(self):
        M, _ = block_cm(SynthSpec(2, 4, seed=0))
        a = shuffle_cm(M, 9)
        b = shuffle_cm(M, 9)
        assert a[0] == b[0] and a[1] == b[1]

    def test_round_trip(self):
        M, _ = block_cm(SynthSpec(3, 3, seed=4))
        shuffled, truth = shuffle_cm(M, 21)
        assert shuffled == apply_ordering(M, truth)
        assert apply_ordering(shuffled, invert_ordering(truth)) == M

    def test_diagonal_multiset(self):
        M, _ = block_cm(SynthSpec(3, 3, seed=4))
        shuffled, _ = shuffle_cm(M, 22)
        assert sorted(np.diagonal(shuffled.counts)) == sorted(np.diagonal(M.counts))
