import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from ordergraph import ClassOrdering, ConfusionMatrix, WeightMatrix

EXAMPLE_CM = [[5, 1, 0], [0, 4, 2], [1, 0, 6]]


def brute_score(M, W, perm):
    """Score straight from the definition: plain Python loops, no numpy, no kernels."""
    m = np.asarray(M.counts if isinstance(M, ConfusionMatrix) else M).tolist()
    w = np.asarray(W.weights if isinstance(W, WeightMatrix) else W).tolist()
    n = len(perm)
    return sum(w[i][j] * m[perm[i]][perm[j]] for i in range(n) for j in range(n))


def brute_max(M, W):
    n = len(np.asarray(M.counts if isinstance(M, ConfusionMatrix) else M))
    scores = {p: brute_score(M, W, p) for p in itertools.permutations(range(n))}
    best = max(scores.values())
    return best, min(p for p, s in scores.items() if s == best), sum(
        s == best for s in scores.values()
    )


def random_cm(gen: np.random.Generator, n: int, hi: int = 50) -> ConfusionMatrix:
    return ConfusionMatrix(gen.integers(0, hi + 1, size=(n, n)))


def random_weights(gen: np.random.Generator, n: int, hi: int = 20) -> WeightMatrix:
    w = gen.integers(0, hi + 1, size=(n, n))
    w = np.triu(w, 1)
    return WeightMatrix(w + w.T, "random")


def random_perm(gen: np.random.Generator, n: int) -> ClassOrdering:
    return ClassOrdering(tuple(gen.permutation(n).tolist()))


@pytest.fixture
def gen():
    return np.random.default_rng(20240611)


@pytest.fixture
def example_cm():
    return ConfusionMatrix(EXAMPLE_CM)


@st.composite
def matrix_and_perm(draw, min_n=1, max_n=8):
    n = draw(st.integers(min_n, max_n))
    rows = draw(
        st.lists(
            st.lists(st.integers(0, 1000), min_size=n, max_size=n), min_size=n, max_size=n
        )
    )
    perm = draw(st.permutations(range(n)))
    return ConfusionMatrix(rows), ClassOrdering(tuple(perm))


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, with the measured values."""
    reports = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when == "call" and "test_acceptance.py" in rep.nodeid:
                reports.append(rep)
    if not reports:
        return
    terminalreporter.section("acceptance criteria")
    for rep in sorted(reports, key=lambda r: r.nodeid):
        name = rep.nodeid.split("::")[-1]
        detail = ", ".join(f"{k}={v}" for k, v in rep.user_properties)
        status = "PASS" if rep.passed else "FAIL"
        terminalreporter.write_line(f"{status} {name}" + (f"  [{detail}]" if detail else ""))
