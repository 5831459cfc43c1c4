import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qilab import gf2


def brute_rank(mat: np.ndarray) -> int:
    """Rank by enumerating the row span (small matrices only)."""
    rows = gf2.pack_rows(mat)
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return int(np.log2(len(span)))


@given(
    st.integers(1, 6),
    st.integers(1, 8),
    st.integers(0, 2**32 - 1),
)
@settings(max_examples=60, deadline=None)
def test_rank_matches_span_enumeration(rows, cols, seed):
    rng = np.random.default_rng(seed)
    mat = rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)
    assert gf2.rank(mat) == brute_rank(mat)


def test_rank_edge_cases():
    assert gf2.rank(np.zeros((3, 4), np.uint8)) == 0
    assert gf2.rank(np.eye(5, dtype=np.uint8)) == 5
    assert gf2.rank(np.zeros((2, 0), np.uint8)) == 0


@given(st.integers(1, 7), st.integers(1, 9), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_solve_combination_roundtrip(rows, cols, seed):
    rng = np.random.default_rng(seed)
    mat = rng.integers(0, 2, size=(rows, cols), dtype=np.uint8)
    # in-span target: random combination
    combo = rng.integers(0, 2, size=rows, dtype=np.uint8)
    target = (combo @ mat) % 2
    found = gf2.solve_combination(mat, target.astype(np.uint8))
    assert found is not None
    assert np.array_equal((found @ mat) % 2, target)


def test_solve_combination_unsolvable():
    mat = np.array([[1, 0, 0], [0, 1, 0]], np.uint8)
    assert gf2.solve_combination(mat, np.array([0, 0, 1], np.uint8)) is None
    assert gf2.solve_combination(mat, np.array([1, 1, 1], np.uint8)) is None
