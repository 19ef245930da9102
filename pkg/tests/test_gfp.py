from itertools import product

import numpy as np
import pytest

from rotabound import gfp


def brute_rank(a, p):
    """Rank as the size of the largest set of columns with only the trivial
    vanishing combination, by exhausting all coefficient vectors."""
    a = np.asarray(a)
    rows, cols = a.shape
    best = 0
    for mask in range(1 << cols):
        idx = [j for j in range(cols) if mask >> j & 1]
        if len(idx) <= best:
            continue
        dependent = any(
            any(coef) and not ((a[:, idx] @ np.array(coef)) % p).any()
            for coef in product(range(p), repeat=len(idx))
        )
        if not dependent:
            best = len(idx)
    return best


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("seed", range(6))
def test_rank_matches_exhaustive(p, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(3, 4))
    assert gfp.rank(a, p) == brute_rank(a, p)


def test_batched_rank_matches_single():
    rng = np.random.default_rng(7)
    for p in (2, 3, 101):
        stack = rng.integers(0, p, size=(200, 4, 6))
        stack[:50, 3] = stack[:50, 0]
        expect = [gfp.rank(x, p) for x in stack]
        assert gfp.batched_rank(stack, p).tolist() == expect


def test_rref_pivots_follow_order():
    a = np.array([[1, 0, 1], [0, 1, 1]])
    _, piv = gfp.rref(a, 2, pivot_order=[2, 0, 1])
    assert piv == [2, 0]


def test_span_tracks_membership():
    s = gfp.Span(3, 5)
    assert s.add([1, 2, 0])
    assert s.add([0, 1, 0])
    assert not s.add([3, 1, 0])
    assert s.contains([4, 4, 0])
    assert not s.contains([0, 0, 1])
    assert len(s) == 2


@pytest.mark.parametrize("p", [0, 1, 4, 9, 1 << 25])
def test_check_prime_rejects(p):
    with pytest.raises(ValueError):
        gfp.check_prime(p)
