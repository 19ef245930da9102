"""Exact probabilities for random alpha-subsets of an n-set.

``Q_{k,n}`` is the probability that k independent uniform alpha-subsets of
``{0, ..., n-1}`` have a union of fewer than k elements. It is computed by
a dynamic program over the union size, with an exhaustive enumeration as an
independent oracle. All values are exact ``Fraction`` objects.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np

from .errors import InputError
from .intervals import default_alpha

BRUTE_FORCE_LIMIT = 10**8


def binom(a: int, b: int) -> int:
    """Binomial coefficient, zero outside ``0 <= b <= a``."""
    if b < 0 or a < 0 or b > a:
        return 0
    return comb(a, b)


def _check(k, n, alpha):
    if not (1 <= k <= n):
        raise InputError(f"need 1 <= k <= n, got k={k}, n={n}")
    if not (1 <= alpha <= n):
        raise InputError(f"need 1 <= alpha <= n, got alpha={alpha}, n={n}")


def union_size_counts(k: int, n: int, alpha: int) -> list[list[int]]:
    """Row i-1 holds, for each u, the number of i-tuples of alpha-subsets
    whose union has exactly u elements (i = 1..k)."""
    _check(k, n, alpha)
    row = [0] * (n + 1)
    row[alpha] = comb(n, alpha)
    table = [row]
    for _ in range(k - 1):
        nxt = [0] * (n + 1)
        for u, c in enumerate(row):
            if not c:
                continue
            for d in range(max(0, alpha - u), min(alpha, n - u) + 1):
                nxt[u + d] += c * comb(n - u, d) * comb(u, alpha - d)
        row = nxt
        table.append(row)
    return table


def union_size_distribution(k: int, n: int, alpha: int) -> list[Fraction]:
    """Exact distribution of ``|S_1 ∪ ... ∪ S_k|`` indexed by size."""
    counts = union_size_counts(k, n, alpha)[-1]
    total = comb(n, alpha) ** k
    return [Fraction(c, total) for c in counts]


def q_exact(k: int, n: int, alpha: int) -> Fraction:
    counts = union_size_counts(k, n, alpha)[-1]
    return Fraction(sum(counts[:k]), comb(n, alpha) ** k)


def q_exact_bruteforce(k: int, n: int, alpha: int) -> Fraction:
    """Count, over every k-tuple of alpha-subsets, those with union < k."""
    _check(k, n, alpha)
    per_set = comb(n, alpha)
    total = per_set**k
    if total > BRUTE_FORCE_LIMIT:
        raise InputError(
            f"C({n},{alpha})^{k} = {total} outcome tuples exceeds the enumeration limit {BRUTE_FORCE_LIMIT}"
        )
    masks = np.array([sum(1 << e for e in s) for s in combinations(range(n), alpha)], dtype=np.uint64)
    unions = masks
    for _ in range(k - 1):
        unions = (unions[:, None] | masks[None, :]).ravel()
    assert unions.size == total
    sizes = np.zeros(unions.size, dtype=np.int64)
    for bit in range(n):
        sizes += ((unions >> np.uint64(bit)) & np.uint64(1)).astype(np.int64)
    return Fraction(int((sizes < k).sum()), total)


def lemma4_bound(k: int, n: int, alpha: int) -> Fraction:
    """``C(n, k-1) * (C(k-1, alpha) / C(n, alpha))^k``."""
    if not (1 <= k <= n) or alpha < 1:
        raise InputError(f"need 1 <= k <= n and alpha >= 1, got k={k}, n={n}, alpha={alpha}")
    if alpha > n:
        raise InputError(f"alpha={alpha} exceeds n={n}")
    return binom(n, k - 1) * Fraction(binom(k - 1, alpha), comb(n, alpha)) ** k


def qn_terms(n: int, alpha: int | None = None) -> list[Fraction]:
    """Terms ``C(n,k) C(n,k-1) ((k-1)/n)^(k alpha)`` for k = 1..n."""
    if n < 2:
        raise InputError(f"need n >= 2, got {n}")
    if alpha is None:
        alpha = default_alpha(n)
    # k = 1 contributes 0^(alpha) = 0 since alpha >= 1
    return [binom(n, k) * binom(n, k - 1) * Fraction(k - 1, n) ** (k * alpha) for k in range(1, n + 1)]


def qn_sum(n: int, alpha: int | None = None) -> Fraction:
    """Union bound on the probability that no transversal basis is sampled.

    ``alpha`` defaults to ``3 * ceil(ln n)``.
    """
    if n < 2:
        raise InputError(f"need n >= 2, got {n}")
    if alpha is None:
        alpha = default_alpha(n)
    # one common denominator n^(n alpha) keeps this to a single big division
    num = sum(
        binom(n, k) * binom(n, k - 1) * (k - 1) ** (k * alpha) * n ** ((n - k) * alpha)
        for k in range(2, n + 1)
    )
    return Fraction(num, n ** (n * alpha))


def union_bound_terms(n: int, alpha: int) -> list[Fraction]:
    """``C(n,k) * lemma4_bound(k, n, alpha)`` for k = 1..n."""
    return [binom(n, k) * lemma4_bound(k, n, alpha) for k in range(1, n + 1)]
