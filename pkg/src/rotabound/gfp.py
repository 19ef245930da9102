"""Linear algebra over the prime field GF(p) on numpy int64 arrays.

All routines reduce entries mod p before returning. ``MAX_PRIME`` keeps every
intermediate product (and short sums of them) inside int64.
"""

from __future__ import annotations

import numpy as np

MAX_PRIME = 1 << 25


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"p={p!r} is not a prime")
    if p >= MAX_PRIME:
        raise ValueError(f"p={p} exceeds the supported bound {MAX_PRIME}")


def inverse(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rref(a: np.ndarray, p: int, pivot_order=None):
    """Reduced row echelon form of ``a`` mod p.

    Columns are tried as pivots in ``pivot_order`` (default: left to right);
    columns not listed are never used as pivots but are still reduced.
    Returns ``(matrix, pivots)`` where ``pivots[r]`` is the pivot column of
    row ``r``. The pivot set is the greedy (lexicographically first) basis
    of the column matroid in that order.
    """
    m = np.array(a, dtype=np.int64) % p
    rows = m.shape[0]
    order = range(m.shape[1]) if pivot_order is None else pivot_order
    pivots = []
    r = 0
    for c in order:
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * inverse(m[r, c], p)) % p
        col = m[:, c].copy()
        col[r] = 0
        nzrows = np.flatnonzero(col)
        if nzrows.size:
            m[nzrows] = (m[nzrows] - np.outer(col[nzrows], m[r])) % p
        pivots.append(int(c))
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def batched_rank(a: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices ``a`` with shape (batch, rows, cols)."""
    m = np.array(a, dtype=np.int64) % p
    batch, rows, cols = m.shape
    rk = np.zeros(batch, dtype=np.int64)
    if rows == 0 or cols == 0:
        return rk
    idx = np.arange(batch)
    row_ids = np.arange(rows)
    inv_table = None
    if p <= 1 << 16:
        inv_table = np.zeros(p, dtype=np.int64)
        inv_table[1:] = [inverse(x, p) for x in range(1, p)]
    for c in range(cols):
        active = rk < rows
        if not active.any():
            break
        col = m[:, :, c]
        # candidate rows sit at or below the current rank of each matrix
        cand = (col != 0) & (row_ids[None, :] >= rk[:, None])
        has = cand.any(axis=1) & active
        if not has.any():
            continue
        b = idx[has]
        src = np.argmax(cand[b], axis=1)
        dst = rk[b]
        src_rows = m[b, src].copy()
        m[b, src] = m[b, dst]
        m[b, dst] = src_rows
        lead = src_rows[:, c]
        if inv_table is not None:
            inv = inv_table[lead]
        else:
            inv = np.array([inverse(x, p) for x in lead], dtype=np.int64)
        prow = (src_rows * inv[:, None]) % p
        m[b, dst] = prow
        factors = m[b, :, c].copy()
        factors[np.arange(b.size), dst] = 0
        m[b] = (m[b] - factors[:, :, None] * prow[:, None, :]) % p
        rk[b] += 1
    return rk


class Span:
    """Incrementally grown subspace, kept in reduced echelon form.

    ``add`` reports whether a vector was outside the current span (and
    absorbs it if so); the membership test is a single matrix product.
    """

    def __init__(self, dim: int, p: int):
        self.p = p
        self.dim = dim
        self.rows = np.zeros((0, dim), dtype=np.int64)
        self.pivots: list[int] = []

    def __len__(self) -> int:
        return len(self.pivots)

    def residual(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64) % self.p
        if not self.pivots:
            return v
        return (v - (v[self.pivots] @ self.rows)) % self.p

    def contains(self, v: np.ndarray) -> bool:
        return not self.residual(v).any()

    def add(self, v: np.ndarray) -> bool:
        p = self.p
        res = self.residual(v)
        nz = np.flatnonzero(res)
        if nz.size == 0:
            return False
        c = int(nz[0])
        res = (res * inverse(res[c], p)) % p
        if self.pivots:
            col = self.rows[:, c]
            self.rows = (self.rows - np.outer(col, res)) % p
        self.rows = np.vstack([self.rows, res])
        self.pivots.append(c)
        return True
