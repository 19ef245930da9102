"""Matroids given by an exact rank oracle over ground set ``{0, ..., N-1}``.

Four representations are supported: linear (column matroid of a matrix over
GF(p)), graphic (cycle matroid of a multigraph), uniform and partition.
``Instance`` bundles a rank-n matroid with n pairwise-disjoint bases.
"""

from __future__ import annotations

import hashlib
import json
from typing import Iterable, Sequence

import numpy as np

from . import gfp
from .errors import ContractError, InputError


class Matroid:
    kind: str = ""
    ground_size: int

    @property
    def full_rank(self) -> int:
        return self._full_rank

    def _ids(self, s: Iterable[int]) -> list[int]:
        out = sorted({int(e) for e in s})
        if out and (out[0] < 0 or out[-1] >= self.ground_size):
            bad = out[0] if out[0] < 0 else out[-1]
            raise InputError(f"element id {bad} outside ground set of size {self.ground_size}")
        return out

    def rank(self, s: Iterable[int]) -> int:
        return self._rank(self._ids(s))

    def is_independent(self, s: Iterable[int]) -> bool:
        ids = self._ids(s)
        return self._rank(ids) == len(ids)

    def is_basis(self, s: Iterable[int]) -> bool:
        ids = self._ids(s)
        return len(ids) == self.full_rank and self._rank(ids) == len(ids)

    def extend_to_basis(self, independent: Iterable[int], allowed: Iterable[int]) -> frozenset:
        """Greedily extend ``independent`` to a basis using ``allowed``.

        Elements of ``allowed`` are scanned in ascending id order and kept
        whenever they raise the rank.
        """
        ind = self._ids(independent)
        if self._rank(ind) != len(ind):
            raise ContractError("set to extend is not independent", witness=frozenset(ind))
        taken = set(ind)
        pool = [e for e in self._ids(allowed) if e not in taken]
        basis = self._greedy(ind, pool)
        if len(basis) != self.full_rank:
            raise ContractError(
                f"independent ∪ allowed has rank {len(basis)} < {self.full_rank}",
                witness=frozenset(ind) | frozenset(pool),
            )
        return frozenset(basis)

    def _greedy(self, start: list[int], pool: list[int]) -> list[int]:
        cur = list(start)
        r = len(cur)
        for e in pool:
            if r == self.full_rank:
                break
            if self._rank(cur + [e]) > r:
                cur.append(e)
                r += 1
        return cur

    def fundamental_circuits(self, independent: Sequence[int], candidates: Iterable[int]) -> dict:
        """Map each candidate y to ``None`` if ``independent + y`` is
        independent, else to the set of x with ``independent - x + y``
        independent.
        """
        J = list(independent)
        r = len(J)
        out = {}
        for y in candidates:
            if self._rank(J + [y]) > r:
                out[y] = None
            else:
                out[y] = frozenset(
                    x for i, x in enumerate(J) if self._rank(J[:i] + J[i + 1:] + [y]) == r
                )
        return out

    def incremental(self) -> "IncrementalIndependent":
        """Empty independent set that can be grown one element at a time."""
        return IncrementalIndependent(self)

    def rank_many(self, sets: np.ndarray) -> np.ndarray:
        """Rank of every row of an integer array of element ids."""
        return np.array([self._rank(sorted(set(row.tolist()))) for row in sets], dtype=np.int64)

    def restrict(self, elements: Sequence[int]) -> "Matroid":
        """Restriction to ``elements``, renumbered in ascending order."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def _rank(self, ids: list[int]) -> int:
        raise NotImplementedError


class IncrementalIndependent:
    def __init__(self, matroid: Matroid):
        self.matroid = matroid
        self.members: list[int] = []

    def can_add(self, e: int) -> bool:
        return self.matroid._rank(self.members + [e]) > len(self.members)

    def add(self, e: int) -> None:
        self.members.append(e)

    def try_add(self, e: int) -> bool:
        if self.can_add(e):
            self.add(e)
            return True
        return False


class _LinearIncremental(IncrementalIndependent):
    def __init__(self, matroid):
        super().__init__(matroid)
        self.span = gfp.Span(matroid.matrix.shape[0], matroid.p)

    def can_add(self, e):
        return not self.span.contains(self.matroid.matrix[:, e])

    def add(self, e):
        self.span.add(self.matroid.matrix[:, e])
        self.members.append(e)

    def try_add(self, e):
        if self.span.add(self.matroid.matrix[:, e]):
            self.members.append(e)
            return True
        return False


class LinearMatroid(Matroid):
    """Column matroid of a matrix over GF(p)."""

    kind = "linear"

    def __init__(self, matrix, p: int):
        gfp.check_prime(p)
        a = np.array(matrix, dtype=np.int64)
        if a.ndim != 2:
            raise InputError("linear matroid matrix must be two-dimensional")
        if a.size and (a.min() < 0 or a.max() >= p):
            raise InputError(f"matrix entries must lie in [0, {p})")
        a.setflags(write=False)
        self.p = int(p)
        self.matrix = a
        self.ground_size = a.shape[1]
        self._full_rank = gfp.rank(a, self.p)

    def _rank(self, ids):
        if not ids:
            return 0
        return gfp.rank(self.matrix[:, ids], self.p)

    def _greedy(self, start, pool):
        order = list(start) + list(pool)
        if not order:
            return []
        _, piv = gfp.rref(self.matrix[:, order], self.p)
        return [order[c] for c in piv]

    def extend_to_basis(self, independent, allowed):
        ind = self._ids(independent)
        taken = set(ind)
        pool = [e for e in self._ids(allowed) if e not in taken]
        basis = self._greedy(ind, pool)
        # pivots come out in scan order, so ind is independent iff it leads
        if basis[:len(ind)] != ind:
            raise ContractError("set to extend is not independent", witness=frozenset(ind))
        if len(basis) != self.full_rank:
            raise ContractError(
                f"independent ∪ allowed has rank {len(basis)} < {self.full_rank}",
                witness=frozenset(ind) | frozenset(pool),
            )
        return frozenset(basis)

    def fundamental_circuits(self, independent, candidates):
        J = list(independent)
        Y = list(candidates)
        if not Y:
            return {}
        cols = J + Y
        red, piv = gfp.rref(self.matrix[:, cols], self.p, pivot_order=range(len(J)))
        if len(piv) != len(J):
            raise ContractError("set is not independent", witness=frozenset(J))
        r = len(J)
        coords = red[:r, r:]
        free = red[r:, r:].any(axis=0)
        out = {}
        for j, y in enumerate(Y):
            if free[j]:
                out[y] = None
            else:
                out[y] = frozenset(J[i] for i in np.flatnonzero(coords[:, j]))
        return out

    def incremental(self):
        return _LinearIncremental(self)

    def rank_many(self, sets):
        sets = np.asarray(sets, dtype=np.int64)
        if sets.ndim != 2 or sets.shape[1] == 0:
            return np.zeros(len(sets), dtype=np.int64)
        stack = np.transpose(self.matrix[:, sets], (1, 0, 2))
        return gfp.batched_rank(stack, self.p)

    def restrict(self, elements):
        return LinearMatroid(self.matrix[:, list(elements)], self.p)

    def to_dict(self):
        return {"kind": "linear", "p": self.p, "matrix": self.matrix.tolist()}


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; element i is ``edges[i]``."""

    kind = "graphic"

    def __init__(self, num_vertices: int, edges):
        self.num_vertices = int(num_vertices)
        self.edges = tuple((int(u), int(v)) for u, v in edges)
        for u, v in self.edges:
            if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
                raise InputError(f"edge ({u}, {v}) has an endpoint outside 0..{self.num_vertices - 1}")
        self.ground_size = len(self.edges)
        self._full_rank = self._rank(list(range(self.ground_size)))

    def _rank(self, ids):
        parent = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != root:
                parent[x], x = root, parent[x]
            return root

        r = 0
        for e in ids:
            u, v = self.edges[e]
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                r += 1
        return r

    def restrict(self, elements):
        return GraphicMatroid(self.num_vertices, [self.edges[e] for e in elements])

    def to_dict(self):
        return {"kind": "graphic", "num_vertices": self.num_vertices, "edges": [list(e) for e in self.edges]}


class UniformMatroid(Matroid):
    kind = "uniform"

    def __init__(self, rank: int, ground_size: int):
        if not 0 <= rank <= ground_size:
            raise InputError(f"uniform matroid needs 0 <= rank <= ground_size, got {rank}, {ground_size}")
        self.r = int(rank)
        self.ground_size = int(ground_size)
        self._full_rank = self.r

    def _rank(self, ids):
        return min(len(ids), self.r)

    def fundamental_circuits(self, independent, candidates):
        J = frozenset(independent)
        full = len(J) >= self.r
        return {y: (J if full else None) for y in candidates}

    def rank_many(self, sets):
        sets = np.sort(np.asarray(sets, dtype=np.int64), axis=1)
        if sets.shape[1] == 0:
            return np.zeros(len(sets), dtype=np.int64)
        distinct = 1 + (np.diff(sets, axis=1) != 0).sum(axis=1)
        return np.minimum(distinct, self.r)

    def restrict(self, elements):
        return UniformMatroid(min(self.r, len(elements)), len(elements))

    def to_dict(self):
        return {"kind": "uniform", "rank": self.r, "ground_size": self.ground_size}


class PartitionMatroid(Matroid):
    """At most ``capacities[c]`` elements from each class c."""

    kind = "partition"

    def __init__(self, classes, capacities):
        self.classes = tuple(int(c) for c in classes)
        self.capacities = tuple(int(c) for c in capacities)
        if any(c < 0 for c in self.capacities):
            raise InputError("partition capacities must be non-negative")
        for c in self.classes:
            if not 0 <= c < len(self.capacities):
                raise InputError(f"class index {c} has no capacity")
        self.ground_size = len(self.classes)
        self._full_rank = self._rank(list(range(self.ground_size)))

    def _rank(self, ids):
        counts = {}
        for e in ids:
            c = self.classes[e]
            counts[c] = counts.get(c, 0) + 1
        return sum(min(k, self.capacities[c]) for c, k in counts.items())

    def fundamental_circuits(self, independent, candidates):
        used = {}
        for x in independent:
            used.setdefault(self.classes[x], set()).add(x)
        out = {}
        for y in candidates:
            c = self.classes[y]
            members = used.get(c, set())
            out[y] = None if len(members) < self.capacities[c] else frozenset(members)
        return out

    def restrict(self, elements):
        return PartitionMatroid([self.classes[e] for e in elements], self.capacities)

    def to_dict(self):
        return {"kind": "partition", "classes": list(self.classes), "capacities": list(self.capacities)}


def matroid_from_dict(d: dict) -> Matroid:
    try:
        kind = d["kind"]
        if kind == "linear":
            return LinearMatroid(d["matrix"], d["p"])
        if kind == "graphic":
            return GraphicMatroid(d["num_vertices"], d["edges"])
        if kind == "uniform":
            return UniformMatroid(d["rank"], d["ground_size"])
        if kind == "partition":
            return PartitionMatroid(d["classes"], d["capacities"])
    except KeyError as exc:
        raise InputError(f"matroid record is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed {d.get('kind')} matroid record: {exc}") from None
    raise InputError(f"unknown matroid kind {d.get('kind')!r}")


class Instance:
    """A rank-n matroid together with n pairwise-disjoint bases."""

    def __init__(self, matroid: Matroid, bases: Sequence[Sequence[int]]):
        self.matroid = matroid
        self.bases = tuple(tuple(int(e) for e in b) for b in bases)
        self._validate()

    @property
    def n(self) -> int:
        return len(self.bases)

    def _validate(self):
        m, n = self.matroid, len(self.bases)
        if n == 0:
            raise InputError("instance needs at least one basis")
        if m.full_rank != n:
            raise InputError(f"matroid rank {m.full_rank} differs from number of bases {n}")
        if m.ground_size < n * n:
            raise InputError(f"ground set size {m.ground_size} is smaller than n^2 = {n * n}")
        seen = set()
        for i, b in enumerate(self.bases):
            if len(b) != n:
                raise InputError(f"basis {i} has {len(b)} elements, expected {n}")
            for e in b:
                if not 0 <= e < m.ground_size:
                    raise InputError(f"basis {i} lists element {e} outside the ground set")
                if e in seen:
                    raise InputError(f"element {e} appears in more than one basis position (basis {i})")
                seen.add(e)
            if m.rank(b) != n:
                raise InputError(f"basis {i} is not a basis: rank {m.rank(b)} < {n}")

    def to_dict(self) -> dict:
        return {"n": self.n, "matroid": self.matroid.to_dict(), "bases": [list(b) for b in self.bases]}

    @classmethod
    def from_dict(cls, d: dict) -> "Instance":
        for key in ("n", "matroid", "bases"):
            if key not in d:
                raise InputError(f"instance record is missing field {key!r}")
        inst = cls(matroid_from_dict(d["matroid"]), d["bases"])
        if d["n"] != inst.n:
            raise InputError(f"declared n={d['n']} but {inst.n} bases given")
        return inst

    def dumps(self) -> str:
        return canonical_json(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "Instance":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"instance file is not valid JSON: {exc}") from None
        return cls.from_dict(d)

    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode()).hexdigest()


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed < 1 << 64:
        raise InputError(f"seed {seed} is not a 64-bit unsigned integer")
    return seed


def random_instance(n: int, p: int, seed: int) -> Instance:
    """n random invertible n×n blocks over GF(p), side by side.

    Block i (columns ``i*n .. i*n+n-1``) is basis i.
    """
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    gfp.check_prime(p)
    rng = np.random.default_rng(check_seed(seed))
    blocks = []
    for _ in range(n):
        while True:
            blk = rng.integers(0, p, size=(n, n), dtype=np.int64)
            if gfp.rank(blk, p) == n:
                break
        blocks.append(blk)
    m = LinearMatroid(np.hstack(blocks), p)
    return Instance(m, [range(i * n, (i + 1) * n) for i in range(n)])


def uniform_instance(n: int) -> Instance:
    return Instance(UniformMatroid(n, n * n), [range(i * n, (i + 1) * n) for i in range(n)])


def graphic_instance(n: int, seed: int) -> Instance:
    """n random spanning trees on n+1 vertices, overlaid as a multigraph."""
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    rng = np.random.default_rng(check_seed(seed))
    edges = []
    for _ in range(n):
        order = rng.permutation(n + 1)
        for j in range(1, n + 1):
            edges.append((int(order[j]), int(order[rng.integers(0, j)])))
    return Instance(GraphicMatroid(n + 1, edges), [range(i * n, (i + 1) * n) for i in range(n)])
