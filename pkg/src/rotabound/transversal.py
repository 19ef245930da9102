"""Transversal bases: Rado's condition and matroid intersection.

A family ``(S_0, ..., S_{n-1})`` of disjoint element sets in a rank-n
matroid has a transversal basis (one element from each set, together a
basis) iff every union of ``|X|`` of the sets has rank at least ``|X|``.
Classes are indexed from 0 throughout.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .errors import InputError
from .matroid import Matroid, PartitionMatroid

RADO_MAX_SETS = 22


@dataclass(frozen=True)
class SubsetFamily:
    sets: tuple
    alpha: Optional[int] = None
    origin: Optional[tuple] = None

    def __post_init__(self):
        sets = tuple(frozenset(int(e) for e in s) for s in self.sets)
        object.__setattr__(self, "sets", sets)
        for i, s in enumerate(sets):
            if not s:
                raise InputError(f"set {i} of the family is empty")
        if self.origin is not None:
            origin = tuple(int(c) for c in self.origin)
            if len(origin) != len(sets):
                raise InputError("origin must give one class index per set")
            object.__setattr__(self, "origin", origin)

    def __len__(self):
        return len(self.sets)

    def check_origin(self, bases: Sequence[Iterable[int]]) -> None:
        if self.origin is None:
            return
        for i, (s, c) in enumerate(zip(self.sets, self.origin)):
            if not s <= frozenset(bases[c]):
                raise InputError(f"set {i} is not contained in basis {c}")

    def union(self) -> frozenset:
        return frozenset().union(*self.sets)

    def to_dict(self) -> dict:
        d = {"sets": [sorted(s) for s in self.sets], "alpha": self.alpha}
        if self.origin is not None:
            d["origin"] = list(self.origin)
        return d


@dataclass(frozen=True)
class Transversal:
    """One ``(class index, element)`` pair per class, sorted by class."""

    assignment: tuple

    def __post_init__(self):
        pairs = tuple(sorted((int(i), int(e)) for i, e in self.assignment))
        object.__setattr__(self, "assignment", pairs)

    @property
    def elements(self) -> frozenset:
        return frozenset(e for _, e in self.assignment)

    def to_list(self) -> list:
        return [list(pair) for pair in self.assignment]


@dataclass(frozen=True)
class RadoReport:
    satisfied: bool
    violator: Optional[frozenset] = field(default=None)

    def __post_init__(self):
        if self.satisfied == (self.violator is not None):
            raise ValueError("exactly one of satisfied / violator must hold")


def rado_check_bruteforce(m: Matroid, f: SubsetFamily) -> RadoReport:
    """Check ``r(S_X) >= |X|`` for every non-empty index set X.

    X is enumerated by size, then lexicographically; the first violator
    found is returned.
    """
    k = len(f)
    if k > RADO_MAX_SETS:
        raise InputError(
            f"{k} sets means 2^{k} rank queries; use find_transversal_basis "
            f"for families of more than {RADO_MAX_SETS} sets"
        )
    sets = [sorted(s) for s in f.sets]
    for ids in sets:
        m._ids(ids)
    for size in range(1, k + 1):
        for X in combinations(range(k), size):
            union = set()
            for i in X:
                union.update(sets[i])
            if m._rank(sorted(union)) < size:
                return RadoReport(False, frozenset(X))
    return RadoReport(True)


def _augmenting_path(m1: Matroid, m2: Matroid, J: list[int]):
    """Shortest source-to-sink path in the exchange graph of ``J``.

    Sources are y with J+y independent in m1, sinks those with J+y
    independent in m2. Arc x->y when J-x+y is independent in m1, arc y->x
    when J-x+y is independent in m2. Among shortest paths the
    lexicographically smallest node sequence is returned.
    """
    in_J = set(J)
    Y = [e for e in range(m1.ground_size) if e not in in_J]
    c1 = m1.fundamental_circuits(J, Y)
    c2 = m2.fundamental_circuits(J, Y)
    sources = [y for y in Y if c1[y] is None]
    sinks = [y for y in Y if c2[y] is None]
    if not sources or not sinks:
        return None
    succ: dict[int, list[int]] = {}
    pred: dict[int, list[int]] = {}
    for y in Y:
        if c1[y] is not None:
            for x in c1[y]:
                succ.setdefault(x, []).append(y)
                pred.setdefault(y, []).append(x)
        if c2[y] is not None:
            for x in c2[y]:
                succ.setdefault(y, []).append(x)
                pred.setdefault(x, []).append(y)
    dist = {s: 0 for s in sinks}
    queue = deque(sinks)
    while queue:
        v = queue.popleft()
        for u in pred.get(v, ()):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    reachable = [s for s in sources if s in dist]
    if not reachable:
        return None
    best = min(dist[s] for s in reachable)
    cur = min(s for s in reachable if dist[s] == best)
    path = [cur]
    while dist[cur] > 0:
        cur = min(w for w in succ[cur] if dist.get(w) == dist[cur] - 1)
        path.append(cur)
    return path


def matroid_intersection(m1: Matroid, m2: Matroid, history: Optional[list] = None) -> frozenset:
    """Maximum-cardinality set independent in both ``m1`` and ``m2``.

    Augments along shortest exchange-graph paths until none exists. The
    opening length-0 augmentations (elements free in both matroids, smallest
    first) are done as a single ascending scan. If ``history`` is given,
    ``|J|`` is appended after every augmentation.
    """
    if m1.ground_size != m2.ground_size:
        raise InputError(f"ground sets differ in size: {m1.ground_size} vs {m2.ground_size}")
    inc1, inc2 = m1.incremental(), m2.incremental()
    J: list[int] = []
    for e in range(m1.ground_size):
        if inc2.can_add(e) and inc1.try_add(e):
            inc2.add(e)
            J.append(e)
            if history is not None:
                history.append(len(J))
    cap = min(m1.full_rank, m2.full_rank)
    while len(J) < cap:
        path = _augmenting_path(m1, m2, J)
        if path is None:
            break
        J = sorted(set(J).symmetric_difference(path))
        if history is not None:
            history.append(len(J))
    return frozenset(J)


def find_transversal_basis(m: Matroid, f: SubsetFamily) -> Optional[Transversal]:
    """A transversal basis of ``f`` in ``m``, or ``None`` if there is none."""
    k = len(f)
    if k != m.full_rank:
        raise InputError(f"family has {k} sets but the matroid has rank {m.full_rank}")
    owner = {}
    for i, s in enumerate(f.sets):
        for e in s:
            if e in owner:
                raise InputError(f"element {e} lies in both set {owner[e]} and set {i}")
            owner[e] = i
    ground = m._ids(owner)
    sub = m.restrict(ground)
    classes = PartitionMatroid([owner[e] for e in ground], [1] * k)
    common = matroid_intersection(sub, classes)
    if len(common) < k:
        return None
    return Transversal([(owner[ground[j]], ground[j]) for j in common])


def verify_transversal(m: Matroid, f: SubsetFamily, t: Transversal) -> bool:
    try:
        pairs = t.assignment
        if sorted(i for i, _ in pairs) != list(range(len(f))):
            return False
        elements = [e for _, e in pairs]
        if len(set(elements)) != len(elements):
            return False
        if any(e not in f.sets[i] for i, e in pairs):
            return False
        return m.is_basis(elements)
    except (InputError, TypeError, ValueError, IndexError):
        return False
