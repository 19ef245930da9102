"""Random small matroids and exhaustive oracles shared by the tests."""

from itertools import combinations

import numpy as np

from rotabound.matroid import GraphicMatroid, LinearMatroid, PartitionMatroid, UniformMatroid


def random_matroid(rng, ground, kind=None):
    kind = kind or rng.choice(["linear", "graphic", "uniform", "partition"])
    if kind == "linear":
        p = int(rng.choice([2, 3, 5]))
        rows = int(rng.integers(1, 5))
        return LinearMatroid(rng.integers(0, p, size=(rows, ground)), p)
    if kind == "graphic":
        v = int(rng.integers(2, 6))
        return GraphicMatroid(v, [tuple(int(x) for x in rng.integers(0, v, 2)) for _ in range(ground)])
    if kind == "uniform":
        return UniformMatroid(int(rng.integers(0, ground + 1)), ground)
    classes = int(rng.integers(1, 4))
    return PartitionMatroid(rng.integers(0, classes, ground), rng.integers(0, 3, classes))


def random_rank_n_matroid(rng, n, ground):
    """A matroid of rank exactly n on ``ground`` elements."""
    while True:
        kind = rng.choice(["linear", "linear", "graphic", "partition"])
        if kind == "linear":
            p = int(rng.choice([2, 3]))
            m = LinearMatroid(rng.integers(0, p, size=(n, ground)), p)
        elif kind == "graphic":
            m = GraphicMatroid(n + 1, [tuple(int(x) for x in rng.integers(0, n + 1, 2)) for _ in range(ground)])
        else:
            classes = int(rng.integers(1, n + 1))
            caps = rng.multinomial(n - classes, [1 / classes] * classes) + 1
            m = PartitionMatroid(rng.integers(0, classes, ground), caps)
        if m.full_rank == n:
            return m


def random_disjoint_family(rng, ground, k, max_size=3):
    order = [int(e) for e in rng.permutation(ground)]
    sizes = [int(rng.integers(1, max_size + 1)) for _ in range(k)]
    while sum(sizes) > ground:
        i = int(np.argmax(sizes))
        sizes[i] -= 1
    out, pos = [], 0
    for s in sizes:
        out.append(order[pos:pos + s])
        pos += s
    return out


def max_common_independent(m1, m2):
    ground = range(m1.ground_size)
    for size in range(m1.ground_size, -1, -1):
        for s in combinations(ground, size):
            if m1.is_independent(s) and m2.is_independent(s):
                return size
    return 0


def vandermonde(rows, points, p):
    return [[pow(x, i, p) for x in points] for i in range(rows)]
