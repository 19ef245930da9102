"""Randomized harvesting of disjoint transversal bases.

Every basis ``B_i`` is cut into ``2m`` disjoint random alpha-subsets; column
j collects the j-th subset of each basis and is solved for a transversal
basis. Each column succeeds with probability at least 1/2, so a round yields
``m`` successes in expectation; rounds are repeated until one does.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InputError
from .intervals import ceil_log
from .matroid import Instance, check_seed
from .montecarlo import chunk_rng
from .transversal import SubsetFamily, Transversal, find_transversal_basis, verify_transversal


@dataclass(frozen=True)
class ExtractionParams:
    alpha_override: Optional[int] = None
    m_override: Optional[int] = None
    max_rounds: int = 32
    seed: int = 0

    def resolve(self, n: int) -> tuple[int, int]:
        """Effective ``(alpha, m)`` for a rank-n instance."""
        c = ceil_log(n)
        alpha = 3 * c if self.alpha_override is None else self.alpha_override
        m = (n // (6 * c) if c else 0) if self.m_override is None else self.m_override
        if alpha < 0 or m < 0:
            raise InputError("alpha and m must be non-negative")
        if self.max_rounds < 1:
            raise InputError("max_rounds must be positive")
        return alpha, m


@dataclass
class ExtractionResult:
    n: int
    alpha: int
    m: int
    transversals: list = field(default_factory=list)
    families: list = field(default_factory=list)
    rounds_used: int = 0
    per_round_successes: list = field(default_factory=list)
    shortfall: bool = False
    vacuous: bool = False

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": self.alpha,
            "m": self.m,
            "transversals": [t.to_list() for t in self.transversals],
            "columns": [f.to_dict() for f in self.families],
            "rounds_used": self.rounds_used,
            "per_round_successes": self.per_round_successes,
            "shortfall": self.shortfall,
            "vacuous": self.vacuous,
        }

    CSV_HEADER = "n,alpha,m,rounds_used,successes"

    def csv_line(self) -> str:
        return f"{self.n},{self.alpha},{self.m},{self.rounds_used},{len(self.transversals)}"


def sample_disjoint_subsets(basis: Sequence[int], alpha: int, count: int,
                            rng: np.random.Generator) -> list[frozenset]:
    """Shuffle ``basis`` and cut the first ``count * alpha`` positions into
    ``count`` blocks of ``alpha``."""
    if alpha < 1 or count < 0:
        raise InputError("alpha must be positive and count non-negative")
    if count * alpha > len(basis):
        raise InputError(f"{count} disjoint {alpha}-subsets do not fit in a basis of size {len(basis)}")
    perm = rng.permutation(np.asarray(basis, dtype=np.int64))
    return [frozenset(int(e) for e in perm[j * alpha:(j + 1) * alpha]) for j in range(count)]


def extract(inst: Instance, params: ExtractionParams = ExtractionParams(), threads: int = 1) -> ExtractionResult:
    n = inst.n
    alpha, m = params.resolve(n)
    seed = check_seed(params.seed)
    result = ExtractionResult(n, alpha, m)
    if m == 0 or alpha == 0:
        result.vacuous = True
        return result
    # defaults always fit 2m columns; overrides may only fit fewer
    columns = min(2 * m, n // alpha)
    if columns < m:
        raise InputError(f"m={m} disjoint {alpha}-subsets do not fit in bases of size {n}")

    def solve(fam):
        return find_transversal_basis(inst.matroid, fam)

    pool = ThreadPoolExecutor(threads or None) if threads != 1 else None
    best: list = []
    try:
        for rnd in range(params.max_rounds):
            blocks = [sample_disjoint_subsets(b, alpha, columns, chunk_rng(seed, rnd, i))
                      for i, b in enumerate(inst.bases)]
            fams = [SubsetFamily([blocks[i][j] for i in range(n)], alpha, origin=range(n))
                    for j in range(columns)]
            found = list(pool.map(solve, fams)) if pool else [solve(f) for f in fams]
            wins = [(f, t) for f, t in zip(fams, found) if t is not None]
            result.per_round_successes.append(len(wins))
            result.rounds_used = rnd + 1
            if len(wins) > len(best):
                best = wins
            if len(wins) >= m:
                break
    finally:
        if pool:
            pool.shutdown()
    best = best[:m]
    result.families = [f for f, _ in best]
    result.transversals = [t for _, t in best]
    result.shortfall = len(best) < m
    return result


def check_result(inst: Instance, result: ExtractionResult) -> bool:
    """Every transversal is verified against its column and all are disjoint."""
    seen: set = set()
    for f, t in zip(result.families, result.transversals):
        f.check_origin(inst.bases)
        if not verify_transversal(inst.matroid, f, t):
            return False
        if seen & t.elements:
            return False
        seen |= t.elements
    return len(result.families) == len(result.transversals)
