"""Monte Carlo estimate of ``Q(B_1, ..., B_k)``.

Trials run in fixed-size chunks; chunk c draws from a generator seeded by
``(seed, c)``, so the report does not depend on how chunks are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InputError
from .matroid import Matroid, check_seed

CHUNK = 10_000


@dataclass(frozen=True)
class MCReport:
    trials: int
    failures: int
    seed: int

    @property
    def estimate(self) -> Fraction:
        return Fraction(self.failures, self.trials)

    @property
    def stderr(self) -> float:
        p = self.failures / self.trials
        return math.sqrt(p * (1 - p) / self.trials)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "failures": self.failures,
            "estimate": str(self.estimate),
            "estimate_decimal": self.failures / self.trials,
            "stderr": self.stderr,
            "seed": self.seed,
        }


def chunk_rng(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def sample_subsets(rng: np.random.Generator, basis: np.ndarray, alpha: int, trials: int) -> np.ndarray:
    """``trials`` independent uniform alpha-subsets of ``basis`` (one per row)."""
    keys = rng.random((trials, len(basis)))
    picks = np.argpartition(keys, alpha - 1, axis=1)[:, :alpha] if alpha < len(basis) else \
        np.broadcast_to(np.arange(len(basis)), (trials, len(basis)))
    return basis[picks]


def _validate(m: Matroid, bases, alpha):
    if not bases:
        raise InputError("need at least one basis")
    for i, b in enumerate(bases):
        if not m.is_basis(b):
            raise InputError(f"set {i} is not a basis of the matroid")
        if alpha > len(b):
            raise InputError(f"alpha={alpha} exceeds the size of basis {i}")
    if alpha < 1:
        raise InputError(f"alpha must be positive, got {alpha}")


def estimate_Q(m: Matroid, bases: Sequence[Sequence[int]], alpha: int, trials: int,
               seed: int, threads: int = 1) -> MCReport:
    """Fraction of trials in which random alpha-subsets of the bases have a
    union of rank below k = len(bases). Bases may overlap or coincide."""
    _validate(m, bases, alpha)
    seed = check_seed(seed)
    if trials < 1:
        raise InputError("trials must be positive")
    k = len(bases)
    arrays = [np.array(sorted(b), dtype=np.int64) for b in bases]

    def run(c):
        size = min(CHUNK, trials - c * CHUNK)
        rng = chunk_rng(seed, c)
        union = np.hstack([sample_subsets(rng, b, alpha, size) for b in arrays])
        return int((m.rank_many(union) < k).sum())

    chunks = range(-(-trials // CHUNK))
    if threads == 1:
        failures = sum(map(run, chunks))
    else:
        with ThreadPoolExecutor(threads or None) as pool:
            failures = sum(pool.map(run, chunks))
    return MCReport(trials, failures, seed)
