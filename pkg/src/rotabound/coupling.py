"""The coupling that compares ``Q(B_1, ..., B_k)`` with ``Q_{k,n}``.

Index sets ``S'_i`` are uniform alpha-subsets of ``{0, ..., n-1}``. At step
i the current independent set ``I_{i-1}`` is extended to a basis ``B'_i``
inside ``I_{i-1} ∪ B_i``, a bijection ``psi_i`` from indices onto ``B'_i``
is chosen to agree with ``psi_{i-1}`` on the indices of ``I_{i-1}``, and
``I_i = I_{i-1} ∪ psi_i(S'_i)``. The process keeps ``|I_i|`` equal to
``|S'_1 ∪ ... ∪ S'_i|`` at every step; ``run_coupling`` asserts it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.stats import chi2

from .errors import ContractError, InputError
from .matroid import Matroid, check_seed
from .montecarlo import chunk_rng
from .probability import q_exact, union_size_distribution

TRACE_LIMIT = 10**4


@dataclass(frozen=True)
class CouplingStep:
    s_prime: tuple
    psi: tuple
    b_prime: frozenset
    s: frozenset
    independent: frozenset

    def to_dict(self) -> dict:
        return {
            "s_prime": list(self.s_prime),
            "psi": list(self.psi),
            "b_prime": sorted(self.b_prime),
            "s": sorted(self.s),
            "independent": sorted(self.independent),
        }


@dataclass
class CouplingTrace:
    n: int
    alpha: int
    sizes: list = field(default_factory=list)
    index_union_sizes: list = field(default_factory=list)
    steps: Optional[list] = None
    union: frozenset = frozenset()

    @property
    def final_size(self) -> int:
        return self.sizes[-1]

    def to_dict(self) -> dict:
        d = {"n": self.n, "alpha": self.alpha, "sizes": self.sizes,
             "index_union_sizes": self.index_union_sizes}
        if self.steps is not None:
            d["steps"] = [s.to_dict() for s in self.steps]
        return d


def _check_bases(m: Matroid, bases, alpha):
    if not bases:
        raise InputError("need at least one basis")
    n = m.full_rank
    if not 1 <= alpha <= n:
        raise InputError(f"need 1 <= alpha <= n={n}, got {alpha}")
    for i, b in enumerate(bases):
        if not m.is_basis(b):
            raise InputError(f"set {i} is not a basis of the matroid")


def run_coupling(m: Matroid, bases: Sequence[Sequence[int]], alpha: int, seed: int,
                 stream: Optional[int] = None, keep_steps: Optional[bool] = None,
                 validate: bool = True) -> CouplingTrace:
    """Run the coupled process once; raises ``ContractError`` if a step
    breaks one of its invariants."""
    if validate:
        _check_bases(m, bases, alpha)
    seed = check_seed(seed)
    rng = chunk_rng(seed) if stream is None else chunk_rng(seed, stream)
    n, k = m.full_rank, len(bases)
    if keep_steps is None:
        keep_steps = k * n <= TRACE_LIMIT
    trace = CouplingTrace(n, alpha, steps=[] if keep_steps else None)

    def fail(i, msg):
        raise ContractError(f"step {i}: {msg}", witness=trace)

    b_prime = frozenset(bases[0])
    psi = sorted(b_prime)
    indep: frozenset = frozenset()
    index_union: set = set()
    for i in range(k):
        if i > 0:
            b_prime = m.extend_to_basis(indep, bases[i])
            where = {e: j for j, e in enumerate(psi)}
            kept = {where[e]: e for e in indep}
            fresh = iter(sorted(b_prime - indep))
            psi = [kept[j] if j in kept else next(fresh) for j in range(n)]
            if any(psi[j] != e for j, e in kept.items()):
                fail(i, "psi does not agree with the previous bijection on I_{i-1}")
        if len(set(psi)) != n or set(psi) != b_prime:
            fail(i, "psi is not a bijection onto B'_i")
        s_prime = tuple(sorted(int(j) for j in rng.choice(n, alpha, replace=False)))
        s = frozenset(psi[j] for j in s_prime)
        indep = indep | s
        index_union.update(s_prime)
        if not indep <= b_prime:
            fail(i, "I_i is not contained in B'_i")
        if len(indep) != len(index_union):
            fail(i, f"|I_i| = {len(indep)} but |S'_1 ∪ ... ∪ S'_i| = {len(index_union)}")
        trace.sizes.append(len(indep))
        trace.index_union_sizes.append(len(index_union))
        if keep_steps:
            trace.steps.append(CouplingStep(s_prime, tuple(psi), b_prime, s, indep))
    trace.union = indep
    return trace


def naive_chain(m: Matroid, bases, subsets) -> frozenset:
    """Independent set built directly from ``S_i ⊆ B_i``:
    ``I_1 = S_1`` and ``I_i = I_{i-1} ∪ (S_i ∩ B'_i)`` with ``B'_i`` the
    greedy extension of ``I_{i-1}`` inside ``I_{i-1} ∪ B_i``."""
    indep = frozenset(subsets[0])
    for b, s in zip(bases[1:], subsets[1:]):
        b_prime = m.extend_to_basis(indep, b)
        indep = indep | (frozenset(s) & b_prime)
    return indep


@dataclass
class DominationReport:
    k: int
    n: int
    alpha: int
    trials: int
    seed: int
    coupled_violations: int
    direct_violations: int
    direct_failures: int
    size_counts: dict
    chi_square: float
    dof: int
    p_value: float
    q_exact: Fraction

    @property
    def small_union_frequency(self) -> Fraction:
        return Fraction(sum(c for u, c in self.size_counts.items() if u < self.k), self.trials)

    @property
    def sigma(self) -> float:
        q = float(self.q_exact)
        return (q * (1 - q) / self.trials) ** 0.5

    def to_dict(self) -> dict:
        freq = self.small_union_frequency
        direct = Fraction(self.direct_failures, self.trials)
        return {
            "k": self.k, "n": self.n, "alpha": self.alpha, "trials": self.trials, "seed": self.seed,
            "coupled_rank_violations": self.coupled_violations,
            "direct_rank_violations": self.direct_violations,
            "size_counts": {str(u): c for u, c in sorted(self.size_counts.items())},
            "chi_square": self.chi_square, "dof": self.dof, "p_value": self.p_value,
            "coupled_small_union_frequency": str(freq),
            "coupled_small_union_decimal": float(freq),
            "direct_Q_estimate": str(direct),
            "direct_Q_decimal": float(direct),
            "q_exact": str(self.q_exact),
            "q_exact_decimal": float(self.q_exact),
            "sigma": self.sigma,
        }


def chi_square_against(counts: dict, dist: Sequence[Fraction], trials: int):
    """Pearson statistic with adjacent bins pooled until each expects >= 5."""
    bins = []
    obs = exp = 0.0
    for u, pu in enumerate(dist):
        obs += counts.get(u, 0)
        exp += float(pu) * trials
        if exp >= 5:
            bins.append([obs, exp])
            obs = exp = 0.0
    if bins:
        bins[-1][0] += obs
        bins[-1][1] += exp
    elif exp > 0:
        bins.append([obs, exp])
    stat = sum((o - e) ** 2 / e for o, e in bins if e > 0)
    dof = max(len(bins) - 1, 0)
    p = float(chi2.sf(stat, dof)) if dof else 1.0
    return stat, dof, p


def coupling_rank_domination(m: Matroid, bases, alpha: int, trials: int, seed: int) -> DominationReport:
    """Run the coupling ``trials`` times and check ``r(∪S_i) >= |I_k|``.

    Each trial also samples ``S_i ⊆ B_i`` directly and checks the same
    inequality against ``naive_chain``. The empirical law of ``|I_k|`` is
    compared with the exact law of ``|S'_1 ∪ ... ∪ S'_k|``.
    """
    _check_bases(m, bases, alpha)
    seed = check_seed(seed)
    k, n = len(bases), m.full_rank
    sorted_bases = [np.array(sorted(b), dtype=np.int64) for b in bases]
    counts: dict = {}
    coupled_bad = direct_bad = direct_fail = 0
    for t in range(trials):
        trace = run_coupling(m, bases, alpha, seed, stream=2 * t, keep_steps=False, validate=False)
        size = trace.final_size
        counts[size] = counts.get(size, 0) + 1
        if m.rank(trace.union) < size:
            coupled_bad += 1
        rng = chunk_rng(seed, 2 * t + 1)
        subsets = [frozenset(int(e) for e in rng.choice(b, alpha, replace=False)) for b in sorted_bases]
        chain = naive_chain(m, bases, subsets)
        r = m.rank(frozenset().union(*subsets))
        if r < len(chain):
            direct_bad += 1
        if r < k:
            direct_fail += 1
    stat, dof, p = chi_square_against(counts, union_size_distribution(k, n, alpha), trials)
    return DominationReport(k, n, alpha, trials, seed, coupled_bad, direct_bad, direct_fail,
                            counts, stat, dof, p, q_exact(k, n, alpha))
