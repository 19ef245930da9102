from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import (max_common_independent, random_disjoint_family, random_matroid,
                     random_rank_n_matroid)
from rotabound.errors import InputError
from rotabound.matroid import LinearMatroid, PartitionMatroid, UniformMatroid, random_instance
from rotabound.transversal import (RADO_MAX_SETS, SubsetFamily, Transversal,
                                   find_transversal_basis, matroid_intersection,
                                   rado_check_bruteforce, verify_transversal)

# e, f, g span a plane inside a rank-3 space, h completes the rank
PLANE = LinearMatroid([[1, 0, 1, 0], [0, 1, 1, 0], [0, 0, 0, 1]], 5)


def test_plane_fixture_is_rank_deficient():
    assert PLANE.full_rank == 3
    assert PLANE.rank({0, 1, 2}) == 2


def test_rado_full_bases_satisfied():
    inst = random_instance(4, 7, 2)
    assert rado_check_bruteforce(inst.matroid, SubsetFamily(inst.bases)).satisfied


def test_rado_repeated_singleton():
    rep = rado_check_bruteforce(UniformMatroid(3, 8), SubsetFamily([{7}, {7}]))
    assert not rep.satisfied and rep.violator == {0, 1}


def test_rado_dependent_singletons():
    rep = rado_check_bruteforce(PLANE, SubsetFamily([{0}, {1}, {2}]))
    assert rep.violator == {0, 1, 2}
    assert PLANE.rank({0, 1, 2}) < 3


def test_rado_refuses_large_families():
    fam = SubsetFamily([{i} for i in range(RADO_MAX_SETS + 1)])
    with pytest.raises(InputError, match="find_transversal_basis"):
        rado_check_bruteforce(UniformMatroid(RADO_MAX_SETS + 1, RADO_MAX_SETS + 1), fam)


def test_intersection_examples():
    u = UniformMatroid(3, 5)
    assert len(matroid_intersection(u, u)) == 3
    part = PartitionMatroid([0, 0, 1, 1], [1, 1])
    got = matroid_intersection(UniformMatroid(2, 4), part)
    assert len(got) == 2 and part.is_independent(got)


def test_intersection_ground_mismatch():
    with pytest.raises(InputError):
        matroid_intersection(UniformMatroid(1, 3), UniformMatroid(1, 4))


def test_intersection_needs_augmenting_path():
    # the ascending scan takes 0, which blocks both 1 (same class) and 2
    # (parallel); only the path 1 -> 0 -> 2 reaches the optimum {1, 2}
    m1 = LinearMatroid([[1, 0, 1], [0, 1, 0]], 2)
    m2 = PartitionMatroid([0, 0, 1], [1, 1])
    hist = []
    got = matroid_intersection(m1, m2, history=hist)
    assert got == {1, 2}
    assert hist == [1, 2]
    assert len(got) == max_common_independent(m1, m2)


@settings(max_examples=150, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), ground=st.integers(1, 7))
def test_intersection_matches_exhaustive(seed, ground):
    rng = np.random.default_rng(seed)
    m1, m2 = random_matroid(rng, ground), random_matroid(rng, ground)
    hist = []
    got = matroid_intersection(m1, m2, history=hist)
    assert m1.is_independent(got) and m2.is_independent(got)
    assert len(got) == max_common_independent(m1, m2)
    assert hist == list(range(1, len(got) + 1))


def test_find_transversal_for_bases():
    inst = random_instance(5, 11, 4)
    fam = SubsetFamily(inst.bases)
    t = find_transversal_basis(inst.matroid, fam)
    assert t is not None and verify_transversal(inst.matroid, fam, t)


def test_find_transversal_absent_for_plane():
    assert find_transversal_basis(PLANE, SubsetFamily([{0}, {1}, {2}])) is None


def test_find_transversal_input_errors():
    with pytest.raises(InputError, match="both set"):
        find_transversal_basis(UniformMatroid(2, 4), SubsetFamily([{0, 1}, {1, 2}]))
    with pytest.raises(InputError, match="rank"):
        find_transversal_basis(UniformMatroid(2, 4), SubsetFamily([{0}]))


def test_find_transversal_deterministic():
    inst = random_instance(6, 3, 8)
    rng = np.random.default_rng(0)
    fam = SubsetFamily([rng.choice(b, 2, replace=False) for b in inst.bases])
    assert find_transversal_basis(inst.matroid, fam) == find_transversal_basis(inst.matroid, fam)


@settings(max_examples=120, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 7))
def test_transversal_iff_rado(seed, n):
    rng = np.random.default_rng(seed)
    ground = int(rng.integers(n, 3 * n + 1))
    m = random_rank_n_matroid(rng, n, ground)
    fam = SubsetFamily(random_disjoint_family(rng, ground, n))
    t = find_transversal_basis(m, fam)
    rep = rado_check_bruteforce(m, fam)
    assert (t is not None) == rep.satisfied
    if t is not None:
        assert verify_transversal(m, fam, t)
    else:
        union = set().union(*(fam.sets[i] for i in rep.violator))
        assert m.rank(union) < len(rep.violator)


def test_verify_transversal_rejects():
    m = UniformMatroid(2, 4)
    fam = SubsetFamily([{0, 1}, {2, 3}])
    assert verify_transversal(m, fam, Transversal([(0, 0), (1, 2)]))
    assert not verify_transversal(m, fam, Transversal([(0, 0), (1, 0)]))
    assert not verify_transversal(m, fam, Transversal([(0, 0)]))
    assert not verify_transversal(m, fam, Transversal([(0, 2), (1, 3)]))
    assert not verify_transversal(m, fam, Transversal([(0, 9), (1, 2)]))


def test_verify_transversal_rank_deficient_pick():
    fam = SubsetFamily([{0, 3}, {1}, {2}])
    assert not verify_transversal(PLANE, fam, Transversal([(0, 0), (1, 1), (2, 2)]))
    assert PLANE.rank({0, 1, 2}) == 2
    assert verify_transversal(PLANE, fam, Transversal([(0, 3), (1, 1), (2, 2)]))


def test_family_validation():
    with pytest.raises(InputError):
        SubsetFamily([{1}, set()])
    fam = SubsetFamily([{0}, {3}], origin=[0, 1])
    fam.check_origin([[0, 1], [2, 3]])
    with pytest.raises(InputError):
        fam.check_origin([[2, 3], [0, 1]])
    with pytest.raises(InputError):
        SubsetFamily([{0}], origin=[0, 1])
