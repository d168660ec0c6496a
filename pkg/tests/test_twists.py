import numpy as np
import pytest
from hypothesis import given, strategies as st

from mackey_pic.errors import InvalidInputError
from mackey_pic.groups import make_group
from mackey_pic.mackey import burnside_mackey, check_axioms, is_isomorphism
from mackey_pic.twists import (
    Twist,
    elementary_shift_iso,
    equivalent,
    make_twist,
    multiply_twists,
    negate_iso,
    normalize,
    random_twist,
    random_unit_twist,
    restriction_factor,
    trivial_twist,
    twist_ratio,
    twisted_burnside,
    witness_iso,
)

from conftest import SMALL_GROUPS

UNIT_GROUPS = [make_group(f) for f in [(3,), (4,), (5,), (8,), (9,), (6,), (2, 2), (2, 4), (12,), (3, 3)]]


def test_klein_diagram(klein_twist):
    A = twisted_burnside(klein_twist)
    L, D, R, K = 1, 2, 3, 4
    assert A.res[K, L].tolist() == [[2, 0, 9, 9, 0], [0, 2, 0, 0, 3]]
    assert A.res[K, D].tolist() == [[2, 9, 0, 9, 0], [0, 0, 2, 0, 3]]
    assert A.res[K, R].tolist() == [[2, 9, 9, 0, 0], [0, 0, 0, 2, 3]]
    for x in (L, D, R):
        assert A.res[x, 0].tolist() == [[2, 9]]
    assert check_axioms(A).ok


def test_klein_factors(klein_twist):
    assert restriction_factor(klein_twist, 0) == 27
    assert [restriction_factor(klein_twist, h) for h in (1, 2, 3, 4)] == [3, 3, 3, 1]
    assert twist_ratio(klein_twist, 2, 1) == 9


def test_trivial_twist_gives_burnside():
    for G in SMALL_GROUPS:
        a = trivial_twist(G)
        assert all(restriction_factor(a, h) == 1 for h in range(len(G.lattice)))
        assert twisted_burnside(a).same_as(burnside_mackey(G))


def test_twist_validation(klein):
    with pytest.raises(InvalidInputError):
        make_twist(klein, "1,3,3,3")
    with pytest.raises(InvalidInputError):
        make_twist(klein, "1,0,3,3,1")
    with pytest.raises(InvalidInputError):
        make_twist(klein, "1,3,3,3,2")
    assert make_twist(klein, "1, 3,3,3,1").values == (1, 3, 3, 3, 1)


group_st = st.sampled_from(SMALL_GROUPS)


@given(group_st, st.integers(0, 2**32))
def test_random_twists_satisfy_axioms(G, seed):
    a = random_twist(G, np.random.default_rng(seed))
    assert check_axioms(twisted_burnside(a)).ok


@given(group_st, st.integers(0, 2**32))
def test_restriction_factor_multiplicative(G, seed):
    rng = np.random.default_rng(seed)
    a, b = random_twist(G, rng), random_twist(G, rng)
    for h in range(len(G.lattice)):
        assert restriction_factor(a * b, h) == restriction_factor(a, h) * restriction_factor(b, h)


@given(group_st, st.integers(0, 2**32))
def test_ratio_times_factor(G, seed):
    a = random_twist(G, np.random.default_rng(seed))
    lat = G.lattice
    for j in range(len(lat)):
        for k in range(len(lat)):
            m = int(lat.meet_table[j, k])
            assert twist_ratio(a, j, k) * restriction_factor(a, j) == restriction_factor(a, m)
            if lat.le[j, k]:
                assert twist_ratio(a, j, k) == 1


def test_normalize_examples():
    C9, C5 = make_group([9]), make_group([5])
    assert normalize(make_twist(C9, (7, 1, 1))).values == (2, 1, 1)
    assert normalize(make_twist(C5, (8, 1))).values == (2, 1)
    G = make_group([4])
    assert normalize(trivial_twist(G)) == trivial_twist(G)
    with pytest.raises(InvalidInputError):
        normalize(make_twist(C9, (3, 1, 1)))


@given(st.sampled_from(UNIT_GROUPS), st.integers(0, 2**32))
def test_normalize_idempotent_and_equivalence(G, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (random_unit_twist(G, rng, bound=30) for _ in range(3))
    assert normalize(normalize(a)) == normalize(a)
    assert equivalent(a, a)
    assert equivalent(a, b) == equivalent(b, a)
    if equivalent(a, b) and equivalent(b, c):
        assert equivalent(a, c)
    assert equivalent(a, normalize(a))


def test_shift_examples():
    G = make_group([4])
    phi = elementary_shift_iso(trivial_twist(G), 0)
    assert phi.target.same_as(twisted_burnside(make_twist(G, (5, 1, 1))))
    assert is_isomorphism(phi)
    for p in (2, 3, 5):
        Cp = make_group([p])
        phi = elementary_shift_iso(trivial_twist(Cp), 0)
        # generator image at the top: G/G - G/e
        assert phi.components[1][:, 1].tolist() == [-1, 1]
        assert is_isomorphism(phi)


@given(st.sampled_from(UNIT_GROUPS), st.integers(0, 2**32))
def test_shift_and_negate_are_isomorphisms(G, seed):
    rng = np.random.default_rng(seed)
    a = random_unit_twist(G, rng)
    lat = G.lattice
    F = int(rng.integers(0, lat.top))
    assert is_isomorphism(elementary_shift_iso(a, F))
    assert is_isomorphism(negate_iso(a, F))


def test_witness_examples():
    C9 = make_group([9])
    phi = witness_iso(make_twist(C9, (7, 1, 1)), make_twist(C9, (2, 1, 1)))
    assert phi is not None and is_isomorphism(phi)
    assert witness_iso(make_twist(C9, (2, 1, 1)), make_twist(C9, (4, 1, 1))) is None


@given(st.sampled_from(UNIT_GROUPS), st.integers(0, 2**32))
def test_equivalent_twists_have_witnesses(G, seed):
    rng = np.random.default_rng(seed)
    a = random_unit_twist(G, rng, bound=20)
    lat = G.lattice
    vals = list(a.values)
    for h in range(lat.top):
        idx = lat.index(h, lat.top)
        vals[h] = int(rng.choice([-1, 1])) * (vals[h] + idx * int(rng.integers(-2, 3)))
    b = Twist(G, tuple(vals))
    assert equivalent(a, b)
    phi = witness_iso(a, b)
    assert phi is not None and is_isomorphism(phi)
    assert phi.source.same_as(twisted_burnside(a)) and phi.target.same_as(twisted_burnside(b))


def test_multiply_twists(klein_twist):
    sq = multiply_twists(klein_twist, klein_twist)
    assert sq.values == (1, 9, 9, 9, 1)
    with pytest.raises(InvalidInputError):
        multiply_twists(klein_twist, trivial_twist(make_group([4])))
