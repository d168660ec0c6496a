import itertools
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mackey_pic import burnside as bs
from mackey_pic.errors import InvalidInputError
from mackey_pic.groups import make_group

from conftest import SMALL_GROUPS

# ---------------------------------------------------------------------------
# an independent oracle: honest finite G-sets built from cosets


def coset_set(G, h, j):
    """Points of H/J as frozensets of group elements."""
    lat = G.lattice
    J = lat.subgroups[j].elements
    return sorted({frozenset(G.add(x, y) for y in J) for x in lat.subgroups[h].elements}, key=min)


def act(G, g, point):
    if isinstance(point, tuple):
        return tuple(act(G, g, p) for p in point)
    return frozenset(G.add(g, x) for x in point)


def decompose(G, k, points):
    """Orbit decomposition of a K-set as a Counter of stabilizer lattice indices."""
    lat = G.lattice
    K = lat.subgroups[k].elements
    todo = set(points)
    out = Counter()
    while todo:
        p = todo.pop()
        orbit = {act(G, g, p) for g in K}
        todo -= orbit
        stab = frozenset(g for g in K if act(G, g, p) == p)
        mask = sum(1 << x for x in stab)
        out[lat.index_of_mask(mask)] += 1
    return out


def as_counter(x):
    return Counter({j: int(c) for j, c in zip(bs.basis(x.group, x.level), x.coefficients) if c})


ORACLE_GROUPS = [make_group(f) for f in [(2,), (3,), (4,), (6,), (2, 2), (8,), (2, 4), (9,), (12,), (2, 2, 2)]]


@pytest.mark.parametrize("G", ORACLE_GROUPS, ids=repr)
def test_products_match_gset_oracle(G):
    lat = G.lattice
    for h in range(len(lat)):
        for j, k in itertools.product(lat.below(h), repeat=2):
            X, Y = coset_set(G, h, j), coset_set(G, h, k)
            expected = decompose(G, h, [(x, y) for x in X for y in Y])
            got = bs.multiply(bs.orbit(G, h, j), bs.orbit(G, h, k))
            assert as_counter(got) == expected


@pytest.mark.parametrize("G", ORACLE_GROUPS, ids=repr)
def test_restriction_matches_gset_oracle(G):
    lat = G.lattice
    for h in range(len(lat)):
        for k in lat.below(h):
            for j in lat.below(h):
                got = bs.restrict(bs.orbit(G, h, j), k)
                assert as_counter(got) == decompose(G, k, coset_set(G, h, j))


@pytest.mark.parametrize("G", ORACLE_GROUPS, ids=repr)
def test_marks_match_fixed_point_counts(G):
    lat = G.lattice
    top = lat.top
    M = bs.marks_matrix(G)
    for r, k in enumerate(lat.below(top)):
        K = lat.subgroups[k].elements
        for c, j in enumerate(lat.below(top)):
            fixed = sum(1 for p in coset_set(G, top, j) if all(act(G, g, p) == p for g in K))
            assert M[r, c] == fixed


def test_cp_examples():
    for p in (2, 3, 5, 7):
        G = make_group([p])
        e, top = 0, 1
        x = bs.orbit(G, top, e)
        assert list(bs.multiply(x, x).coefficients) == [p, 0]
        assert bs.restriction_matrix(G, top, e).tolist() == [[p, 1]]
        assert bs.transfer_matrix(G, e, top).tolist() == [[1], [0]]
        assert list(bs.marks(x)) == [p, 0]


def test_klein_examples(klein):
    L, D, K = 1, 2, 4
    assert bs.multiply(bs.orbit(klein, K, L), bs.orbit(klein, K, D)) == bs.orbit(klein, K, 0)
    assert bs.restrict(bs.orbit(klein, K, D), L) == bs.orbit(klein, L, 0)
    assert bs.transfer(bs.orbit(klein, L, 0), K) == bs.orbit(klein, K, 0)
    M = bs.marks_matrix(klein)
    assert M.shape == (5, 5)
    assert all(M[i, j] == 0 for i in range(5) for j in range(5) if i > j)
    assert all(M[i, i] != 0 for i in range(5))


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=repr)
def test_unit_and_trivial_maps(G):
    lat = G.lattice
    for h in range(len(lat)):
        one = bs.unit(G, h)
        assert list(bs.marks(one)) == [1] * len(bs.basis(G, h))
        for j in lat.below(h):
            x = bs.orbit(G, h, j)
            assert bs.multiply(one, x) == x
        assert bs.restrict(one, h) == one
        assert np.array_equal(bs.transfer_matrix(G, h, h), bs.restriction_matrix(G, h, h))
        for k in lat.below(h):
            assert bs.restrict(one, k) == bs.unit(G, k)


def test_level_errors():
    G = make_group([4])
    with pytest.raises(InvalidInputError):
        bs.multiply(bs.unit(G, 1), bs.unit(G, 2))
    with pytest.raises(InvalidInputError):
        bs.restrict(bs.unit(G, 1), 2)
    with pytest.raises(InvalidInputError):
        bs.transfer(bs.unit(G, 2), 1)
    with pytest.raises(InvalidInputError):
        bs.BurnsideElement(G, 2, [1, 2])


group_and_level = st.sampled_from(SMALL_GROUPS).flatmap(
    lambda G: st.tuples(st.just(G), st.integers(0, len(G.lattice) - 1))
)


def element(G, h, data):
    n = len(bs.basis(G, h))
    return bs.BurnsideElement(G, h, data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n)))


@given(group_and_level, st.data())
def test_marks_are_multiplicative(gh, data):
    G, h = gh
    x, y = element(G, h, data), element(G, h, data)
    assert list(bs.marks(x * y)) == [a * b for a, b in zip(bs.marks(x), bs.marks(y))]


@given(group_and_level, st.data())
def test_ring_axioms(gh, data):
    G, h = gh
    x, y, z = (element(G, h, data) for _ in range(3))
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z


@given(group_and_level, st.data())
def test_restriction_is_a_ring_map(gh, data):
    G, h = gh
    k = data.draw(st.sampled_from(G.lattice.below(h)))
    x, y = element(G, h, data), element(G, h, data)
    assert bs.restrict(x * y, k) == bs.restrict(x, k) * bs.restrict(y, k)


@given(group_and_level, st.data())
def test_frobenius_reciprocity(gh, data):
    G, h = gh
    j = data.draw(st.sampled_from(G.lattice.below(h)))
    x, y = element(G, h, data), element(G, j, data)
    assert bs.transfer(bs.restrict(x, j) * y, h) == x * bs.transfer(y, h)


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=repr)
def test_marks_matrix_is_injective(G):
    from mackey_pic.intlinalg import determinant

    assert determinant(bs.marks_matrix(G)) != 0
