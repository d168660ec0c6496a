import numpy as np
import pytest
from hypothesis import given, strategies as st

from mackey_pic.errors import InvalidInputError
from mackey_pic.groups import make_group
from mackey_pic.mackey import (
    MackeyFunctor,
    MackeyMorphism,
    burnside_mackey,
    check_axioms,
    check_morphism,
    compose,
    constant_functor,
    direct_sum,
    dual_constant_functor,
    identity_morphism,
    inverse,
    is_isomorphism,
    render_lewis,
    zero_functor,
)
from mackey_pic.twists import elementary_shift_iso, negate_iso, random_unit_twist, twisted_burnside

from conftest import SMALL_GROUPS


def test_trivial_group_burnside():
    A = burnside_mackey(make_group([]))
    assert A.ranks == (1,)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cp_lewis_diagram(p):
    A = burnside_mackey(make_group([p]))
    assert A.res[1, 0].tolist() == [[p, 1]]
    assert A.tr[0, 1].tolist() == [[1], [0]]


def test_klein_top_basis(klein):
    A = burnside_mackey(klein)
    assert A.ranks[4] == 5
    assert A.labels[4] == ("G/e", "G/<(0,1)>", "G/<(1,0)>", "G/<(1,1)>", "G/G")


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=repr)
def test_standard_functors_satisfy_axioms(G):
    A = burnside_mackey(G)
    for M in (A, zero_functor(G), constant_functor(G), dual_constant_functor(G), direct_sum(A, constant_functor(G))):
        assert check_axioms(M).ok, M.name
        assert all(M.weyl_trivial)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_perturbed_restriction_breaks_double_coset(p):
    A = burnside_mackey(make_group([p]))
    bad = A.res[1, 0].copy()
    bad[0, 0] = p + 1
    B = A.replace(res={(1, 0): bad})
    rep = check_axioms(B)
    assert not rep.ok
    assert any(v.check == "double coset formula" and v.where == ("G", "e", "e") for v in rep.violations)


def test_perturbed_transfer_breaks_composition():
    G = make_group([4])
    A = burnside_mackey(G)
    bad = A.tr[0, 1].copy()
    bad[0, 0] += 1
    rep = check_axioms(A.replace(tr={(0, 1): bad}))
    assert any(v.check == "transfers compose" for v in rep.violations)


def test_functor_validates_shapes():
    G = make_group([2])
    with pytest.raises(InvalidInputError):
        MackeyFunctor.build(G, [1, 2], lambda h, k: [[1]], lambda j, h: [[1]])


def test_identity_and_doubling_morphisms():
    G = make_group([3])
    A = burnside_mackey(G)
    one = identity_morphism(A)
    assert check_morphism(one) and is_isomorphism(one)
    two = one * 2
    assert check_morphism(two) and not is_isomorphism(two)


def test_shift_output_is_an_isomorphism():
    G = make_group([4])
    from mackey_pic.twists import trivial_twist

    phi = elementary_shift_iso(trivial_twist(G), 0)
    assert check_morphism(phi) and is_isomorphism(phi)


def test_morphism_group_mismatch():
    with pytest.raises(InvalidInputError):
        MackeyMorphism(burnside_mackey(make_group([2])), burnside_mackey(make_group([3])), ())
    with pytest.raises(InvalidInputError):
        direct_sum(burnside_mackey(make_group([2])), burnside_mackey(make_group([3])))


def test_non_morphism_is_detected():
    G = make_group([2])
    A = burnside_mackey(G)
    Z = constant_functor(G)
    # projection onto the G/G coefficient does not commute with restriction
    phi = MackeyMorphism(A, Z, ([[1]], [[0, 1]]))
    assert not check_morphism(phi)
    # the marks at e give a morphism A -> Z
    psi = MackeyMorphism(A, Z, ([[1]], [[2, 1]]))
    assert check_morphism(psi) and not is_isomorphism(psi)


iso_groups = st.sampled_from([make_group(f) for f in [(4,), (5,), (8,), (9,), (6,), (2, 2), (3, 3)]])


@given(iso_groups, st.integers(0, 10_000))
def test_isomorphisms_compose_and_invert(G, seed):
    rng = np.random.default_rng(seed)
    a = random_unit_twist(G, rng)
    lat = G.lattice
    F1 = int(rng.integers(0, lat.top))
    F2 = int(rng.integers(0, lat.top))
    phi = elementary_shift_iso(a, F1)
    psi = negate_iso(shifted(a, F1), F2)
    chain = compose(psi, phi)
    assert check_morphism(chain) and is_isomorphism(chain)
    back = inverse(chain)
    assert back is not None and is_isomorphism(back)
    assert compose(back, chain).same_as(identity_morphism(chain.source))


def shifted(a, F):
    lat = a.group.lattice
    return a.with_value(F, a[F] + lat.index(F, lat.top))


def test_render_lewis_klein(klein_twist):
    text = render_lewis(twisted_burnside(klein_twist))
    assert "res G -> <(0,1)>: [2 0 9 9 0; 0 2 0 0 3]" in text
    assert "res <(0,1)> -> e: [2 9]" in text
    assert "tr  e -> <(0,1)>: [1; 0]" in text


def test_render_shows_nontrivial_weyl():
    from mackey_pic.changegroups import induct_up

    Z = constant_functor(make_group([]))
    M = induct_up(Z, make_group([2]), 0)
    assert "weyl e generator 0: [0 1; 1 0]" in render_lewis(M)
