import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mackey_pic import intlinalg as il
from mackey_pic.agmod import (
    AGModule,
    burnside_module,
    check_counit,
    check_module_axioms,
    counit_morphism,
    direct_sum_modules,
    eval_GG,
    is_module_map,
    tensor_modules,
    tensor_up,
    twisted_module,
    unit_map,
    verify_module_product,
)
from mackey_pic.burnside import BurnsideElement, multiplication_table, orbit
from mackey_pic.changegroups import inflate
from mackey_pic.errors import InvalidInputError
from mackey_pic.groups import make_group
from mackey_pic.mackey import (
    burnside_mackey,
    check_axioms,
    constant_functor,
    is_isomorphism,
    zero_functor,
)
from mackey_pic.picard import unit_twists
from mackey_pic.twists import make_twist, random_twist, random_unit_twist, twisted_burnside

from conftest import SMALL_GROUPS, TWIST_GROUPS

C4, C9 = make_group([4]), make_group([9])


def twist_strategy(G, bound=9):
    n = len(G.lattice)
    nonzero = st.integers(-bound, bound).filter(bool)
    return st.lists(nonzero, min_size=n - 1, max_size=n - 1).map(lambda v: make_twist(G, v + [1]))


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=repr)
def test_burnside_module_is_the_multiplication_table(G):
    M = burnside_module(G)
    table = multiplication_table(G)
    for h, A in enumerate(M.action):
        for j in range(M.rank):
            assert [int(x) for x in A[:, j]] == list(table[h][j].coefficients)
    assert eval_GG(burnside_mackey(G)).same_as(M)
    assert check_module_axioms(M).ok


@pytest.mark.parametrize("G", [G for G in SMALL_GROUPS if G.order <= 12], ids=repr)
def test_eval_of_twisted_burnside_is_twisted_module(G):
    rng = np.random.default_rng(G.order)
    for _ in range(4):
        a = random_twist(G, rng)
        M = twisted_module(a)
        assert eval_GG(twisted_burnside(a)).same_as(M)
        assert check_module_axioms(M).ok


@given(twist_strategy(make_group([2, 2])) | twist_strategy(make_group([12])) | twist_strategy(make_group([3, 3])))
def test_twisted_module_axioms_hold(a):
    M = twisted_module(a)
    assert check_module_axioms(M).ok
    assert eval_GG(twisted_burnside(a)).same_as(M)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_cp_example(p):
    G = make_group([p])
    a = make_twist(G, (5, 1))
    M = twisted_module(a)
    e, top = G.lattice.bottom, G.lattice.top
    gg = np.zeros(2, dtype=object)
    gg[top] = 1
    image = M.act(orbit(G, top, e), gg)
    assert [int(x) for x in image] == [5, 0]
    assert [int(x) for x in M.action[e][:, e]] == [p, 0]


def test_klein_example(klein, klein_twist):
    M = twisted_module(klein_twist)
    L, D = 1, 2
    assert M.action[L][0, D] == 9
    assert [int(x) for x in M.action[L][:, D]] == [9, 0, 0, 0, 0]


def test_act_by_general_elements():
    G = make_group([6])
    M = burnside_module(G)
    x = BurnsideElement(G, G.lattice.top, (1, -2, 0, 3))
    v = np.array([0, 1, 1, 0], dtype=object)
    expected = sum(int(c) * M.action[h] for h, c in enumerate(x.coefficients))
    assert list(M.act(x, v)) == list(il.matmul(expected, v.reshape(-1, 1))[:, 0])
    with pytest.raises(InvalidInputError):
        M.act(BurnsideElement(G, 1, (1, 0)), v)


def test_all_unit_twists_on_c9_pass():
    for a in unit_twists(C9):
        assert check_module_axioms(twisted_module(a)).ok


def test_perturbation_is_caught():
    M = twisted_module(make_twist(C9, (2, 1, 1)))
    acts = [A.copy() for A in M.action]
    acts[1][2, 0] += 1
    bad = AGModule(C9, M.rank, tuple(acts))
    rep = check_module_axioms(bad)
    assert not rep.ok
    assert any("multiplicative" in v.check for v in rep.violations)
    acts = [A.copy() for A in M.action]
    acts[C9.lattice.top][0, 0] = 2
    assert not check_module_axioms(AGModule(C9, M.rank, tuple(acts))).ok


def test_wrong_number_of_actions():
    with pytest.raises(InvalidInputError):
        AGModule(C4, 1, (il.identity(1),))


def test_eval_of_inflated_z():
    for G in (make_group([4]), make_group([2, 2]), make_group([6])):
        top = G.lattice.top
        M = eval_GG(inflate(constant_functor(make_group([])), G, top))
        assert M.rank == 1
        assert [int(A[0, 0]) for A in M.action] == [int(h == top) for h in range(len(G.lattice))]
        assert check_module_axioms(M).ok


@pytest.mark.parametrize("G", [make_group(f) for f in TWIST_GROUPS.values()], ids=repr)
def test_tensor_up_of_the_unit_module(G):
    T = tensor_up(burnside_module(G))
    A = burnside_mackey(G)
    assert T.ranks == A.ranks
    assert check_axioms(T).ok
    phi = counit_morphism(A)
    assert phi.source.ranks == A.ranks
    assert is_isomorphism(phi)


def test_tensor_up_of_rank_zero_is_zero():
    G = make_group([6])
    Z = AGModule(G, 0, tuple(il.zeros(0, 0) for _ in G.lattice.subgroups))
    T = tensor_up(Z)
    assert T.ranks == zero_functor(G).ranks == (0,) * len(G.lattice)
    assert check_axioms(T).ok


@pytest.mark.parametrize("G", [C4, C9, make_group([5]), make_group([2, 2])], ids=repr)
def test_tensor_up_recovers_twisted_functors(G):
    for a in unit_twists(G):
        phi = counit_morphism(twisted_burnside(a))
        assert phi.source.ranks == twisted_burnside(a).ranks
        assert check_axioms(phi.source).ok
        assert is_isomorphism(phi)


@pytest.mark.parametrize("G", [C4, C9], ids=repr)
def test_counit_on_twisted_modules(G):
    for a in unit_twists(G):
        M = twisted_module(a)
        assert check_counit(M)
        u = unit_map(M)
        assert il.is_unimodular(u)
        assert is_module_map(u, M, eval_GG(tensor_up(M)))


def test_counit_on_direct_sums():
    for G in (C4, C9, make_group([6])):
        rng = np.random.default_rng(G.order)
        M = direct_sum_modules(twisted_module(random_unit_twist(G, rng)), burnside_module(G))
        assert check_module_axioms(M).ok
        assert check_counit(M)


def test_counit_fails_for_a_non_module_map():
    M = burnside_module(C4)
    N = twisted_module(make_twist(C4, (3, 1, 1)))
    assert not is_module_map(il.identity(M.rank), M, N)


@pytest.mark.parametrize("name, factors", list(TWIST_GROUPS.items()))
def test_module_products(name, factors):
    G = make_group(factors)
    twists = unit_twists(G)[:6]
    for a in twists:
        for b in twists:
            rep = verify_module_product(a, b)
            assert rep.ok, rep.summary()
            assert rep.data["tensor_rank"] == len(G.lattice)


def test_tensor_of_modules_with_the_unit():
    M = twisted_module(make_twist(C9, (4, 2, 1)))
    T, P, L = tensor_modules(burnside_module(C9), M)
    assert T.rank == M.rank
    assert check_module_axioms(T).ok


def test_modules_over_different_groups():
    with pytest.raises(InvalidInputError):
        direct_sum_modules(burnside_module(C4), burnside_module(C9))
    with pytest.raises(InvalidInputError):
        tensor_modules(burnside_module(C4), burnside_module(C9))
