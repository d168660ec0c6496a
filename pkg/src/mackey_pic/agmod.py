"""Modules over the Burnside ring A(G), evaluation at G/G, and tensoring back up.

A module is a free abelian group with one action matrix per basis orbit
``G/H`` of A(G).  ``eval_GG`` takes the top level of a Mackey functor, where
``G/H`` acts by ``tr_H^G res_H^G``.  ``tensor_up`` goes the other way,
building the functor with level ``A(H) (x)_{A(G)} M`` at ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import burnside
from . import intlinalg as il
from .errors import ConsistencyError, InvalidInputError, UnrepresentableError
from .groups import FiniteAbelianGroup
from .mackey import MackeyFunctor, MackeyMorphism, burnside_labels
from .report import ValidationReport
from .twists import Twist, twist_ratio


@dataclass(frozen=True, eq=False)
class AGModule:
    group: FiniteAbelianGroup
    rank: int
    action: tuple[np.ndarray, ...]
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        n = len(self.group.lattice)
        acts = tuple(il.as_matrix(m, self.rank, self.rank) for m in self.action)
        if len(acts) != n:
            raise InvalidInputError(f"need one action matrix per subgroup ({n}), got {len(acts)}")
        object.__setattr__(self, "action", acts)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"m{i}" for i in range(self.rank)))

    def same_as(self, other: "AGModule") -> bool:
        return (
            self.group == other.group
            and self.rank == other.rank
            and all(il.equal(a, b) for a, b in zip(self.action, other.action))
        )

    def act(self, x: burnside.BurnsideElement, m) -> np.ndarray:
        """Action of an arbitrary element of A(G) on a vector."""
        if x.level != self.group.lattice.top:
            raise InvalidInputError("module elements are acted on by A(G), the top level")
        v = il.as_vector(m).reshape(-1, 1)
        out = il.zeros(self.rank, 1)
        for c, A in zip(x.coefficients, self.action):
            if c:
                out = out + c * il.matmul(A, v)
        return out[:, 0]


def twisted_module(a: Twist) -> AGModule:
    """A(G) with ``G/H`` acting on ``G/J`` by ``twist_ratio(a, J, H) [G:JH] G/(J n H)``."""
    G = a.group
    lat = G.lattice
    n = len(lat)
    acts = []
    for h in range(n):
        A = il.zeros(n, n)
        for j in range(n):
            jh = int(lat.join_table[j, h])
            A[int(lat.meet_table[j, h]), j] = twist_ratio(a, j, h) * lat.index(jh, lat.top)
        acts.append(A)
    return AGModule(G, n, tuple(acts), burnside_labels(G)[lat.top], name=f"A(G)^{a}")


def burnside_module(G: FiniteAbelianGroup) -> AGModule:
    return twisted_module(Twist(G, (1,) * len(G.lattice)))


def direct_sum_modules(M: AGModule, N: AGModule) -> AGModule:
    if M.group != N.group:
        raise InvalidInputError("modules over different groups")
    acts = tuple(il.block_diag(a, b) for a, b in zip(M.action, N.action))
    labels = tuple(f"{x}[0]" for x in M.labels) + tuple(f"{x}[1]" for x in N.labels)
    return AGModule(M.group, M.rank + N.rank, acts, labels, name=f"({M.name} + {N.name})")


def eval_GG(M: MackeyFunctor) -> AGModule:
    lat = M.lattice
    top = lat.top
    acts = tuple(il.matmul(M.tr[h, top], M.res[top, h]) for h in range(len(lat)))
    return AGModule(M.group, M.ranks[top], acts, M.labels[top], name=f"ev({M.name})")


def check_module_axioms(M: AGModule) -> ValidationReport:
    """Unit law and ``(G/H)(G/K) = [G:HK] G/(H n K)`` acting compatibly."""
    lat = M.group.lattice
    lab = lat.label
    rep = ValidationReport(f"module axioms of {M.name or 'module'}")
    if not il.equal(M.action[lat.top], il.identity(M.rank)):
        rep.fail("G/G acts as the identity")
    n = len(lat)
    scale = [[lat.top_indices[int(lat.join_table[h, k])] for k in range(n)] for h in range(n)]
    stacked = _stack_small(M.action, max(map(max, scale), default=1))
    for h in range(n):
        if stacked is not None:
            # all products A_h A_k at once, exact in int64 by the bound checked in _stack_small
            prods = np.einsum("ij,kjl->kil", stacked[h], stacked)
            expected = stacked[lat.meet_table[h]] * np.array(scale[h], dtype=np.int64)[:, None, None]
            bad = np.flatnonzero(np.any(prods != expected, axis=(1, 2)))
        else:
            bad = [
                k
                for k in range(n)
                if not il.equal(il.matmul(M.action[h], M.action[k]), M.action[int(lat.meet_table[h, k])] * scale[h][k])
            ]
        for k in bad:
            rep.fail("action is multiplicative", (lab(h), lab(int(k))))
    return rep


def _stack_small(actions, scale: int) -> np.ndarray | None:
    """The action matrices as one int64 array, or None if products might overflow."""
    if not actions or actions[0].size == 0:
        return None
    try:
        S = np.stack([A.astype(np.int64) for A in actions])
    except OverflowError:
        return None
    peak = max(-int(S.min()), int(S.max()))
    if peak * peak * S.shape[1] >= 2**62 or peak * scale >= 2**62:
        return None
    return S


def is_module_map(f: np.ndarray, M: AGModule, N: AGModule) -> bool:
    return all(il.equal(il.matmul(f, a), il.matmul(b, f)) for a, b in zip(M.action, N.action))


# ---------------------------------------------------------------------------
# tensoring up


def _balancing_relations(G: FiniteAbelianGroup, h: int, M: AGModule) -> np.ndarray:
    """Columns ``(x res(g)) (x) m - x (x) (g m)`` in the basis ``(H/L, m_i)`` of ``A(H) (x) M``."""
    lat = G.lattice
    below = lat.below(h)
    pos = {x: i for i, x in enumerate(below)}
    r = M.rank
    cols = []
    for l in below:
        for k in range(len(lat)):
            # H/L * res(G/K) = [G:KH] [H:L(K n H)] H/(L n K)
            kh = int(lat.meet_table[k, h])
            scale = lat.index(int(lat.join_table[k, h]), lat.top) * lat.index(int(lat.join_table[l, kh]), h)
            target = pos[int(lat.meet_table[l, k])]
            for i in range(r):
                v = il.zeros(len(below) * r, 1)
                v[target * r + i, 0] += scale
                v[pos[l] * r : (pos[l] + 1) * r, 0] -= M.action[k][:, i]
                cols.append(v)
    if not cols:
        return il.zeros(len(below) * r, 0)
    return np.hstack(cols)


@dataclass(frozen=True, eq=False)
class TensoredFunctor:
    """``tensor_up(M)`` together with the presentation data used to build it."""

    functor: MackeyFunctor
    projections: tuple[np.ndarray, ...]
    lifts: tuple[np.ndarray, ...]
    module: AGModule


def tensor_up_data(M: AGModule) -> TensoredFunctor:
    G = M.group
    lat = G.lattice
    n = len(lat)
    r = M.rank
    P, L, S = [], [], []
    for h in range(n):
        rel = _balancing_relations(G, h, M)
        try:
            p, l = il.free_quotient(rel, len(lat.below(h)) * r)
        except ValueError as exc:
            raise UnrepresentableError(f"level {lat.label(h)}: {exc}") from None
        P.append(p)
        L.append(l)
        S.append(rel)

    Ir = il.identity(r)

    def descend(out_level, f, in_level, what):
        if np.any(il.matmul(P[out_level], f, S[in_level]) != 0):
            raise ConsistencyError(f"{what} does not descend to the tensor product")
        return il.matmul(P[out_level], f, L[in_level])

    def res(h, k):
        f = np.kron(burnside.restriction_matrix(G, h, k), Ir)
        return descend(k, il.as_matrix(f), h, "restriction")

    def tr(j, h):
        f = np.kron(burnside.transfer_matrix(G, j, h), Ir)
        return descend(h, il.as_matrix(f), j, "transfer")

    functor = MackeyFunctor.build(
        G, [p.shape[0] for p in P], res, tr, name=f"A(x){M.name or 'M'}"
    )
    return TensoredFunctor(functor, tuple(P), tuple(L), M)


def tensor_up(M: AGModule) -> MackeyFunctor:
    return tensor_up_data(M).functor


def unit_map(M: AGModule) -> np.ndarray:
    """``m -> [G/G (x) m]`` from ``M`` to the top level of ``tensor_up(M)``."""
    data = tensor_up_data(M)
    lat = M.group.lattice
    top = lat.top
    r = M.rank
    pos = lat.below(top).index(top)
    embed = il.zeros(len(lat.below(top)) * r, r)
    for i in range(r):
        embed[pos * r + i, i] = 1
    return il.matmul(data.projections[top], embed)


def check_counit(M: AGModule) -> bool:
    """Whether ``m -> [G/G (x) m]`` is a unimodular module isomorphism ``M -> eval_GG(tensor_up(M))``."""
    u = unit_map(M)
    back = eval_GG(tensor_up(M))
    if u.shape[0] != u.shape[1]:
        return False
    return il.is_unimodular(u) and is_module_map(u, M, back)


def counit_morphism(F: MackeyFunctor) -> MackeyMorphism:
    """``tensor_up(eval_GG(F)) -> F`` sending ``H/J (x) m`` to ``tr_J^H res_J^G m``."""
    G = F.group
    lat = G.lattice
    top = lat.top
    data = tensor_up_data(eval_GG(F))
    comps = []
    for h in range(len(lat)):
        blocks = [il.matmul(F.tr[j, h], F.res[top, j]) for j in lat.below(h)]
        E = np.hstack(blocks) if blocks else il.zeros(F.ranks[h], 0)
        comps.append(il.matmul(E, data.lifts[h]))
    return MackeyMorphism(data.functor, F, tuple(comps))


# ---------------------------------------------------------------------------
# products of twisted modules


def tensor_modules(M: AGModule, N: AGModule) -> tuple[AGModule, np.ndarray, np.ndarray]:
    """``M (x)_{A(G)} N`` with the projection and lift of its presentation."""
    if M.group != N.group:
        raise InvalidInputError("modules over different groups")
    m, n = M.rank, N.rank
    In, Im = il.identity(n), il.identity(m)
    cols = [
        il.as_matrix(np.kron(A, In)) - il.as_matrix(np.kron(Im, B)) for A, B in zip(M.action, N.action)
    ]
    S = np.hstack(cols) if cols else il.zeros(m * n, 0)
    try:
        P, L = il.free_quotient(S, m * n)
    except ValueError as exc:
        raise UnrepresentableError(str(exc)) from None
    acts = tuple(il.matmul(P, il.as_matrix(np.kron(A, In)), L) for A in M.action)
    return AGModule(M.group, P.shape[0], acts, name=f"{M.name}(x){N.name}"), P, L


def verify_module_product(a: Twist, b: Twist) -> ValidationReport:
    """The top component of the universal pairing induces ``A(G)^a (x) A(G)^b = A(G)^{ab}``."""
    from .boxhom import dress_pairing_box

    rep = ValidationReport(f"module product {a} * {b}")
    Ma, Mb, Mab = twisted_module(a), twisted_module(b), twisted_module(a * b)
    theta = dress_pairing_box(a, b).theta[a.group.lattice.top]
    In, Im = il.identity(Mb.rank), il.identity(Ma.rank)
    for h, (A, B, C) in enumerate(zip(Ma.action, Mb.action, Mab.action)):
        if not il.equal(il.matmul(theta, il.as_matrix(np.kron(A, In))), il.matmul(C, theta)):
            rep.fail("pairing is linear in the left factor", (a.group.lattice.label(h),))
        if not il.equal(il.matmul(theta, il.as_matrix(np.kron(Im, B))), il.matmul(C, theta)):
            rep.fail("pairing is linear in the right factor", (a.group.lattice.label(h),))
    T, P, L = tensor_modules(Ma, Mb)
    induced = il.matmul(theta, L)
    if induced.shape[0] != induced.shape[1] or not il.is_unimodular(induced):
        rep.fail("induced map from the tensor product is an isomorphism", detail=f"shape {induced.shape}")
    elif not is_module_map(induced, T, Mab):
        rep.fail("induced map is A(G)-linear")
    rep.data["tensor_rank"] = T.rank
    return rep
