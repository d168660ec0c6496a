"""Change of groups: along a subgroup inclusion and along a quotient map.

Functors over a subgroup ``H`` of ``G`` live over the canonical group
isomorphic to ``H`` returned by ``subgroup_as_group``; the embedding tells
each construction how that group sits inside ``G``.  Functors over a
quotient live over the canonical group returned by ``quotient``.
"""

from __future__ import annotations

from math import prod

import numpy as np

from . import intlinalg as il
from .errors import ConsistencyError, InvalidInputError, UnrepresentableError
from .groups import FiniteAbelianGroup, Subgroup, quotient, section, subgroup_as_group
from .mackey import MackeyFunctor, MackeyMorphism
from .twists import Twist, twisted_burnside


def _as_subgroup(G: FiniteAbelianGroup, H) -> Subgroup:
    if isinstance(H, Subgroup):
        if H.parent != G:
            raise InvalidInputError("subgroup of a different group")
        return H
    return G.lattice.subgroups[G.lattice.index_of(H)]


def _subgroup_levels(H: Subgroup):
    """Canonical group ``Hc``, its embedding, and the map from ``Hc``-lattice indices to ``G``-lattice indices."""
    G = H.parent
    Hc, emb = subgroup_as_group(H)
    to_g = [G.lattice.index_of_mask(emb.image_mask(m)) for m in Hc.lattice.masks]
    return Hc, emb, to_g


# ---------------------------------------------------------------------------
# subgroup inclusion


def restrict_down(M: MackeyFunctor, H) -> MackeyFunctor:
    """Forget ``M`` to the subgroup ``H``; the result lives over ``subgroup_as_group(H)``."""
    G = M.group
    H = _as_subgroup(G, H)
    Hc, emb, to_g = _subgroup_levels(H)
    gens = Hc.generators()
    return MackeyFunctor.build(
        Hc,
        [M.ranks[to_g[k]] for k in range(len(to_g))],
        lambda h, k: M.res[to_g[h], to_g[k]],
        lambda j, h: M.tr[to_g[j], to_g[h]],
        lambda h, i: M.conjugation(to_g[h], emb(gens[i])),
        labels=[M.labels[to_g[k]] for k in range(len(to_g))],
        name=f"res({M.name})",
    )


def restricted_twist(a: Twist, H) -> Twist:
    """The twist over ``subgroup_as_group(H)`` whose functor is ``restrict_down(A^a, H)``."""
    G = a.group
    lat = G.lattice
    H = _as_subgroup(G, H)
    Hc, _, to_g = _subgroup_levels(H)
    h = lat.index_of(H)
    vals = []
    for x in to_g:
        vals.append(prod(a.values[k] for k in range(len(lat)) if lat.meet_table[k, h] == x))
    vals[-1] = 1
    return Twist(Hc, tuple(vals))


def restrict_twisted_comparison(a: Twist, H) -> MackeyMorphism:
    """The basis-matching map ``A^{a'} -> restrict_down(A^a, H)`` for ``a' = restricted_twist(a, H)``.

    Both sides have Burnside levels; they differ only in the order of basis
    orbits, since the canonical order of the subgroup's own lattice need not
    agree with the order of the corresponding subgroups of ``G``.
    """
    G = a.group
    lat = G.lattice
    H = _as_subgroup(G, H)
    Hc, _, to_g = _subgroup_levels(H)
    source = twisted_burnside(restricted_twist(a, H))
    target = restrict_down(twisted_burnside(a), H)
    comps = []
    for k in range(len(to_g)):
        src = Hc.lattice.below(k)
        tgt = lat.below(to_g[k])
        C = il.zeros(len(tgt), len(src))
        for c, x in enumerate(src):
            C[tgt.index(to_g[x]), c] = 1
        comps.append(C)
    return MackeyMorphism(source, target, tuple(comps))


def induct_up(M: MackeyFunctor, G: FiniteAbelianGroup, H) -> MackeyFunctor:
    """Induce ``M`` (over ``subgroup_as_group(H)``) up to ``G``.

    The level at ``J`` is ``M(H n J)`` once for every coset of ``HJ`` in
    ``G``, with copies ordered by the smallest coset representative.
    """
    H = _as_subgroup(G, H)
    Hc, emb, to_g = _subgroup_levels(H)
    if M.group != Hc:
        raise InvalidInputError(f"functor must live over {Hc.name()}, the canonical form of the subgroup")
    lat = G.lattice
    hidx = lat.index_of(H)
    from_g = {g: k for k, g in enumerate(to_g)}
    to_hc = {y: x for x, y in enumerate(emb.table)}
    h_elems = H.elements
    n = len(lat)

    reps, cell, splitting = [], [], []
    for j in range(n):
        hj = int(lat.join_table[hidx, j])
        r = lat.cosets(lat.top, hj)
        reps.append(r)
        cell.append(from_g[int(lat.meet_table[hidx, j])])
        dec = {}
        for x in h_elems:
            for y in lat.subgroups[j].elements:
                dec.setdefault(G.add(x, y), x)
        splitting.append(dec)

    def locate(j: int, x: int) -> tuple[int, int]:
        """Block index of the coset ``x + HJ`` and the H-part ``h0`` with ``x = h0 + t + (J)``."""
        for b, t in enumerate(reps[j]):
            diff = G.add(x, G.neg(t))
            if diff in splitting[j]:
                return b, to_hc[splitting[j][diff]]
        raise ConsistencyError("coset representative not found")

    def block_size(j: int) -> int:
        return M.ranks[cell[j]]

    def res(j: int, l: int) -> np.ndarray:
        cj, cl = cell[j], cell[l]
        out = il.zeros(len(reps[l]) * block_size(l), len(reps[j]) * block_size(j))
        bl, bj = block_size(l), block_size(j)
        for s_pos, s in enumerate(reps[l]):
            t_pos, h0 = locate(j, s)
            blk = il.matmul(M.res[cj, cl], M.conjugation(cj, Hc.neg(h0)))
            out[s_pos * bl : (s_pos + 1) * bl, t_pos * bj : (t_pos + 1) * bj] = blk
        return out

    def tr(l: int, j: int) -> np.ndarray:
        cj, cl = cell[j], cell[l]
        out = il.zeros(len(reps[j]) * block_size(j), len(reps[l]) * block_size(l))
        bl, bj = block_size(l), block_size(j)
        for s_pos, s in enumerate(reps[l]):
            t_pos, h0 = locate(j, s)
            blk = il.matmul(M.conjugation(cj, h0), M.tr[cl, cj])
            out[t_pos * bj : (t_pos + 1) * bj, s_pos * bl : (s_pos + 1) * bl] = blk
        return out

    gens = G.generators()

    def weyl(j: int, i: int) -> np.ndarray:
        cj, b = cell[j], block_size(j)
        out = il.zeros(len(reps[j]) * b, len(reps[j]) * b)
        for t_pos, t in enumerate(reps[j]):
            t2, h1 = locate(j, G.add(gens[i], t))
            out[t2 * b : (t2 + 1) * b, t_pos * b : (t_pos + 1) * b] = M.conjugation(cj, h1)
        return out

    labels = []
    for j in range(n):
        labels.append(
            tuple(
                f"{''.join(map(str, G.element(t)))}:{x}" if len(reps[j]) > 1 else x
                for t in reps[j]
                for x in M.labels[cell[j]]
            )
        )
    return MackeyFunctor.build(
        G,
        [len(reps[j]) * block_size(j) for j in range(n)],
        lambda h, k: res(h, k),
        lambda j, h: tr(j, h),
        weyl,
        labels=labels,
        name=f"ind({M.name})",
    )


# ---------------------------------------------------------------------------
# quotients


def _quotient_data(G: FiniteAbelianGroup, N):
    N = _as_subgroup(G, N)
    Q, proj, corr = quotient(G, N)
    back = {q: h for h, q in corr.items()}
    return N, Q, proj, corr, back


def qres(M: MackeyFunctor, N) -> MackeyFunctor:
    """Keep the levels at subgroups containing ``N``, viewed as a functor over ``G/N``."""
    G = M.group
    N, Q, proj, corr, back = _quotient_data(G, N)
    lift = section(proj)
    qgens = Q.generators()
    return MackeyFunctor.build(
        Q,
        [M.ranks[back[q]] for q in range(len(Q.lattice))],
        lambda h, k: M.res[back[h], back[k]],
        lambda j, h: M.tr[back[j], back[h]],
        lambda h, i: M.conjugation(back[h], lift[qgens[i]]),
        labels=[M.labels[back[q]] for q in range(len(Q.lattice))],
        name=f"qres({M.name})",
    )


def inflate(M: MackeyFunctor, G: FiniteAbelianGroup, N) -> MackeyFunctor:
    """Extend ``M`` (over ``G/N``) to ``G`` by zero below ``N``."""
    N, Q, proj, corr, back = _quotient_data(G, N)
    if M.group != Q:
        raise InvalidInputError(f"functor must live over {Q.name()}, the canonical form of the quotient")
    lat = G.lattice
    n = len(lat)
    ranks = [M.ranks[corr[h]] if h in corr else 0 for h in range(n)]
    gens = G.generators()

    def res(h, k):
        if h in corr and k in corr:
            return M.res[corr[h], corr[k]]
        return il.zeros(ranks[k], ranks[h])

    def tr(j, h):
        if h in corr and j in corr:
            return M.tr[corr[j], corr[h]]
        return il.zeros(ranks[h], ranks[j])

    def weyl(h, i):
        if h in corr:
            return M.conjugation(corr[h], proj(gens[i]))
        return il.zeros(0, 0)

    labels = [M.labels[corr[h]] if h in corr else () for h in range(n)]
    return MackeyFunctor.build(G, ranks, res, tr, weyl, labels=labels, name=f"inf({M.name})")


def geometric_fixed_points(M: MackeyFunctor, N) -> MackeyFunctor:
    """Quotient each level above ``N`` by the transfers from subgroups not containing ``N``.

    Raises ``UnrepresentableError`` when some quotient has torsion and
    ``ConsistencyError`` when a structure map does not descend.
    """
    G = M.group
    lat = G.lattice
    N, Q, proj, corr, back = _quotient_data(G, N)
    nidx = lat.index_of(N)
    proj_mats, lift_mats, spans = {}, {}, {}
    for h in corr:
        cols = [M.tr[j, h] for j in lat.below(h) if not lat.le[nidx, j]]
        S = np.hstack(cols) if cols else il.zeros(M.ranks[h], 0)
        try:
            P, L = il.free_quotient(S, M.ranks[h])
        except ValueError as exc:
            raise UnrepresentableError(f"level {lat.label(h)}: {exc}") from None
        proj_mats[h], lift_mats[h], spans[h] = P, L, S

    def descend(P_out, f, h_in, where):
        if np.any(il.matmul(P_out, f, spans[h_in]) != 0):
            raise ConsistencyError(f"{where} does not descend to the quotient")
        return il.matmul(P_out, f, lift_mats[h_in])

    qgens = Q.generators()
    lift = section(proj)

    def res(q, p):
        h, k = back[q], back[p]
        return descend(proj_mats[k], M.res[h, k], h, f"restriction {lat.label(h)} -> {lat.label(k)}")

    def tr(p, q):
        k, h = back[p], back[q]
        return descend(proj_mats[h], M.tr[k, h], k, f"transfer {lat.label(k)} -> {lat.label(h)}")

    def weyl(q, i):
        h = back[q]
        return descend(proj_mats[h], M.conjugation(h, lift[qgens[i]]), h, f"conjugation at {lat.label(h)}")

    labels = []
    for q in range(len(Q.lattice)):
        h = back[q]
        L = lift_mats[h]
        names = []
        for c in range(L.shape[1]):
            col = [int(x) for x in L[:, c]]
            if sorted(col) == [0] * (len(col) - 1) + [1]:
                names.append(M.labels[h][col.index(1)])
            else:
                names.append(f"q{c}")
        labels.append(tuple(names))
    return MackeyFunctor.build(
        Q,
        [proj_mats[back[q]].shape[0] for q in range(len(Q.lattice))],
        res,
        tr,
        weyl,
        labels=labels,
        name=f"phi({M.name})",
    )


def truncated_twist(a: Twist, N) -> Twist:
    """The twist over ``G/N`` with value ``a_H`` at ``H/N``."""
    G = a.group
    N, Q, proj, corr, back = _quotient_data(G, N)
    return Twist(Q, tuple(a.values[back[q]] for q in range(len(Q.lattice))))


def phi_twisted_comparison(a: Twist, N) -> MackeyMorphism:
    """The basis-matching map ``A^alpha -> phi^N(A^a)`` with ``alpha`` the truncated twist.

    ``L/N`` at level ``H/N`` goes to the class of ``H/L``.
    """
    G = a.group
    lat = G.lattice
    N, Q, proj, corr, back = _quotient_data(G, N)
    A = twisted_burnside(a)
    target = geometric_fixed_points(A, N)
    source = twisted_burnside(truncated_twist(a, N))
    qlat = Q.lattice
    nidx = lat.index_of(N)
    # the projections are recomputed so the comparison does not rely on labels
    comps = []
    for q in range(len(qlat)):
        h = back[q]
        cols = [A.tr[j, h] for j in lat.below(h) if not lat.le[nidx, j]]
        S = np.hstack(cols) if cols else il.zeros(A.ranks[h], 0)
        P, _ = il.free_quotient(S, A.ranks[h])
        below_h = lat.below(h)
        C = il.zeros(P.shape[0], len(qlat.below(q)))
        for c, x in enumerate(qlat.below(q)):
            C[:, c] = P[:, below_h.index(back[x])]
        comps.append(C)
    return MackeyMorphism(source, target, tuple(comps))


def qind_twisted(alpha: Twist, G: FiniteAbelianGroup, N) -> tuple[Twist, MackeyFunctor]:
    """Extend a twist over ``G/N`` by 1 below ``N``; return it with its twisted functor."""
    N, Q, proj, corr, back = _quotient_data(G, N)
    if alpha.group != Q:
        raise InvalidInputError(f"twist must live over {Q.name()}, the canonical form of the quotient")
    vals = tuple(alpha.values[corr[h]] if h in corr else 1 for h in range(len(G.lattice)))
    ahat = Twist(G, vals)
    return ahat, twisted_burnside(ahat)
