"""Mackey functors for a finite abelian group, stored as explicit matrices.

A functor keeps one free abelian level per subgroup (indexed by position in
the canonical lattice), a restriction matrix ``res[h, k]`` for every
``k <= h``, a transfer matrix ``tr[j, h]`` for every ``j <= h`` and, at each
level, one Weyl-action matrix per canonical generator of the ambient group.
Redundant data (non-covering pairs) is stored and cross-checked rather than
derived, so consumers never compose maps themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from . import burnside
from . import intlinalg as il
from .errors import InvalidInputError
from .groups import FiniteAbelianGroup
from .report import ValidationReport

Matrix = np.ndarray


@dataclass(frozen=True, eq=False)
class MackeyFunctor:
    group: FiniteAbelianGroup
    ranks: tuple[int, ...]
    res: dict[tuple[int, int], Matrix]
    tr: dict[tuple[int, int], Matrix]
    weyl: dict[int, tuple[Matrix, ...]]
    labels: tuple[tuple[str, ...], ...] = ()
    name: str = ""

    def __post_init__(self):
        lat = self.group.lattice
        n = len(lat)
        ranks = tuple(int(r) for r in self.ranks)
        if len(ranks) != n or any(r < 0 for r in ranks):
            raise InvalidInputError(f"need {n} nonnegative level ranks, got {self.ranks}")
        object.__setattr__(self, "ranks", ranks)
        for h in range(n):
            for k in lat.below(h):
                R = self.res.get((h, k))
                T = self.tr.get((k, h))
                if R is None or T is None:
                    raise InvalidInputError(f"missing structure map between levels {h} and {k}")
                if R.shape != (ranks[k], ranks[h]) or T.shape != (ranks[h], ranks[k]):
                    raise InvalidInputError(f"structure maps between levels {h} and {k} have wrong shape")
            W = self.weyl.get(h)
            if W is None or len(W) != self.group.rank:
                raise InvalidInputError(f"level {h} needs one Weyl matrix per generator of the group")
            if any(w.shape != (ranks[h], ranks[h]) for w in W):
                raise InvalidInputError(f"Weyl matrices at level {h} have wrong shape")
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(tuple(f"b{i}" for i in range(r)) for r in ranks)
            )
        elif [len(x) for x in self.labels] != list(ranks):
            raise InvalidInputError("basis labels do not match the level ranks")

    @classmethod
    def build(
        cls,
        group: FiniteAbelianGroup,
        ranks,
        res: Callable[[int, int], Matrix],
        tr: Callable[[int, int], Matrix],
        weyl: Callable[[int, int], Matrix] | None = None,
        labels=(),
        name: str = "",
    ) -> "MackeyFunctor":
        """Assemble a functor from callables ``res(h, k)``, ``tr(j, h)`` and ``weyl(h, i)``.

        Missing Weyl data means every generator acts by the identity.
        """
        lat = group.lattice
        ranks = tuple(int(r) for r in ranks)
        R, T, W = {}, {}, {}
        for h in range(len(lat)):
            for k in lat.below(h):
                if k == h:
                    R[h, h] = T[h, h] = il.identity(ranks[h])
                else:
                    R[h, k] = il.as_matrix(res(h, k), ranks[k], ranks[h])
                    T[k, h] = il.as_matrix(tr(k, h), ranks[h], ranks[k])
            if weyl is None:
                W[h] = tuple(il.identity(ranks[h]) for _ in range(group.rank))
            else:
                W[h] = tuple(il.as_matrix(weyl(h, i), ranks[h], ranks[h]) for i in range(group.rank))
        return cls(group, ranks, R, T, W, tuple(tuple(x) for x in labels), name)

    # -- accessors ---------------------------------------------------------

    @property
    def lattice(self):
        return self.group.lattice

    def level(self, H) -> int:
        return self.lattice.index_of(H)

    def rank(self, H) -> int:
        return self.ranks[self.level(H)]

    def restriction(self, H, K) -> Matrix:
        return self.res[self.level(H), self.level(K)]

    def transfer(self, J, H) -> Matrix:
        return self.tr[self.level(J), self.level(H)]

    @cached_property
    def weyl_trivial(self) -> tuple[bool, ...]:
        return tuple(
            all(il.equal(w, il.identity(self.ranks[h])) for w in self.weyl[h]) for h in range(len(self.ranks))
        )

    def conjugation(self, h: int, g: int) -> Matrix:
        """Action of the group element ``g`` (element number) on level ``h``."""
        coords = self.group.element(g)
        out = il.identity(self.ranks[h])
        if self.weyl_trivial[h]:
            return out
        for W, c in zip(self.weyl[h], coords):
            for _ in range(c):
                out = il.matmul(W, out)
        return out

    def is_zero(self) -> bool:
        return not any(self.ranks)

    def same_as(self, other: "MackeyFunctor") -> bool:
        """Exact equality of every level rank and structure matrix."""
        if self.group != other.group or self.ranks != other.ranks:
            return False
        return (
            all(il.equal(m, other.res[key]) for key, m in self.res.items())
            and all(il.equal(m, other.tr[key]) for key, m in self.tr.items())
            and all(
                il.equal(a, b) for h, ws in self.weyl.items() for a, b in zip(ws, other.weyl[h])
            )
        )

    def replace(self, *, res=None, tr=None, weyl=None, name=None) -> "MackeyFunctor":
        """Copy with some structure maps overridden (``res``/``tr`` are partial dicts)."""
        R = dict(self.res)
        T = dict(self.tr)
        W = dict(self.weyl)
        R.update({k: il.as_matrix(v) for k, v in (res or {}).items()})
        T.update({k: il.as_matrix(v) for k, v in (tr or {}).items()})
        W.update(weyl or {})
        return MackeyFunctor(self.group, self.ranks, R, T, W, self.labels, self.name if name is None else name)

    def __repr__(self) -> str:
        return f"MackeyFunctor({self.name or '?'} over {self.group.name()}, ranks={list(self.ranks)})"


# ---------------------------------------------------------------------------
# constructors


def burnside_labels(G: FiniteAbelianGroup) -> tuple[tuple[str, ...], ...]:
    lat = G.lattice
    return tuple(
        tuple(f"{lat.label(h)}/{lat.label(j)}" for j in lat.below(h)) for h in range(len(lat))
    )


def burnside_mackey(G: FiniteAbelianGroup) -> MackeyFunctor:
    lat = G.lattice
    return MackeyFunctor.build(
        G,
        [len(lat.below(h)) for h in range(len(lat))],
        lambda h, k: burnside.restriction_matrix(G, h, k),
        lambda j, h: burnside.transfer_matrix(G, j, h),
        labels=burnside_labels(G),
        name="A",
    )


def zero_functor(G: FiniteAbelianGroup) -> MackeyFunctor:
    n = len(G.lattice)
    return MackeyFunctor.build(G, [0] * n, lambda h, k: il.zeros(0, 0), lambda j, h: il.zeros(0, 0), name="0")


def constant_functor(G: FiniteAbelianGroup) -> MackeyFunctor:
    """Z at every level, restrictions the identity, transfers multiplication by the index."""
    lat = G.lattice
    return MackeyFunctor.build(
        G,
        [1] * len(lat),
        lambda h, k: [[1]],
        lambda j, h: [[lat.index(j, h)]],
        labels=[("1",)] * len(lat),
        name="Z",
    )


def dual_constant_functor(G: FiniteAbelianGroup) -> MackeyFunctor:
    lat = G.lattice
    return MackeyFunctor.build(
        G,
        [1] * len(lat),
        lambda h, k: [[lat.index(k, h)]],
        lambda j, h: [[1]],
        labels=[("1",)] * len(lat),
        name="Z*",
    )


def direct_sum(M: MackeyFunctor, N: MackeyFunctor) -> MackeyFunctor:
    if M.group != N.group:
        raise InvalidInputError("direct sum of functors over different groups")
    G = M.group
    labels = [
        tuple(f"{x}[0]" for x in M.labels[h]) + tuple(f"{x}[1]" for x in N.labels[h])
        for h in range(len(M.ranks))
    ]
    return MackeyFunctor.build(
        G,
        [a + b for a, b in zip(M.ranks, N.ranks)],
        lambda h, k: il.block_diag(M.res[h, k], N.res[h, k]),
        lambda j, h: il.block_diag(M.tr[j, h], N.tr[j, h]),
        lambda h, i: il.block_diag(M.weyl[h][i], N.weyl[h][i]),
        labels=labels,
        name=f"({M.name} + {N.name})",
    )


# ---------------------------------------------------------------------------
# axioms


def check_axioms(M: MackeyFunctor) -> ValidationReport:
    """Check every Mackey functor axiom on every tuple of subgroups."""
    G = M.group
    lat = G.lattice
    n = len(lat)
    lab = lat.label
    rep = ValidationReport(f"axioms of {M.name or 'functor'} over {G.name()}")
    for h in range(n):
        I = il.identity(M.ranks[h])
        if not il.equal(M.res[h, h], I):
            rep.fail("restriction to itself is the identity", (lab(h),))
        if not il.equal(M.tr[h, h], I):
            rep.fail("transfer from itself is the identity", (lab(h),))

    for h in range(n):
        below = lat.below(h)
        for k in below:
            for j in lat.below(k):
                if j == k or k == h:
                    continue
                if not il.equal(il.matmul(M.res[k, j], M.res[h, k]), M.res[h, j]):
                    rep.fail("restrictions compose", (lab(h), lab(k), lab(j)))
                if not il.equal(il.matmul(M.tr[k, h], M.tr[j, k]), M.tr[j, h]):
                    rep.fail("transfers compose", (lab(j), lab(k), lab(h)))

    _check_weyl(M, rep)

    for h in range(n):
        below = lat.below(h)
        for j in below:
            for l in below:
                m = int(lat.meet_table[j, l])
                jl = int(lat.join_table[j, l])
                lhs = il.matmul(M.res[h, l], M.tr[j, h])
                down = il.matmul(M.tr[m, l], M.res[j, m])
                if M.weyl_trivial[m]:
                    rhs = down * lat.index(jl, h)
                else:
                    rhs = il.zeros(*lhs.shape)
                    for g in lat.cosets(h, jl):
                        rhs = rhs + il.matmul(M.tr[m, l], M.conjugation(m, g), M.res[j, m])
                if not il.equal(lhs, rhs):
                    rep.fail("double coset formula", (lab(h), lab(j), lab(l)))
    return rep


def _check_weyl(M: MackeyFunctor, rep: ValidationReport) -> None:
    G = M.group
    lat = G.lattice
    lab = lat.label
    for h in range(len(lat)):
        if M.weyl_trivial[h]:
            continue
        Ws = M.weyl[h]
        I = il.identity(M.ranks[h])
        for W, order in zip(Ws, G.invariant_factors):
            P = I
            for _ in range(order):
                P = il.matmul(W, P)
            if not il.equal(P, I):
                rep.fail("Weyl generator has the right order", (lab(h),))
        for a in range(len(Ws)):
            for b in range(a + 1, len(Ws)):
                if not il.equal(il.matmul(Ws[a], Ws[b]), il.matmul(Ws[b], Ws[a])):
                    rep.fail("Weyl generators commute", (lab(h),))
        for g in lat.generators(h):
            if not il.equal(M.conjugation(h, g), I):
                rep.fail("subgroup acts trivially on its own level", (lab(h),), f"element {G.element(g)}")
    for h in range(len(lat)):
        for k in lat.below(h):
            if k == h or (M.weyl_trivial[h] and M.weyl_trivial[k]):
                continue
            for i in range(G.rank):
                Wh, Wk = M.weyl[h][i], M.weyl[k][i]
                if not il.equal(il.matmul(M.res[h, k], Wh), il.matmul(Wk, M.res[h, k])):
                    rep.fail("conjugation commutes with restriction", (lab(h), lab(k)))
                if not il.equal(il.matmul(M.tr[k, h], Wk), il.matmul(Wh, M.tr[k, h])):
                    rep.fail("conjugation commutes with transfer", (lab(k), lab(h)))


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True, eq=False)
class MackeyMorphism:
    source: MackeyFunctor
    target: MackeyFunctor
    components: tuple[Matrix, ...] = field(default=())

    def __post_init__(self):
        if self.source.group != self.target.group:
            raise InvalidInputError("morphism between functors over different groups")
        comps = tuple(
            il.as_matrix(c, self.target.ranks[h], self.source.ranks[h]) for h, c in enumerate(self.components)
        )
        if len(comps) != len(self.source.ranks):
            raise InvalidInputError("a morphism needs one component per subgroup")
        object.__setattr__(self, "components", comps)

    def __getitem__(self, H) -> Matrix:
        return self.components[self.source.level(H)]

    def same_as(self, other: "MackeyMorphism") -> bool:
        return all(il.equal(a, b) for a, b in zip(self.components, other.components))

    def __mul__(self, k: int) -> "MackeyMorphism":
        return MackeyMorphism(self.source, self.target, tuple(c * int(k) for c in self.components))

    __rmul__ = __mul__


def identity_morphism(M: MackeyFunctor) -> MackeyMorphism:
    return MackeyMorphism(M, M, tuple(il.identity(r) for r in M.ranks))


def compose(psi: MackeyMorphism, phi: MackeyMorphism) -> MackeyMorphism:
    """``psi`` after ``phi``."""
    if phi.target.ranks != psi.source.ranks or phi.source.group != psi.source.group:
        raise InvalidInputError("morphisms are not composable")
    return MackeyMorphism(
        phi.source, psi.target, tuple(il.matmul(b, a) for a, b in zip(phi.components, psi.components))
    )


def inverse(phi: MackeyMorphism) -> MackeyMorphism | None:
    comps = []
    for c in phi.components:
        if c.shape[0] != c.shape[1]:
            return None
        inv = il.integer_inverse(c)
        if inv is None:
            return None
        comps.append(inv)
    return MackeyMorphism(phi.target, phi.source, tuple(comps))


def morphism_violations(phi: MackeyMorphism) -> ValidationReport:
    S, T = phi.source, phi.target
    lat = S.lattice
    lab = lat.label
    rep = ValidationReport("morphism")
    c = phi.components
    for h in range(len(lat)):
        for k in lat.below(h):
            if k == h:
                continue
            if not il.equal(il.matmul(c[k], S.res[h, k]), il.matmul(T.res[h, k], c[h])):
                rep.fail("commutes with restriction", (lab(h), lab(k)))
            if not il.equal(il.matmul(c[h], S.tr[k, h]), il.matmul(T.tr[k, h], c[k])):
                rep.fail("commutes with transfer", (lab(k), lab(h)))
        if S.weyl_trivial[h] and T.weyl_trivial[h]:
            continue
        for i in range(S.group.rank):
            if not il.equal(il.matmul(c[h], S.weyl[h][i]), il.matmul(T.weyl[h][i], c[h])):
                rep.fail("commutes with conjugation", (lab(h),), f"generator {i}")
    return rep


def check_morphism(phi: MackeyMorphism) -> bool:
    return morphism_violations(phi).ok


def is_isomorphism(phi: MackeyMorphism) -> bool:
    if any(c.shape[0] != c.shape[1] for c in phi.components):
        return False
    return check_morphism(phi) and all(il.is_unimodular(c) for c in phi.components)


# ---------------------------------------------------------------------------
# rendering


def _format_matrix(m: Matrix) -> str:
    if m.size == 0:
        return f"0 ({m.shape[0]}x{m.shape[1]})"
    return "; ".join(" ".join(str(int(x)) for x in row) for row in m)


def render_lewis(M: MackeyFunctor, transfers: bool = True) -> str:
    """Text Lewis diagram: levels from the top down, then maps along covering pairs.

    Matrices are written row by row, rows separated by ``;``.
    """
    lat = M.lattice
    lab = lat.label
    n = len(lat)
    lines = [f"Lewis diagram of {M.name or 'functor'} over {M.group.name()}"]
    for h in reversed(range(n)):
        basis = ", ".join(M.labels[h])
        lines.append(f"  level {lab(h)}: Z^{M.ranks[h]} {{{basis}}}")
    covers = [
        (h, k)
        for h in reversed(range(n))
        for k in lat.below(h)
        if k != h and not any(lat.le[k, x] and lat.le[x, h] and x not in (h, k) for x in range(n))
    ]
    for h, k in covers:
        lines.append(f"  res {lab(h)} -> {lab(k)}: [{_format_matrix(M.res[h, k])}]")
        if transfers:
            lines.append(f"  tr  {lab(k)} -> {lab(h)}: [{_format_matrix(M.tr[k, h])}]")
    for h in reversed(range(n)):
        if not M.weyl_trivial[h]:
            for i, W in enumerate(M.weyl[h]):
                lines.append(f"  weyl {lab(h)} generator {i}: [{_format_matrix(W)}]")
    return "\n".join(lines)
