"""Picard groups of Mackey functors for finite abelian groups, via unit twists.

Classes are indexed by normalized unit twists: one residue per subgroup,
modulo the index of the subgroup and a sign.  Positive claims (two twists
give isomorphic functors) come with explicit verified isomorphisms.
Negative claims come from a bounded search and are labelled as such.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from . import intlinalg as il
from .boxhom import gamma_space
from .changegroups import phi_twisted_comparison, qind_twisted, truncated_twist
from .errors import InvalidInputError, ResourceLimitError
from .groups import FiniteAbelianGroup, quotient
from .mackey import MackeyMorphism, is_isomorphism
from .report import ValidationReport
from .twists import Twist, equivalent, normalize, require_unit, twisted_burnside, witness_iso

SEARCH_LIMIT = 2_000_000
TABLE_LIMIT = 1024


def _units(n: int) -> list[int]:
    if n <= 2:
        return [1]
    return [x for x in range(1, n) if gcd(x, n) == 1]


def _classes(n: int) -> list[int]:
    """Residues ``min(x, n - x)`` over the units ``x`` modulo ``n``."""
    if n <= 2:
        return [1]
    return sorted({min(x, n - x) for x in _units(n)})


def _indices(G: FiniteAbelianGroup) -> tuple[int, ...]:
    return G.lattice.top_indices


def unit_twists(G: FiniteAbelianGroup) -> list[Twist]:
    """Every twist whose values are unit residues in ``[1, [G:H] - 1]`` (1 when the index is at most 2)."""
    return [Twist(G, vals) for vals in itertools.product(*(_units(n) for n in _indices(G)))]


@dataclass(frozen=True)
class PicardClass:
    representative: Twist

    def __post_init__(self):
        if normalize(self.representative) != self.representative:
            raise InvalidInputError(f"{self.representative} is not a normalized unit twist")


class PicardGroup:
    """Classes of unit twists under the componentwise product.

    Products are computed on demand; the dense ``table`` is only built for
    groups with at most ``TABLE_LIMIT`` classes.
    """

    def __init__(self, group: FiniteAbelianGroup, classes: tuple[PicardClass, ...]):
        self.group = group
        self.classes = classes
        self._pos = {c.representative.values: i for i, c in enumerate(classes)}
        self._table = None

    @property
    def order(self) -> int:
        return len(self.classes)

    def index_of(self, a: Twist) -> int:
        try:
            return self._pos[normalize(a).values]
        except KeyError:
            raise InvalidInputError(f"{a} is not a class of this group") from None

    def multiply(self, i: int, j: int) -> int:
        if self._table is not None:
            return self._table[i][j]
        return self.index_of(self.classes[i].representative * self.classes[j].representative)

    @property
    def table(self) -> tuple[tuple[int, ...], ...]:
        if self._table is None:
            if self.order > TABLE_LIMIT:
                raise ResourceLimitError(f"a {self.order} x {self.order} table exceeds the limit of {TABLE_LIMIT}")
            n = self.order
            self._table = tuple(tuple(self.multiply(i, j) for j in range(n)) for i in range(n))
        return self._table

    def inverse(self, i: int) -> int:
        """Class of the componentwise modular inverse."""
        lat = self.group.lattice
        rep = self.classes[i].representative
        vals = [pow(v, -1, n) if n > 1 else 1 for v, n in zip(rep.values, _indices(self.group))]
        vals[lat.top] = 1
        return self.index_of(Twist(self.group, tuple(vals)))

    @property
    def identity(self) -> int:
        return self.index_of(Twist(self.group, (1,) * len(self.group.lattice)))


def picard_group(G: FiniteAbelianGroup) -> PicardGroup:
    # products of normalized residues are already normal, so skip re-checking each one
    reps = itertools.product(*(_classes(n) for n in _indices(G)))
    classes = []
    for vals in reps:
        c = object.__new__(PicardClass)
        object.__setattr__(c, "representative", Twist(G, vals))
        classes.append(c)
    return PicardGroup(G, tuple(classes))


def picard_order(G: FiniteAbelianGroup) -> int:
    """Product over subgroups of ``|(Z/[G:H])^x| / 2``, with 1 for indices at most 2."""
    return prod(len(_units(n)) // 2 if n > 2 else 1 for n in _indices(G))


# ---------------------------------------------------------------------------
# isomorphism search


@dataclass
class SearchOutcome:
    found: bool
    bound: int
    morphism: MackeyMorphism | None
    gamma_rank: int
    patterns_tried: int

    @property
    def label(self) -> str:
        if self.found:
            return "isomorphism found"
        return f"no isomorphism found within bound {self.bound} (bound-limited evidence, not a proof)"


def _diagonal_rows(G: FiniteAbelianGroup) -> list[int]:
    """Positions of the generators ``H/H`` inside the concatenated gamma vector for ``A^b``."""
    lat = G.lattice
    out, off = [], 0
    for h in range(len(lat)):
        below = lat.below(h)
        out.append(off + below.index(h))
        off += len(below)
    return out


def refute_iso_bounded(a: Twist, b: Twist, bound: int) -> SearchOutcome:
    """Look for an isomorphism ``A^a -> A^b`` with basis coordinates in ``[-bound, bound]``.

    Every morphism ``A^a -> A^b`` is triangular on each level in the
    canonical subgroup order, with diagonal entries the coefficients of
    ``J/J`` in the generator images ``gamma_J``.  So a morphism is invertible
    exactly when all of those coefficients are units.  The search solves
    for those sign patterns one at a time instead of walking the whole box,
    and every candidate is re-verified as an isomorphism.
    """
    if a.group != b.group:
        raise InvalidInputError("twists over different groups")
    if bound < 1:
        raise InvalidInputError("search bound must be positive")
    require_unit(a)
    require_unit(b)
    G = a.group
    space = gamma_space(a, twisted_burnside(b))
    basis = space.gamma_basis.reduced()
    rows = _diagonal_rows(G)
    D = basis.basis[:, rows].T  # diagonal entries as a function of coordinates
    n = D.shape[0]
    tried = 0
    for signs in itertools.product((1, -1), repeat=n):
        tried += 1
        sol = il.solve(D, list(signs))
        if sol is None:
            continue
        x0, ker = sol
        for coords in _box_points(x0, ker, bound):
            phi = space.morphism(basis.combination(coords))
            if is_isomorphism(phi):
                return SearchOutcome(True, bound, phi, space.rank, tried)
    return SearchOutcome(False, bound, None, space.rank, tried)


def _box_points(x0: np.ndarray, ker: il.Lattice, bound: int):
    """Points ``x0 + K t`` with every coordinate in ``[-bound, bound]``."""
    if ker.rank == 0:
        if all(abs(int(v)) <= bound for v in x0):
            yield x0
        return
    # free directions remain: enumerate kernel coefficients inside a box
    count = (2 * bound + 1) ** ker.rank
    if count > SEARCH_LIMIT:
        raise ResourceLimitError(f"search over {count} kernel points exceeds the limit")
    for t in itertools.product(range(-bound, bound + 1), repeat=ker.rank):
        x = x0 + ker.combination(t)
        if all(abs(int(v)) <= bound for v in x):
            yield x


def brute_force_iso_search(a: Twist, b: Twist, bound: int) -> MackeyMorphism | None:
    """Walk every coordinate vector in the box; the slow oracle for ``refute_iso_bounded``."""
    space = gamma_space(a, twisted_burnside(b))
    basis = space.gamma_basis.reduced()
    count = (2 * bound + 1) ** basis.rank
    if count > SEARCH_LIMIT:
        raise ResourceLimitError(f"box of {count} points exceeds the limit")
    for coords in itertools.product(range(-bound, bound + 1), repeat=basis.rank):
        phi = space.morphism(basis.combination(coords))
        if is_isomorphism(phi):
            return phi
    return None


# ---------------------------------------------------------------------------
# verification drivers


def verify_classification(G: FiniteAbelianGroup, bound: int | None = None) -> ValidationReport:
    """Check every pair of class representatives, and every unit twist against its class.

    Equivalent pairs need a verified isomorphism; inequivalent pairs must
    survive the bounded search.
    """
    bound = G.order**2 if bound is None else bound
    pic = picard_group(G)
    reps = [c.representative for c in pic.classes]
    rep = ValidationReport(f"classification over {G.name()} (search bound {bound})")
    witnesses = refuted = 0
    for a in reps:
        for b in reps:
            if equivalent(a, b):
                phi = witness_iso(a, b)
                if phi is None or not is_isomorphism(phi):
                    rep.fail("witness isomorphism verifies", (str(a), str(b)))
                else:
                    witnesses += 1
            else:
                out = refute_iso_bounded(a, b, bound)
                if out.found:
                    rep.fail("inequivalent twists have no isomorphism", (str(a), str(b)), out.label)
                else:
                    refuted += 1
    lifted = 0
    for t in unit_twists(G):
        phi = witness_iso(t, normalize(t))
        if phi is None or not is_isomorphism(phi):
            rep.fail("unit twist is isomorphic to its normal form", (str(t),))
        else:
            lifted += 1
    rep.data.update(
        classes=len(reps), witnesses=witnesses, refuted=refuted, unit_twists_witnessed=lifted, bound=bound
    )
    if refuted:
        rep.notes.append(
            f"{refuted} inequivalent pair(s) refuted only up to coordinate bound {bound} (bound-limited, not a proof)"
        )
    return rep


def verify_splitting(G: FiniteAbelianGroup, N) -> ValidationReport:
    """Twist-level checks of the split sequence attached to a proper nontrivial ``N``."""
    lat = G.lattice
    n = lat.index_of(N)
    if n in (lat.bottom, lat.top):
        raise InvalidInputError("N must be proper and nontrivial")
    Q, _, corr = quotient(G, lat.subgroups[n])
    rep = ValidationReport(f"splitting over {G.name()} at {lat.label(n)}")
    pic_g, pic_q = picard_group(G), picard_group(Q)
    images = []
    for c in pic_q.classes:
        alpha = c.representative
        ahat, _ = qind_twisted(alpha, G, n)
        if not ahat.is_unit():
            rep.fail("extended twist is a unit twist", (str(alpha),))
            continue
        images.append(pic_g.index_of(ahat))
        if truncated_twist(ahat, n) != alpha:
            rep.fail("geometric fixed points recover the twist", (str(alpha),))
        comparison = phi_twisted_comparison(ahat, n)
        if not comparison.source.same_as(twisted_burnside(alpha)) or not is_isomorphism(comparison):
            rep.fail("geometric fixed points of the extended functor recover the functor", (str(alpha),))
    if len(set(images)) != len(images):
        rep.fail("extension is injective on classes")
    above = set(corr)
    kernel = [
        c for c in pic_g.classes if all(c.representative.values[h] == 1 for h in above)
    ]
    if pic_g.order != pic_q.order * len(kernel):
        rep.fail("class counts multiply", detail=f"{pic_g.order} != {pic_q.order} * {len(kernel)}")
    rep.data.update(pic_g=pic_g.order, pic_q=pic_q.order, kernel=len(kernel))
    return rep
