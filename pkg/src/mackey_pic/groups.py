"""Finite abelian groups and their subgroup lattices.

A group is stored by its invariant factors ``n_1 | n_2 | ... | n_k``; its
elements are coordinate tuples ``(x_1, ..., x_k)`` with ``0 <= x_i < n_i``,
numbered in lexicographic order.  A subgroup is a set of element numbers,
kept as a Python int bitmask so that meets and containment are bit
operations.

Subgroups are ordered canonically by order and then lexicographically by
their sorted element tuples.  That order fixes every matrix row and column
index in the rest of the library.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import prod

import numpy as np

from . import intlinalg as il
from .errors import InvalidInputError, ResourceLimitError

DEFAULT_ORDER_CAP = 512


def _prime_powers(n: int) -> dict[int, int]:
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 1) * p
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 1) * n
    return out


def canonical_factors(factors) -> tuple[int, ...]:
    """Divisor-chain form of ``Z/f_1 + ... + Z/f_k``."""
    by_prime: dict[int, list[int]] = {}
    for f in factors:
        for p, q in _prime_powers(f).items():
            by_prime.setdefault(p, []).append(q)
    for qs in by_prime.values():
        qs.sort(reverse=True)
    length = max((len(qs) for qs in by_prime.values()), default=0)
    chain = [prod(qs[i] for qs in by_prime.values() if i < len(qs)) for i in range(length)]
    return tuple(reversed(chain))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        f = tuple(int(x) for x in self.invariant_factors)
        if any(x < 2 for x in f):
            raise InvalidInputError(f"invariant factors must be >= 2, got {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise InvalidInputError(f"invariant factors {f} do not form a divisor chain")
        object.__setattr__(self, "invariant_factors", f)

    @property
    def order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.invariant_factors)})"

    def name(self) -> str:
        if not self.invariant_factors:
            return "e"
        return " x ".join(f"C{n}" for n in self.invariant_factors)

    # elements ------------------------------------------------------------

    @cached_property
    def _radix(self) -> tuple[int, ...]:
        out = []
        acc = 1
        for n in reversed(self.invariant_factors):
            out.append(acc)
            acc *= n
        return tuple(reversed(out))

    def element(self, i: int) -> tuple[int, ...]:
        return tuple((i // r) % n for r, n in zip(self._radix, self.invariant_factors))

    def element_index(self, x) -> int:
        return sum((int(c) % n) * r for c, n, r in zip(x, self.invariant_factors, self._radix))

    @cached_property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.element(i) for i in range(self.order))

    @cached_property
    def addition_table(self) -> np.ndarray:
        n = self.order
        coords = np.array(self.elements, dtype=np.int64).reshape(n, self.rank)
        mods = np.array(self.invariant_factors, dtype=np.int64)
        radix = np.array(self._radix, dtype=np.int64)
        summed = (coords[:, None, :] + coords[None, :, :]) % mods
        return (summed * radix).sum(axis=2) if self.rank else np.zeros((n, n), dtype=np.int64)

    def add(self, i: int, j: int) -> int:
        return int(self.addition_table[i, j])

    def neg(self, i: int) -> int:
        return self.element_index(tuple(-c for c in self.element(i)))

    def scale(self, k: int, i: int) -> int:
        return self.element_index(tuple(k * c for c in self.element(i)))

    def generators(self) -> list[int]:
        """Element numbers of the canonical generators (unit coordinate vectors)."""
        return [self.element_index(tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return subgroup_lattice(self)


def make_group(factors=()) -> FiniteAbelianGroup:
    """The group ``Z/f_1 + ... + Z/f_k`` in canonical divisor-chain form."""
    fs = [int(f) for f in factors]
    if any(f < 2 for f in fs):
        raise InvalidInputError(f"every factor must be >= 2, got {fs}")
    return FiniteAbelianGroup(canonical_factors(fs))


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteAbelianGroup
    mask: int
    index_in_lattice: int

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @property
    def elements(self) -> tuple[int, ...]:
        return _mask_elements(self.mask)

    def element_tuples(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.parent.element(i) for i in self.elements)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and self.parent == other.parent and self.mask == other.mask

    def __hash__(self) -> int:
        return hash((self.parent, self.mask))

    def __le__(self, other: "Subgroup") -> bool:
        return contains(self, other)

    def __repr__(self) -> str:
        return f"Subgroup({self.parent.lattice.label(self.index_in_lattice)} of {self.parent.name()})"


def _mask_elements(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _mask(elems) -> int:
    m = 0
    for e in elems:
        m |= 1 << int(e)
    return m


class SubgroupLattice:
    """All subgroups of a finite abelian group with containment, meet and join tables."""

    def __init__(self, parent: FiniteAbelianGroup, masks: list[int]):
        self.parent = parent
        key = lambda m: (m.bit_count(), _mask_elements(m))  # noqa: E731
        self.masks = tuple(sorted(masks, key=key))
        self._index = {m: i for i, m in enumerate(self.masks)}
        self.subgroups = tuple(Subgroup(parent, m, i) for i, m in enumerate(self.masks))
        n = len(self.masks)
        self.orders = tuple(m.bit_count() for m in self.masks)
        order = parent.order
        B = np.zeros((n, order), dtype=np.float32)
        for i, m in enumerate(self.masks):
            B[i, list(_mask_elements(m))] = 1
        # le[i, j]: no element of subgroup i lies outside subgroup j
        le = (B @ (1 - B).T) == 0
        # bitsets over lattice positions; positions are sorted by order, so the
        # meet is the highest common lower bound and the join the lowest common upper bound
        lower = [_bits(le[:, j]) for j in range(n)]
        upper = [_bits(le[i, :]) for i in range(n)]
        meet = np.zeros((n, n), dtype=np.int64)
        join = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            lo, up = lower[i], upper[i]
            for j in range(i, n):
                meet[i, j] = meet[j, i] = (lo & lower[j]).bit_length() - 1
                x = up & upper[j]
                join[i, j] = join[j, i] = (x & -x).bit_length() - 1
        le.setflags(write=False)
        meet.setflags(write=False)
        join.setflags(write=False)
        self.le = le
        self.meet_table = meet
        self.join_table = join

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self):
        return iter(self.subgroups)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.masks) - 1

    def index_of_mask(self, mask: int) -> int:
        try:
            return self._index[mask]
        except KeyError:
            raise InvalidInputError("element set is not a subgroup of this group") from None

    def index_of(self, H) -> int:
        if isinstance(H, Subgroup):
            if H.parent != self.parent:
                raise InvalidInputError("subgroup belongs to a different group")
            return self.index_of_mask(H.mask)
        if isinstance(H, (int, np.integer)):
            if not 0 <= H < len(self):
                raise InvalidInputError(f"no subgroup with index {H}")
            return int(H)
        return self.index_of_mask(_mask(self.parent.element_index(x) if isinstance(x, tuple) else x for x in H))

    def below(self, h: int) -> list[int]:
        """Indices of subgroups contained in subgroup ``h``, canonical order."""
        return [k for k in range(len(self)) if self.le[k, h]]

    def above(self, h: int) -> list[int]:
        return [k for k in range(len(self)) if self.le[h, k]]

    def index(self, h: int, k: int) -> int:
        """``[K:H]`` for ``H <= K``."""
        if not self.le[h, k]:
            raise InvalidInputError(f"{self.label(h)} is not contained in {self.label(k)}")
        return self.orders[k] // self.orders[h]

    @cached_property
    def top_indices(self) -> tuple[int, ...]:
        """``[G:H]`` for every subgroup, in lattice order."""
        g = self.orders[self.top]
        return tuple(g // o for o in self.orders)

    def generators(self, h: int) -> list[int]:
        """A small generating set, chosen greedily in element order."""
        G = self.parent
        span = 1  # the identity
        gens = []
        for e in _mask_elements(self.masks[h]):
            if not (span >> e) & 1:
                gens.append(e)
                span = _span_mask(G, gens)
        return gens

    def label(self, h: int) -> str:
        if self.orders[h] == 1:
            return "e"
        if h == self.top:
            return "G"
        gens = ",".join(
            "(" + ",".join(map(str, self.parent.element(g))) + ")" for g in self.generators(h)
        )
        return f"<{gens}>"

    def cosets(self, h: int, k: int) -> list[int]:
        """One representative element of each coset of subgroup ``k`` inside ``h``."""
        if not self.le[k, h]:
            raise InvalidInputError("coset representatives need k <= h")
        G = self.parent
        kel = _mask_elements(self.masks[k])
        seen = 0
        reps = []
        for x in _mask_elements(self.masks[h]):
            if not (seen >> x) & 1:
                reps.append(x)
                for y in kel:
                    seen |= 1 << G.add(x, y)
        return reps


def _bits(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def _span_mask(G: FiniteAbelianGroup, gens) -> int:
    elems = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return _mask(elems)


def subgroup_lattice(G: FiniteAbelianGroup, cap: int = DEFAULT_ORDER_CAP) -> SubgroupLattice:
    """Enumerate every subgroup exactly once.

    Cyclic subgroups are generated first and then closed under joins, which
    reaches all subgroups of an abelian group.
    """
    if G.order > cap:
        raise ResourceLimitError(f"|G| = {G.order} exceeds the cap {cap}")
    table = G.addition_table
    cyclic = set()
    for g in range(G.order):
        elems = [0]
        x = g
        while x != 0:
            elems.append(x)
            x = int(table[x, g])
        cyclic.add(_mask(elems))

    def join(a: int, b: int) -> int:
        ea = np.array(_mask_elements(a), dtype=np.int64)
        eb = np.array(_mask_elements(b), dtype=np.int64)
        return _mask(np.unique(table[np.ix_(ea, eb)]).tolist())

    found = set(cyclic)
    frontier = set(cyclic)
    cyc = sorted(cyclic)
    while frontier:
        new = set()
        for s in frontier:
            for c in cyc:
                if (s & c) == c:
                    continue
                j = join(s, c)
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return SubgroupLattice(G, sorted(found))


# lattice queries on Subgroup objects -----------------------------------------


def _same_parent(H: Subgroup, K: Subgroup) -> SubgroupLattice:
    if H.parent != K.parent:
        raise InvalidInputError("subgroups of different groups")
    return H.parent.lattice


def meet(H: Subgroup, K: Subgroup) -> Subgroup:
    lat = _same_parent(H, K)
    return lat.subgroups[lat.meet_table[lat.index_of(H), lat.index_of(K)]]


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    lat = _same_parent(H, K)
    return lat.subgroups[lat.join_table[lat.index_of(H), lat.index_of(K)]]


def contains(H: Subgroup, K: Subgroup) -> bool:
    """True when ``H <= K``."""
    lat = _same_parent(H, K)
    return bool(lat.le[lat.index_of(H), lat.index_of(K)])


def index(H: Subgroup, K: Subgroup) -> int:
    """``[K:H]``; raises unless ``H <= K``."""
    lat = _same_parent(H, K)
    return lat.index(lat.index_of(H), lat.index_of(K))


def subgroup(G: FiniteAbelianGroup, generators) -> Subgroup:
    """The subgroup generated by the given elements (coordinate tuples or numbers)."""
    gens = [G.element_index(g) if isinstance(g, (tuple, list)) else int(g) for g in generators]
    lat = G.lattice
    return lat.subgroups[lat.index_of_mask(_span_mask(G, gens))]


# homomorphisms -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GroupMap:
    """A homomorphism given by the images of the source's canonical generators."""

    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    images: tuple[int, ...]

    def __call__(self, i: int) -> int:
        x = self.source.element(i)
        acc = 0
        for c, g in zip(x, self.images):
            acc = self.target.add(acc, self.target.scale(c, g))
        return acc

    @cached_property
    def table(self) -> tuple[int, ...]:
        return tuple(self(i) for i in range(self.source.order))

    def image_mask(self, mask: int) -> int:
        return _mask(self.table[i] for i in _mask_elements(mask))

    def preimage_mask(self, mask: int) -> int:
        return _mask(i for i, y in enumerate(self.table) if (mask >> y) & 1)


def _structure_from_relations(R: np.ndarray):
    """Invariant factors of ``Z^k / colspan(R)`` and the coordinate change ``U``."""
    U, D, _ = il.smith_normal_form(R)
    k = R.shape[0]
    diag = [int(D[i, i]) if i < min(D.shape) else 0 for i in range(k)]
    if any(d == 0 for d in diag):
        raise InvalidInputError("relations do not define a finite group")
    keep = [i for i, d in enumerate(diag) if d != 1]
    return [diag[i] for i in keep], U, keep


def subgroup_as_group(H: Subgroup) -> tuple[FiniteAbelianGroup, GroupMap]:
    """A canonical group isomorphic to ``H`` together with the inclusion into the parent."""
    G = H.parent
    lat = G.lattice
    if lat.index_of(H) == lat.top:
        return G, GroupMap(G, G, tuple(G.generators()))
    gens = lat.generators(lat.index_of(H))
    if not gens:
        triv = FiniteAbelianGroup(())
        return triv, GroupMap(triv, G, ())
    s, k = len(gens), G.rank
    # relations among the chosen generators: kernel of Z^s -> G
    A = il.zeros(k, s + k)
    for j, g in enumerate(gens):
        A[:, j] = G.element(g)
    for i, n in enumerate(G.invariant_factors):
        A[i, s + i] = n
    rel = il.kernel(A).basis[:, :s].T  # columns are relations
    factors, U, keep = _structure_from_relations(rel)
    Uinv = il.integer_inverse(U)
    images = []
    for i in keep:
        acc = 0
        for j, g in enumerate(gens):
            acc = G.add(acc, G.scale(int(Uinv[j, i]), g))
        images.append(acc)
    Hc = FiniteAbelianGroup(tuple(factors))
    emb = GroupMap(Hc, G, tuple(images))
    if emb.image_mask((1 << Hc.order) - 1) != H.mask or len(set(emb.table)) != Hc.order:
        raise AssertionError("subgroup presentation is not an isomorphism")
    return Hc, emb


def quotient(G: FiniteAbelianGroup, N: Subgroup) -> tuple[FiniteAbelianGroup, GroupMap, dict[int, int]]:
    """``G/N`` in canonical form, the projection, and the subgroup correspondence.

    The correspondence sends the lattice index of each ``H >= N`` in ``G`` to
    the lattice index of ``H/N`` in the quotient.
    """
    if not isinstance(N, Subgroup) or N.parent != G:
        raise InvalidInputError("N must be a subgroup of G")
    lat = G.lattice
    n_idx = lat.index_of(N)
    gens = lat.generators(n_idx)
    k = G.rank
    R = il.zeros(k, k + len(gens))
    for i, n in enumerate(G.invariant_factors):
        R[i, i] = n
    for j, g in enumerate(gens):
        R[:, k + j] = G.element(g)
    if k == 0:
        triv = FiniteAbelianGroup(())
        return triv, GroupMap(G, triv, ()), {0: 0}
    factors, U, keep = _structure_from_relations(R)
    Q = FiniteAbelianGroup(tuple(factors))
    images = []
    for j in range(k):
        images.append(Q.element_index(tuple(int(U[i, j]) for i in keep)))
    proj = GroupMap(G, Q, tuple(images))
    qlat = Q.lattice
    corr = {}
    for h in lat.above(n_idx):
        corr[h] = qlat.index_of_mask(proj.image_mask(lat.masks[h]))
    if sorted(corr.values()) != list(range(len(qlat))):
        raise AssertionError("quotient correspondence is not a bijection")
    return Q, proj, corr


def section(proj: GroupMap) -> dict[int, int]:
    """For a surjection, one preimage (the smallest element number) of each target element."""
    out: dict[int, int] = {}
    for i, y in enumerate(proj.table):
        out.setdefault(y, i)
    return out


def all_groups_up_to(n: int) -> list[FiniteAbelianGroup]:
    """Every abelian group of order at most ``n``, one per isomorphism type."""
    out = []
    for order in range(1, n + 1):
        for chain in _divisor_chains(order):
            out.append(FiniteAbelianGroup(chain))
    return out


def _divisor_chains(n: int, smallest: int = 2):
    # chains f_1 | f_2 | ... with product n, returned in increasing length
    if n == 1:
        yield ()
        return
    results = []

    def rec(remaining, prev, acc):
        if remaining == 1:
            results.append(tuple(acc))
            return
        for f in range(max(prev, 2), remaining + 1):
            if remaining % f == 0 and (prev == 1 or f % prev == 0):
                rec(remaining // f, f, acc + [f])

    rec(n, 1, [])
    seen = set()
    for r in results:
        if r not in seen:
            seen.add(r)
            yield r
