"""Burnside twists and the twisted Burnside Mackey functors they define.

A twist assigns a nonzero integer to every subgroup, with the value at the
whole group fixed to 1.  Its restriction factor at ``H`` is the product of
the values on all subgroups containing ``H``.  The twisted functor ``A^a``
has the Burnside levels and transfers, with each restriction column scaled
by a ratio of restriction factors.  Ratios are always formed as products
over up-set differences, never by dividing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from . import burnside
from . import intlinalg as il
from .errors import ConsistencyError, InvalidInputError
from .groups import FiniteAbelianGroup
from .mackey import (
    MackeyFunctor,
    MackeyMorphism,
    burnside_labels,
    compose,
    identity_morphism,
    inverse,
)


@dataclass(frozen=True)
class Twist:
    group: FiniteAbelianGroup
    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        lat = self.group.lattice
        if len(vals) != len(lat):
            raise InvalidInputError(f"{self.group.name()} has {len(lat)} subgroups, got {len(vals)} twist values")
        if any(v == 0 for v in vals):
            raise InvalidInputError("twist values must be nonzero")
        if vals[lat.top] != 1:
            raise InvalidInputError("a twist takes the value 1 on the whole group")
        object.__setattr__(self, "values", vals)

    def __getitem__(self, H) -> int:
        return self.values[self.group.lattice.index_of(H)]

    def __mul__(self, other: "Twist") -> "Twist":
        return multiply_twists(self, other)

    def __iter__(self):
        return iter(self.values)

    def is_unit(self) -> bool:
        return all(gcd(v, n) == 1 for v, n in zip(self.values, self.group.lattice.top_indices))

    def with_value(self, H, value: int) -> "Twist":
        h = self.group.lattice.index_of(H)
        vals = list(self.values)
        vals[h] = int(value)
        return Twist(self.group, tuple(vals))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.values)) + ")"


def make_twist(G: FiniteAbelianGroup, values) -> Twist:
    if isinstance(values, str):
        values = [int(v) for v in values.split(",") if v.strip()]
    return Twist(G, tuple(values))


def trivial_twist(G: FiniteAbelianGroup) -> Twist:
    return Twist(G, (1,) * len(G.lattice))


def require_unit(a: Twist) -> Twist:
    if not a.is_unit():
        raise InvalidInputError(f"{a} is not a unit twist: some value shares a factor with its index")
    return a


def random_twist(G: FiniteAbelianGroup, rng: np.random.Generator, bound: int = 9) -> Twist:
    """Values drawn uniformly from ``[-bound, bound]`` without zero."""
    choices = [v for v in range(-bound, bound + 1) if v]
    n = len(G.lattice)
    vals = [int(choices[i]) for i in rng.integers(0, len(choices), size=n)]
    vals[-1] = 1
    return Twist(G, tuple(vals))


def random_unit_twist(G: FiniteAbelianGroup, rng: np.random.Generator, bound: int | None = None) -> Twist:
    """Each value is a random unit modulo its index (signs included), lifted into ``[-bound, bound]``."""
    lat = G.lattice
    vals = []
    for h in range(len(lat)):
        idx = lat.index(h, lat.top)
        top = bound if bound is not None else max(idx, 2)
        options = [v for v in range(-top, top + 1) if v and gcd(v, idx) == 1]
        vals.append(int(options[rng.integers(0, len(options))]))
    vals[lat.top] = 1
    return Twist(G, tuple(vals))


def _same_group(a: Twist, b: Twist) -> None:
    if a.group != b.group:
        raise InvalidInputError("twists over different groups")


def multiply_twists(a: Twist, b: Twist) -> Twist:
    _same_group(a, b)
    return Twist(a.group, tuple(x * y for x, y in zip(a.values, b.values)))


def restriction_factor(a: Twist, H) -> int:
    lat = a.group.lattice
    return prod(a.values[k] for k in lat.above(lat.index_of(H)))


def twist_ratio(a: Twist, J, K) -> int:
    """``r_{J n K} / r_J`` as the product of ``a`` over subgroups above ``J n K`` but not above ``J``."""
    lat = a.group.lattice
    j, k = lat.index_of(J), lat.index_of(K)
    m = int(lat.meet_table[j, k])
    return prod(a.values[x] for x in lat.above(m) if not lat.le[j, x])


def twisted_restriction_matrix(a: Twist, H, K) -> np.ndarray:
    G = a.group
    lat = G.lattice
    h, k = lat.index_of(H), lat.index_of(K)
    M = burnside.restriction_matrix(G, h, k)
    for col, j in enumerate(lat.below(h)):
        M[:, col] *= twist_ratio(a, j, k)
    return M


def twisted_burnside(a: Twist) -> MackeyFunctor:
    G = a.group
    lat = G.lattice
    trivial = all(v == 1 for v in a.values)
    return MackeyFunctor.build(
        G,
        [len(lat.below(h)) for h in range(len(lat))],
        lambda h, k: twisted_restriction_matrix(a, h, k),
        lambda j, h: burnside.transfer_matrix(G, j, h),
        labels=burnside_labels(G),
        name="A" if trivial else f"A^{a}",
    )


# ---------------------------------------------------------------------------
# morphisms out of A^a


def morphism_from_generators(a: Twist, M: MackeyFunctor, gamma) -> MackeyMorphism:
    """The morphism ``A^a -> M`` sending ``H/J`` to ``tr_J^H(gamma_J)``.

    ``gamma`` holds one vector per subgroup.  No constraint check happens
    here; callers that accept untrusted input validate first.
    """
    G = a.group
    lat = G.lattice
    vecs = [il.as_vector(g) for g in gamma]
    comps = []
    for h in range(len(lat)):
        cols = [il.matmul(M.tr[j, h], vecs[j].reshape(-1, 1))[:, 0] for j in lat.below(h)]
        C = il.zeros(M.ranks[h], len(cols))
        for c, v in enumerate(cols):
            C[:, c] = v
        comps.append(C)
    return MackeyMorphism(twisted_burnside(a), M, tuple(comps))


def unit_vector(G: FiniteAbelianGroup, h: int, j: int) -> np.ndarray:
    """The basis orbit ``H/J`` as a coefficient vector of ``A(H)``."""
    return burnside.orbit(G, h, j).coefficients


def elementary_shift_iso(a: Twist, F) -> MackeyMorphism:
    """Isomorphism ``A^a -> A^b`` where ``b`` adds the index ``[G:F]`` to ``a_F``."""
    require_unit(a)
    G = a.group
    lat = G.lattice
    f = lat.index_of(F)
    if f == lat.top:
        raise InvalidInputError("the shifted subgroup must be proper")
    idx = lat.index(f, lat.top)
    b = a.with_value(f, a.values[f] + idx)
    gamma = []
    for h in range(len(lat)):
        v = unit_vector(G, h, h)
        if not lat.le[h, f]:
            m = int(lat.meet_table[f, h])
            num = restriction_factor(a, m)
            den = a.values[f] * restriction_factor(a, h)
            c, rem = divmod(num, den)
            if rem:
                raise ConsistencyError(f"shift scalar {num}/{den} is not an integer")
            fh = int(lat.join_table[f, h])
            v = v - c * lat.index(fh, lat.top) * unit_vector(G, h, m)
        gamma.append(v)
    return morphism_from_generators(a, twisted_burnside(b), gamma)


def negate_iso(a: Twist, F) -> MackeyMorphism:
    """Isomorphism ``A^a -> A^b`` where ``b`` negates ``a_F``."""
    G = a.group
    lat = G.lattice
    f = lat.index_of(F)
    if f == lat.top:
        raise InvalidInputError("the negated subgroup must be proper")
    b = a.with_value(f, -a.values[f])
    gamma = [unit_vector(G, h, h) * (-1 if lat.le[h, f] else 1) for h in range(len(lat))]
    return morphism_from_generators(a, twisted_burnside(b), gamma)


# ---------------------------------------------------------------------------
# equivalence


def normalize(a: Twist) -> Twist:
    """Canonical representative modulo the index and a sign, one subgroup at a time."""
    require_unit(a)
    vals = []
    for v, idx in zip(a.values, a.group.lattice.top_indices):
        if idx <= 2:
            vals.append(1)
        else:
            x = v % idx
            vals.append(min(x, idx - x))
    return Twist(a.group, tuple(vals))


def equivalent(a: Twist, b: Twist) -> bool:
    _same_group(a, b)
    return normalize(a) == normalize(b)


def witness_iso(a: Twist, b: Twist) -> MackeyMorphism | None:
    """An explicit isomorphism ``A^a -> A^b`` built from negations and shifts, or ``None``."""
    _same_group(a, b)
    if not equivalent(a, b):
        return None
    lat = a.group.lattice
    phi = identity_morphism(twisted_burnside(a))
    cur = a
    for f in range(len(lat)):
        if f == lat.top or cur.values[f] == b.values[f]:
            continue
        idx = lat.index(f, lat.top)
        if (b.values[f] - cur.values[f]) % idx:
            step = negate_iso(cur, f)
            phi = compose(step, phi)
            cur = cur.with_value(f, -cur.values[f])
        k = (b.values[f] - cur.values[f]) // idx
        for _ in range(abs(k)):
            if k > 0:
                step = elementary_shift_iso(cur, f)
                cur = cur.with_value(f, cur.values[f] + idx)
            else:
                prev = cur.with_value(f, cur.values[f] - idx)
                step = inverse(elementary_shift_iso(prev, f))
                if step is None:
                    raise ConsistencyError("elementary shift is not invertible over the integers")
                cur = prev
            phi = compose(step, phi)
    if cur != b:
        raise ConsistencyError(f"witness construction ended at {cur}, expected {b}")
    return MackeyMorphism(phi.source, twisted_burnside(b), phi.components)
