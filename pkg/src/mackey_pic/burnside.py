"""Burnside rings A(H) of the subgroups H of a finite abelian group G.

The basis of A(H) is the orbits H/J for J <= H, listed in the canonical
lattice order of G.  For abelian groups the orbit product is

    H/J * H/K = [H : JK] * H/(J n K)

and restriction to K <= H sends H/J to [H : JK] * K/(J n K).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import intlinalg as il
from .errors import InvalidInputError
from .groups import FiniteAbelianGroup


def _level(G: FiniteAbelianGroup, H) -> int:
    return G.lattice.index_of(H)


def basis(G: FiniteAbelianGroup, H) -> list[int]:
    """Lattice indices J <= H labelling the basis orbits H/J."""
    return G.lattice.below(_level(G, H))


@dataclass(frozen=True, eq=False)
class BurnsideElement:
    group: FiniteAbelianGroup
    level: int
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = il.as_vector(self.coefficients)
        n = len(basis(self.group, self.level))
        if coeffs.shape[0] != n:
            raise InvalidInputError(f"A(H) has rank {n}, got {coeffs.shape[0]} coefficients")
        object.__setattr__(self, "coefficients", coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BurnsideElement)
            and self.group == other.group
            and self.level == other.level
            and all(self.coefficients == other.coefficients)
        )

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        _check_same_level(self, other)
        return BurnsideElement(self.group, self.level, self.coefficients + other.coefficients)

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        _check_same_level(self, other)
        return BurnsideElement(self.group, self.level, self.coefficients - other.coefficients)

    def __rmul__(self, k: int) -> "BurnsideElement":
        return BurnsideElement(self.group, self.level, self.coefficients * int(k))

    def __mul__(self, other):
        if isinstance(other, BurnsideElement):
            return multiply(self, other)
        return self.__rmul__(other)

    def as_dict(self) -> dict[str, int]:
        lat = self.group.lattice
        return {lat.label(j): int(c) for j, c in zip(basis(self.group, self.level), self.coefficients) if c}

    def __repr__(self) -> str:
        lat = self.group.lattice
        terms = [f"{c}*[{lat.label(j)}]" for j, c in zip(basis(self.group, self.level), self.coefficients) if c]
        return f"A({lat.label(self.level)}): " + (" + ".join(terms) or "0")


def _check_same_level(x: BurnsideElement, y: BurnsideElement) -> None:
    if x.group != y.group or x.level != y.level:
        raise InvalidInputError("Burnside elements live at different levels")


def orbit(G: FiniteAbelianGroup, H, J) -> BurnsideElement:
    """The basis element H/J of A(H)."""
    h, j = _level(G, H), _level(G, J)
    lat = G.lattice
    if not lat.le[j, h]:
        raise InvalidInputError(f"{lat.label(j)} is not a subgroup of {lat.label(h)}")
    b = basis(G, h)
    coeffs = [int(x == j) for x in b]
    return BurnsideElement(G, h, coeffs)


def unit(G: FiniteAbelianGroup, H) -> BurnsideElement:
    return orbit(G, H, H)


def multiplication_constants(G: FiniteAbelianGroup, H) -> dict[tuple[int, int], tuple[int, int]]:
    """``(J, K) -> (coefficient, J n K)`` for the orbit product in A(H)."""
    return dict(_constants(G, _level(G, H)))


@lru_cache(maxsize=64)
def _constants(G: FiniteAbelianGroup, h: int) -> dict[tuple[int, int], tuple[int, int]]:
    lat = G.lattice
    b = basis(G, h)
    out = {}
    for j in b:
        for k in b:
            jk = int(lat.join_table[j, k])
            out[j, k] = (lat.orders[h] // lat.orders[jk], int(lat.meet_table[j, k]))
    return out


def multiply(x: BurnsideElement, y: BurnsideElement) -> BurnsideElement:
    _check_same_level(x, y)
    G, h = x.group, x.level
    b = basis(G, h)
    pos = {j: i for i, j in enumerate(b)}
    out = [0] * len(b)
    consts = _constants(G, h)
    for j, cx in zip(b, x.coefficients):
        if not cx:
            continue
        for k, cy in zip(b, y.coefficients):
            if cy:
                c, m = consts[j, k]
                out[pos[m]] += cx * cy * c
    return BurnsideElement(G, h, out)


def multiplication_table(G: FiniteAbelianGroup, H=None) -> list[list[BurnsideElement]]:
    h = G.lattice.top if H is None else _level(G, H)
    b = basis(G, h)
    return [[multiply(orbit(G, h, j), orbit(G, h, k)) for k in b] for j in b]


def restriction_matrix(G: FiniteAbelianGroup, H, K) -> np.ndarray:
    """Matrix of res^H_K : A(H) -> A(K)."""
    h, k = _level(G, H), _level(G, K)
    lat = G.lattice
    if not lat.le[k, h]:
        raise InvalidInputError(f"{lat.label(k)} is not a subgroup of {lat.label(h)}")
    src, tgt = basis(G, h), basis(G, k)
    pos = {x: i for i, x in enumerate(tgt)}
    M = il.zeros(len(tgt), len(src))
    for col, j in enumerate(src):
        jk = int(lat.join_table[j, k])
        M[pos[int(lat.meet_table[j, k])], col] = lat.orders[h] // lat.orders[jk]
    return M


def transfer_matrix(G: FiniteAbelianGroup, J, H) -> np.ndarray:
    """Matrix of tr^H_J : A(J) -> A(H), sending J/L to H/L."""
    j, h = _level(G, J), _level(G, H)
    lat = G.lattice
    if not lat.le[j, h]:
        raise InvalidInputError(f"{lat.label(j)} is not a subgroup of {lat.label(h)}")
    src, tgt = basis(G, j), basis(G, h)
    pos = {x: i for i, x in enumerate(tgt)}
    M = il.zeros(len(tgt), len(src))
    for col, l in enumerate(src):
        M[pos[l], col] = 1
    return M


def restrict(x: BurnsideElement, K) -> BurnsideElement:
    M = restriction_matrix(x.group, x.level, K)
    return BurnsideElement(x.group, _level(x.group, K), il.matmul(M, x.coefficients.reshape(-1, 1))[:, 0])


def transfer(x: BurnsideElement, H) -> BurnsideElement:
    M = transfer_matrix(x.group, x.level, H)
    return BurnsideElement(x.group, _level(x.group, H), il.matmul(M, x.coefficients.reshape(-1, 1))[:, 0])


def marks_matrix(G: FiniteAbelianGroup, H=None) -> np.ndarray:
    """Rows K <= H, columns H/J: the number of K-fixed points of H/J."""
    h = G.lattice.top if H is None else _level(G, H)
    lat = G.lattice
    b = basis(G, h)
    M = il.zeros(len(b), len(b))
    for r, k in enumerate(b):
        for c, j in enumerate(b):
            if lat.le[k, j]:
                M[r, c] = lat.orders[h] // lat.orders[j]
    return M


def marks(x: BurnsideElement) -> np.ndarray:
    return il.matmul(marks_matrix(x.group, x.level), x.coefficients.reshape(-1, 1))[:, 0]


def random_element(G: FiniteAbelianGroup, H, rng: np.random.Generator, bound: int = 5) -> BurnsideElement:
    n = len(basis(G, H))
    return BurnsideElement(G, _level(G, H), [int(v) for v in rng.integers(-bound, bound + 1, size=n)])
