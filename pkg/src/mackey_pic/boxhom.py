"""Morphisms out of twisted Burnside functors, Dress pairings, and the box-product law.

A morphism ``A^a -> M`` is determined by where it sends the generators
``H/H``; the admissible images form the lattice ``Gamma^a(M)`` of families
``(gamma_H)`` with ``res_K^H gamma_H = (r_K / r_H) gamma_K``.

A Dress pairing ``(M, N) -> P`` is stored levelwise as a matrix from the
tensor basis of ``M_H (x) N_H`` (index ``i * rank N_H + j``) to ``P_H``.
The law ``A^a [box] A^b = A^{ab}`` is checked through its universal
property: pairings out of ``(A^a, A^b)`` into a probe ``P`` must correspond
bijectively to elements of ``Gamma^{ab}(P)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intlinalg as il
from .errors import InvalidInputError
from .mackey import MackeyFunctor, MackeyMorphism
from .report import ValidationReport
from .twists import (
    Twist,
    morphism_from_generators,
    multiply_twists,
    random_unit_twist,
    trivial_twist,
    twist_ratio,
    twisted_burnside,
    unit_vector,
)


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Kronecker product of exact integer matrices."""
    out = il.zeros(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])
    p, q = B.shape
    for (i, j), x in np.ndenumerate(A):
        if x:
            out[i * p : (i + 1) * p, j * q : (j + 1) * q] = B * x
    return out


# ---------------------------------------------------------------------------
# Gamma^a(M)


@dataclass(frozen=True, eq=False)
class HomSpace:
    twist: Twist
    target: MackeyFunctor
    gamma_basis: il.Lattice

    @property
    def rank(self) -> int:
        return self.gamma_basis.rank

    @property
    def offsets(self) -> tuple[int, ...]:
        return _offsets(self.target.ranks)

    def split(self, vec) -> list[np.ndarray]:
        return _split(il.as_vector(vec), self.target.ranks)

    def morphism(self, vec) -> MackeyMorphism:
        return morphism_from_generators(self.twist, self.target, self.split(vec))

    def basis_morphisms(self) -> list[MackeyMorphism]:
        return [self.morphism(v) for v in self.gamma_basis.vectors()]


def _offsets(ranks) -> tuple[int, ...]:
    out = [0]
    for r in ranks:
        out.append(out[-1] + r)
    return tuple(out)


def _split(vec: np.ndarray, ranks) -> list[np.ndarray]:
    off = _offsets(ranks)
    if vec.shape[0] != off[-1]:
        raise InvalidInputError(f"expected a vector of length {off[-1]}, got {vec.shape[0]}")
    return [vec[off[h] : off[h + 1]].copy() for h in range(len(ranks))]


def _gamma_constraints(a: Twist, M: MackeyFunctor) -> np.ndarray:
    lat = M.lattice
    off = _offsets(M.ranks)
    blocks = []
    for h in range(len(lat)):
        for k in lat.below(h):
            if k == h:
                continue
            row = il.zeros(M.ranks[k], off[-1])
            row[:, off[h] : off[h + 1]] = M.res[h, k]
            row[:, off[k] : off[k + 1]] = -twist_ratio(a, h, k) * il.identity(M.ranks[k])
            blocks.append(row)
        if not M.weyl_trivial[h]:
            for W in M.weyl[h]:
                row = il.zeros(M.ranks[h], off[-1])
                row[:, off[h] : off[h + 1]] = W - il.identity(M.ranks[h])
                blocks.append(row)
    if not blocks:
        return il.zeros(0, off[-1])
    return np.vstack(blocks)


def gamma_space(a: Twist, M: MackeyFunctor) -> HomSpace:
    """All admissible generator images for morphisms ``A^a -> M``."""
    if a.group != M.group:
        raise InvalidInputError("twist and functor live over different groups")
    return HomSpace(a, M, il.kernel(_gamma_constraints(a, M)))


def morphism_from_gamma(a: Twist, M: MackeyFunctor, gamma) -> MackeyMorphism:
    """The morphism determined by ``gamma`` (a flat vector or one vector per level)."""
    if isinstance(gamma, np.ndarray) and gamma.ndim == 1 or (
        len(gamma) and np.isscalar(gamma[0])
    ):
        parts = _split(il.as_vector(gamma), M.ranks)
    else:
        parts = [il.as_vector(g) for g in gamma]
        if [len(p) for p in parts] != list(M.ranks):
            raise InvalidInputError("gamma does not match the level ranks of the target")
    flat = np.concatenate(parts) if parts else np.zeros(0, dtype=object)
    residual = il.matmul(_gamma_constraints(a, M), flat.reshape(-1, 1))
    if np.any(residual != 0):
        raise InvalidInputError("gamma violates the restriction constraints")
    return morphism_from_generators(a, M, parts)


def generator_images(phi: MackeyMorphism) -> list[np.ndarray]:
    """Images of the generators ``H/H`` under a morphism out of a twisted Burnside functor."""
    lat = phi.source.lattice
    return [phi.components[h][:, lat.below(h).index(h)].copy() for h in range(len(lat))]


# ---------------------------------------------------------------------------
# Dress pairings


@dataclass(frozen=True, eq=False)
class DressPairing:
    left: MackeyFunctor
    right: MackeyFunctor
    target: MackeyFunctor
    theta: tuple[np.ndarray, ...]

    def __post_init__(self):
        L, R, P = self.left, self.right, self.target
        if not L.group == R.group == P.group:
            raise InvalidInputError("pairing between functors over different groups")
        th = tuple(
            il.as_matrix(t, P.ranks[h], L.ranks[h] * R.ranks[h]) for h, t in enumerate(self.theta)
        )
        object.__setattr__(self, "theta", th)

    def apply(self, H, x, y) -> np.ndarray:
        h = self.target.level(H)
        v = kron(il.as_vector(x).reshape(-1, 1), il.as_vector(y).reshape(-1, 1))
        return il.matmul(self.theta[h], v)[:, 0]


def _pairing_equations(L: MackeyFunctor, R: MackeyFunctor, P: MackeyFunctor):
    """Yield ``(name, where, coeffs)`` where each ``coeffs`` maps a level index to a
    pair ``(A, B)`` meaning the condition ``sum A theta_level B = 0``."""
    lat = P.lattice
    for h in range(len(lat)):
        Ih_L, Ih_R = il.identity(L.ranks[h]), il.identity(R.ranks[h])
        for k in lat.below(h):
            if k == h:
                continue
            Ik_L, Ik_R = il.identity(L.ranks[k]), il.identity(R.ranks[k])
            where = (lat.label(h), lat.label(k))
            yield "restriction square", where, [
                (k, il.identity(P.ranks[k]), kron(L.res[h, k], R.res[h, k])),
                (h, -P.res[h, k], il.identity(L.ranks[h] * R.ranks[h])),
            ]
            yield "left Frobenius square", where, [
                (h, il.identity(P.ranks[h]), kron(L.tr[k, h], Ih_R)),
                (k, -P.tr[k, h], kron(Ik_L, R.res[h, k])),
            ]
            yield "right Frobenius square", where, [
                (h, il.identity(P.ranks[h]), kron(Ih_L, R.tr[k, h])),
                (k, -P.tr[k, h], kron(L.res[h, k], Ik_R)),
            ]
        if not (L.weyl_trivial[h] and R.weyl_trivial[h] and P.weyl_trivial[h]):
            for i in range(P.group.rank):
                yield "conjugation square", (lat.label(h),), [
                    (h, il.identity(P.ranks[h]), kron(L.weyl[h][i], R.weyl[h][i])),
                    (h, -P.weyl[h][i], il.identity(L.ranks[h] * R.ranks[h])),
                ]


def pairing_violations(theta: DressPairing) -> ValidationReport:
    rep = ValidationReport("Dress pairing")
    th = theta.theta
    for name, where, terms in _pairing_equations(theta.left, theta.right, theta.target):
        total = None
        for lvl, A, B in terms:
            t = il.matmul(A, th[lvl], B)
            total = t if total is None else total + t
        if np.any(total != 0):
            rep.fail(name, where)
    return rep


def check_pairing(theta: DressPairing) -> bool:
    return pairing_violations(theta).ok


def _pairing_system(L: MackeyFunctor, R: MackeyFunctor, P: MackeyFunctor) -> np.ndarray:
    # unknowns: theta_H flattened row-major, levels concatenated;
    # vec(A X B) = (A kron B^T) vec(X) for row-major vec
    sizes = [P.ranks[h] * L.ranks[h] * R.ranks[h] for h in range(len(P.ranks))]
    off = _offsets(sizes)
    blocks = []
    for _, _, terms in _pairing_equations(L, R, P):
        rows = terms[0][1].shape[0] * terms[0][2].shape[1]
        block = il.zeros(rows, off[-1])
        for lvl, A, B in terms:
            block[:, off[lvl] : off[lvl + 1]] += kron(A, B.T)
        blocks.append(block)
    if not blocks:
        return il.zeros(0, off[-1])
    return np.vstack(blocks)


def _flatten(theta: DressPairing) -> np.ndarray:
    parts = [t.reshape(-1) for t in theta.theta]
    return np.concatenate(parts) if parts else np.zeros(0, dtype=object)


def _unflatten(vec, L, R, P) -> tuple[np.ndarray, ...]:
    out = []
    pos = 0
    for h in range(len(P.ranks)):
        shape = (P.ranks[h], L.ranks[h] * R.ranks[h])
        n = shape[0] * shape[1]
        out.append(il.as_matrix(vec[pos : pos + n], *shape) if n else il.zeros(*shape))
        pos += n
    return tuple(out)


def dress_space(a: Twist, b: Twist, P: MackeyFunctor) -> il.Lattice:
    """Every Dress pairing ``(A^a, A^b) -> P``, as a lattice of flattened theta vectors."""
    return dress_space_of(twisted_burnside(a), twisted_burnside(b), P)


def dress_space_of(L: MackeyFunctor, R: MackeyFunctor, P: MackeyFunctor) -> il.Lattice:
    return il.kernel(_pairing_system(L, R, P))


def pairing_from_vector(L, R, P, vec) -> DressPairing:
    return DressPairing(L, R, P, _unflatten(il.as_vector(vec), L, R, P))


def box_scalar(a: Twist, b: Twist, h: int, j: int, k: int) -> int:
    """Coefficient of ``tr_{J n K}^H gamma_{J n K}`` in ``theta_H(H/J (x) H/K)``."""
    lat = a.group.lattice
    jk = int(lat.join_table[j, k])
    return twist_ratio(a, j, k) * twist_ratio(b, k, j) * lat.index(jk, h)


def pairing_from_gamma(a: Twist, b: Twist, P: MackeyFunctor, gamma) -> DressPairing:
    """The pairing ``(A^a, A^b) -> P`` forced by a family ``gamma`` in ``Gamma^{ab}(P)``."""
    G = a.group
    lat = G.lattice
    gam = [il.as_vector(g) for g in gamma]
    L, R = twisted_burnside(a), twisted_burnside(b)
    theta = []
    for h in range(len(lat)):
        below = lat.below(h)
        nb = len(below)
        T = il.zeros(P.ranks[h], nb * nb)
        for i, j in enumerate(below):
            for jj, k in enumerate(below):
                m = int(lat.meet_table[j, k])
                col = il.matmul(P.tr[m, h], gam[m].reshape(-1, 1))[:, 0]
                T[:, i * nb + jj] = box_scalar(a, b, h, j, k) * col
        theta.append(T)
    return DressPairing(L, R, P, tuple(theta))


def dress_pairing_box(a: Twist, b: Twist) -> DressPairing:
    """The universal pairing ``(A^a, A^b) -> A^{ab}`` sending generators to generators."""
    if a.group != b.group:
        raise InvalidInputError("twists over different groups")
    G = a.group
    lat = G.lattice
    P = twisted_burnside(multiply_twists(a, b))
    gamma = [unit_vector(G, h, h) for h in range(len(lat))]
    return pairing_from_gamma(a, b, P, gamma)


def swap_pairing(theta: DressPairing) -> DressPairing:
    """The pairing ``(N, M) -> P`` obtained by swapping tensor factors."""
    L, R = theta.left, theta.right
    out = []
    for h, T in enumerate(theta.theta):
        m, n = L.ranks[h], R.ranks[h]
        perm = [i * n + j for j in range(n) for i in range(m)]
        out.append(T[:, perm])
    return DressPairing(R, L, theta.target, tuple(out))


def default_probes(a: Twist, b: Twist, seed: int = 0) -> list[MackeyFunctor]:
    """``A``, ``A^a``, ``A^b``, ``A^{ab}`` and one seeded random unit twist."""
    extra = random_unit_twist(a.group, np.random.default_rng(seed))
    twists = [trivial_twist(a.group), a, b, multiply_twists(a, b), extra]
    return [twisted_burnside(t) for t in twists]


def verify_box_law(a: Twist, b: Twist, probes=None, seed: int = 0) -> ValidationReport:
    """Check that ``gamma -> theta^gamma`` maps ``Gamma^{ab}(P)`` onto all Dress pairings.

    For each probe ``P`` the images of a basis of ``Gamma^{ab}(P)`` must be
    pairings, and their coordinates in a basis of the full pairing lattice
    must form a square unimodular matrix.
    """
    if a.group != b.group:
        raise InvalidInputError("twists over different groups")
    ab = multiply_twists(a, b)
    rep = ValidationReport(f"box law for {a} and {b} over {a.group.name()}")
    probes = default_probes(a, b, seed) if probes is None else list(probes)
    L, R = twisted_burnside(a), twisted_burnside(b)
    rows = []
    for P in probes:
        G_space = gamma_space(ab, P)
        D = dress_space_of(L, R, P)
        images = [pairing_from_gamma(a, b, P, G_space.split(v)) for v in G_space.gamma_basis.vectors()]
        bad = [i for i, th in enumerate(images) if not check_pairing(th)]
        if bad:
            rep.fail("forced pairing is a Dress pairing", (P.name,), f"basis vectors {bad}")
            continue
        if D.rank != G_space.rank:
            rep.fail("pairing lattice has the rank of Gamma", (P.name,), f"{D.rank} vs {G_space.rank}")
            continue
        coords = [D.coordinates(_flatten(th)) for th in images]
        if any(c is None for c in coords):
            rep.fail("forced pairing lies in the pairing lattice", (P.name,))
            continue
        C = il.zeros(D.rank, G_space.rank)
        for j, c in enumerate(coords):
            C[:, j] = c
        if not il.is_unimodular(C):
            rep.fail(
                "correspondence is unimodular", (P.name,), f"determinant {il.determinant(C)}"
            )
        rows.append({"probe": P.name, "rank": G_space.rank})
    rep.data["probes"] = rows
    return rep
