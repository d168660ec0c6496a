"""Exact integer linear algebra.

Matrices are numpy arrays with ``dtype=object`` holding Python ints, so
entries never overflow.  The convention everywhere is that entry ``(i, j)``
is the coefficient of target basis element ``i`` in the image of source
basis element ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

# Mersenne prime below 2**31: products of two residues fit in int64.
_PRIME = 2**31 - 1


_to_int = np.frompyfunc(int, 1, 1)


def as_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``data`` to a 2-d object array of Python ints."""
    if isinstance(data, np.ndarray) and data.dtype.kind in "iu":
        arr = data.astype(object)
    else:
        arr = np.array(data, dtype=object)
    if arr.size == 0:
        r = rows if rows is not None else (arr.shape[0] if arr.ndim >= 1 else 0)
        c = cols if cols is not None else (arr.shape[1] if arr.ndim == 2 else 0)
        return np.zeros((r, c), dtype=object)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise InvalidInputError(f"expected a 2-d matrix, got shape {arr.shape}")
    out = _to_int(arr).astype(object)
    if rows is not None and out.shape[0] != rows or cols is not None and out.shape[1] != cols:
        raise InvalidInputError(f"matrix has shape {out.shape}, expected ({rows}, {cols})")
    return out


def as_vector(data) -> np.ndarray:
    return np.array([int(v) for v in data], dtype=object)


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=object)


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


_FAST_LIMIT = 2**62


def _as_int64(m: np.ndarray) -> np.ndarray | None:
    try:
        return m.astype(np.int64)
    except OverflowError:
        return None


def _peak(m: np.ndarray) -> int:
    return max(-int(m.min()), int(m.max()))


def _product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    a64, b64 = _as_int64(a), _as_int64(b)
    if a64 is not None and b64 is not None:
        # machine integers are exact whenever every partial sum stays below 2**62
        bound = _peak(a64) * _peak(b64) * a.shape[1]
        if bound < _FAST_LIMIT:
            return (a64 @ b64).astype(object)
    out = a @ b
    return out if out.dtype == object else out.astype(object)


def matmul(*mats: np.ndarray) -> np.ndarray:
    """Exact product of one or more matrices (left to right)."""
    out = mats[0]
    for m in mats[1:]:
        if out.shape[1] != m.shape[0]:
            raise InvalidInputError(f"cannot multiply {out.shape} by {m.shape}")
        out = _product(out, m)
    return out


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    return a.shape == b.shape and bool(np.all(a == b))


def block_diag(*mats: np.ndarray) -> np.ndarray:
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = zeros(rows, cols)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def _to_lists(M: np.ndarray) -> list[list[int]]:
    return [[int(x) for x in row] for row in M]


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(M) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries, each dividing the next.  Pivots are chosen by smallest absolute
    value with ties broken by row-major position, so the transforms are
    reproducible.
    """
    M = as_matrix(M)
    m, n = M.shape
    A = _to_lists(M)
    U = _to_lists(identity(m))
    V = _to_lists(identity(n))

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            clean = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                # move the smallest remainder in row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, ci, cj = min(cand)
                if ci != t:
                    swap_rows(t, ci)
                else:
                    swap_cols(t, cj)
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return as_matrix(U, m, m), as_matrix(A, m, n), as_matrix(V, n, n)


def _diagonal(D: np.ndarray) -> list[int]:
    return [int(D[i, i]) for i in range(min(D.shape))]


def rank(M) -> int:
    M = as_matrix(M)
    if M.size == 0:
        return 0
    return sum(1 for d in _diagonal(smith_normal_form(M)[1]) if d)


def cokernel_invariants(M) -> list[int]:
    """Invariant factors of ``Z^rows / colspan(M)``; ``0`` marks a free summand."""
    M = as_matrix(M)
    m = M.shape[0]
    if M.shape[1] == 0:
        return [0] * m
    diag = _diagonal(smith_normal_form(M)[1])
    nonzero = [d for d in diag if d]
    return [d for d in nonzero if d != 1] + [0] * (m - len(nonzero))


def determinant(M) -> int:
    """Bareiss fraction-free determinant."""
    M = as_matrix(M)
    n, k = M.shape
    if n != k:
        raise InvalidInputError(f"determinant of non-square {M.shape} matrix")
    if n == 0:
        return 1
    A = _to_lists(M)
    sign, prev = 1, 1
    for t in range(n - 1):
        if A[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if A[i][t]), None)
            if swap is None:
                return 0
            A[t], A[swap] = A[swap], A[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                A[i][j] = (A[i][j] * A[t][t] - A[i][t] * A[t][j]) // prev
        prev = A[t][t]
    return sign * A[n - 1][n - 1]


def is_unimodular(M) -> bool:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise InvalidInputError(f"unimodularity of non-square {M.shape} matrix")
    return abs(determinant(M)) == 1


def integer_inverse(M) -> np.ndarray | None:
    """Exact inverse over the integers, or ``None`` if ``M`` is not unimodular."""
    M = as_matrix(M)
    if not is_unimodular(M):
        return None
    U, D, V = smith_normal_form(M)
    # D is the identity, so M^{-1} = V U
    return matmul(V, U)


# ---------------------------------------------------------------------------
# Lattices and linear systems


@dataclass(frozen=True, eq=False)
class Lattice:
    """A sublattice of ``Z^ambient_rank`` given by independent basis rows."""

    ambient_rank: int
    basis: np.ndarray  # shape (rank, ambient_rank)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    def vectors(self) -> list[np.ndarray]:
        return [self.basis[i].copy() for i in range(self.rank)]

    def coordinates(self, v) -> np.ndarray | None:
        """Integer coordinates of ``v`` in the basis, or ``None`` if ``v`` is outside."""
        v = as_vector(v)
        if self.rank == 0:
            return np.zeros(0, dtype=object) if all(x == 0 for x in v) else None
        sol = solve(self.basis.T, v)
        return None if sol is None else sol[0]

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def combination(self, coeffs) -> np.ndarray:
        coeffs = as_vector(coeffs)
        if self.rank == 0:
            return np.zeros(self.ambient_rank, dtype=object)
        return matmul(coeffs.reshape(1, -1), self.basis)[0]

    def reduced(self) -> "Lattice":
        """Same lattice with an LLL-reduced basis."""
        if self.rank == 0:
            return self
        from sympy import ZZ
        from sympy.polys.matrices import DomainMatrix

        dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in self.basis], self.basis.shape, ZZ)
        red = dm.lll().to_Matrix()
        return Lattice(self.ambient_rank, as_matrix(red.tolist(), self.rank, self.ambient_rank))

    def same_lattice(self, other: "Lattice") -> bool:
        if self.ambient_rank != other.ambient_rank or self.rank != other.rank:
            return False
        return all(v in other for v in self.vectors()) and all(v in self for v in other.vectors())


def solve(A, b) -> tuple[np.ndarray, Lattice] | None:
    """Integer solutions of ``A x = b``.

    Returns ``(particular, kernel)`` or ``None`` when there is no integer
    solution.
    """
    A = as_matrix(A)
    b = as_vector(b)
    m, n = A.shape
    if b.shape[0] != m:
        raise InvalidInputError(f"right-hand side has length {b.shape[0]}, expected {m}")
    U, D, V = smith_normal_form(A)
    y = matmul(U, b.reshape(-1, 1))[:, 0] if m else np.zeros(0, dtype=object)
    diag = _diagonal(D)
    r = sum(1 for d in diag if d)
    z = np.zeros(n, dtype=object)
    for i in range(r):
        if y[i] % diag[i]:
            return None
        z[i] = y[i] // diag[i]
    if any(y[i] != 0 for i in range(r, m)):
        return None
    x = matmul(V, z.reshape(-1, 1))[:, 0] if n else z
    ker = Lattice(n, V[:, r:].T.copy())
    return x, ker


def _echelon(rows: list[list[int]], width: int, track: list[list[int]] | None = None):
    """Unimodular row reduction to echelon form, in place.

    Only the first ``width`` columns drive pivoting; ``track`` rows receive
    the same row operations.  Returns the pivot columns in order.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(width):
        if r >= nrows:
            break
        while True:
            nz = [(abs(rows[i][c]), i) for i in range(r, nrows) if rows[i][c]]
            if not nz:
                break
            _, i0 = min(nz)
            rows[r], rows[i0] = rows[i0], rows[r]
            if track is not None:
                track[r], track[i0] = track[i0], track[r]
            p = rows[r][c]
            done = True
            for i in range(r + 1, nrows):
                if rows[i][c]:
                    q = rows[i][c] // p
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if track is not None:
                        track[i] = [a - q * b for a, b in zip(track[i], track[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if any(rows[i][c] for i in range(r, nrows)):
            pivots.append(c)
            r += 1
    return pivots


def _modp_pivot_rows(A: np.ndarray) -> list[int]:
    """Indices of rows of ``A`` that are independent modulo a large prime."""
    m, n = A.shape
    red = np.array([[int(x) % _PRIME for x in row] for row in A], dtype=np.int64).reshape(m, n)
    chosen = []
    basis = np.zeros((0, n), dtype=np.int64)
    lead: list[int] = []
    # incremental elimination keeps the original row identities
    for i in range(m):
        v = red[i].copy()
        for k, c in enumerate(lead):
            if v[c]:
                v = (v - v[c] * basis[k]) % _PRIME
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            continue
        c = int(nz[0])
        inv = pow(int(v[c]), _PRIME - 2, _PRIME)
        v = (v * inv) % _PRIME
        # keep basis reduced at the new lead
        for k in range(len(lead)):
            if basis[k][c]:
                basis[k] = (basis[k] - basis[k][c] * v) % _PRIME
        basis = np.vstack([basis, v])
        lead.append(c)
        chosen.append(i)
        if len(chosen) == n:
            break
    return chosen


def _kernel_of_independent(R: list[list[int]], n: int) -> np.ndarray:
    """Saturated integer kernel basis (as rows) of the matrix with rows ``R``."""
    if not R:
        return identity(n)
    cols = [[R[i][j] for i in range(len(R))] for j in range(n)]
    track = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    piv = _echelon(cols, len(R), track)
    return as_matrix(track[len(piv) :], n - len(piv), n)


def kernel(A) -> Lattice:
    """Integer kernel ``{x : A x = 0}`` with a saturated basis.

    Rows are first thinned to a set independent modulo a large prime; the
    candidate kernel is then checked against every row exactly and the
    thinning is repaired if the prime happened to divide a minor.
    """
    A = as_matrix(A)
    m, n = A.shape
    if m == 0 or n == 0:
        return Lattice(n, identity(n))
    chosen = _modp_pivot_rows(A)
    while True:
        R = [[int(x) for x in A[i]] for i in chosen]
        K = _kernel_of_independent(R, n)
        if K.shape[0] == 0:
            return Lattice(n, K)
        residual = matmul(A, K.T)
        bad = [i for i in range(m) if any(residual[i])]
        if not bad:
            return Lattice(n, K)
        chosen = sorted(set(chosen) | {bad[0]})


def free_quotient(S, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Projection onto ``Z^n / colspan(S)`` when that quotient is free.

    Returns ``(P, L)`` with ``P @ S == 0``, ``P @ L == I`` and ``ker P`` equal
    to the column span of ``S``.  When the span has an echelon basis with unit
    pivots the quotient basis is the set of remaining standard basis vectors;
    otherwise it comes from the Smith form.  Raises ``ValueError`` when the
    quotient has torsion.
    """
    S = as_matrix(S, n, None) if np.size(S) else zeros(n, 0)
    if S.shape[1] == 0:
        return identity(n), identity(n)
    torsion = [d for d in cokernel_invariants(S) if d]
    if torsion:
        raise ValueError(f"quotient has torsion invariants {torsion}")
    rows = [[int(S[i, j]) for i in range(n)] for j in range(S.shape[1])]
    piv = _echelon(rows, n)
    basis = rows[: len(piv)]
    if all(abs(basis[k][c]) == 1 for k, c in enumerate(piv)):
        free = [i for i in range(n) if i not in piv]
        E = zeros(n, n)
        for k, c in enumerate(piv):
            E[:, c] = basis[k]
        for i in free:
            E[i, i] = 1
        Einv = integer_inverse(E)
        P = Einv[free, :]
        L = identity(n)[:, free]
        return P, L
    U, D, V = smith_normal_form(S)
    r = sum(1 for d in _diagonal(D) if d)
    Uinv = integer_inverse(U)
    return U[r:, :].copy(), Uinv[:, r:].copy()
