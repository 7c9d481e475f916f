"""Boundary matrices, Betti numbers and integral first homology.

Orientation convention: the face (a<b<c) has boundary (b,c) - (a,c) + (a,b)
and the edge (a<b) has boundary b - a.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import kernels
from .complex import Edge, Face, TwoComplex, collapse, face_edges, vertex_components

Coefficients = Union[str, int]

# Two fixed primes just below 2**62, used to cross-check rational ranks.
CHECK_PRIMES = (4611686018427387847, 4611686018427387817)

TORSION_FACE_LIMIT = 2000


class RankMismatchError(RuntimeError):
    """Rational rank disagrees with a modular rank; indicates a kernel bug."""


class SizeGuardExceeded(ValueError):
    """Input too large for an exact computation with a hard size guard."""


@dataclass(frozen=True)
class SparseMatrix:
    """Integer matrix in compressed-row form."""

    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    shape: tuple[int, int]

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for r in range(self.shape[0]):
            for k in range(self.indptr[r], self.indptr[r + 1]):
                out[r, self.indices[k]] += self.data[k]
        return out

    def rows(self) -> list[dict[int, int]]:
        out = []
        for r in range(self.shape[0]):
            lo, hi = self.indptr[r], self.indptr[r + 1]
            out.append({int(j): int(x) for j, x in zip(self.indices[lo:hi], self.data[lo:hi])})
        return out


@dataclass(frozen=True)
class BoundaryMatrices:
    """d1 is edges x vertices, d2 is faces x edges (rows are boundaries)."""

    d1: SparseMatrix
    d2: SparseMatrix
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...]


def _csr(rows: list[list[tuple[int, int]]], ncols: int) -> SparseMatrix:
    indptr = np.zeros(len(rows) + 1, dtype=np.int64)
    idx: list[int] = []
    dat: list[int] = []
    for i, row in enumerate(rows):
        for j, x in row:
            idx.append(j)
            dat.append(x)
        indptr[i + 1] = len(idx)
    return SparseMatrix(
        indptr, np.asarray(idx, dtype=np.int64), np.asarray(dat, dtype=np.int64), (len(rows), ncols)
    )


def d2_matrix(X: TwoComplex, faces: Sequence[Face] | None = None) -> SparseMatrix:
    eidx = X.edge_index
    fs = X.sorted_faces if faces is None else faces
    rows = []
    for f in fs:
        ab, ac, bc = face_edges(f)
        rows.append([(eidx[bc], 1), (eidx[ac], -1), (eidx[ab], 1)])
    return _csr(rows, X.e)


def boundary_matrices(X: TwoComplex) -> BoundaryMatrices:
    vidx = {x: i for i, x in enumerate(X.sorted_vertices)}
    d1 = _csr([[(vidx[b], 1), (vidx[a], -1)] for a, b in X.sorted_edges], X.v)
    return BoundaryMatrices(d1, d2_matrix(X), X.sorted_vertices, X.sorted_edges, X.sorted_faces)


def _normalize_coefficients(coefficients: Coefficients) -> int:
    """0 stands for the rationals, otherwise a prime."""
    if isinstance(coefficients, str):
        c = coefficients.strip().upper()
        if c in ("Q", "QQ", "RATIONAL"):
            return 0
        if c.startswith("F"):
            c = c[1:]
        try:
            coefficients = int(c)
        except ValueError:
            raise ValueError(f"unknown coefficients {coefficients!r}") from None
    p = int(coefficients)
    if p == 0:
        return 0
    if not is_prime(p):
        raise ValueError(f"coefficient field needs a prime, got {p}")
    return p


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact below 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def rank_matrix(M: SparseMatrix, p: int = 0, check: bool = True) -> int:
    """Rank over Q (p=0) or F_p."""
    nrows, ncols = M.shape
    if nrows == 0 or ncols == 0:
        return 0
    if p == 2:
        rows = []
        for r in range(nrows):
            mask = 0
            for k in range(M.indptr[r], M.indptr[r + 1]):
                if M.data[k] % 2:
                    mask ^= 1 << int(M.indices[k])
            rows.append(mask)
        return kernels.rank_gf2(rows)
    if p:
        return kernels.rank_mod_p(M.indptr, M.indices, M.data, nrows, ncols, p)
    r = kernels.rank_integer(M.indptr, M.indices, M.data, nrows, ncols)
    if check:
        for q in CHECK_PRIMES:
            rq = kernels.rank_mod_p(M.indptr, M.indices, M.data, nrows, ncols, q)
            if rq != r:
                raise RankMismatchError(
                    f"rank over Q is {r} but rank mod {q} is {rq} for a {nrows}x{ncols} matrix"
                )
    return r


def rank_d2(X: TwoComplex, coefficients: Coefficients = "Q") -> int:
    return rank_matrix(d2_matrix(X), _normalize_coefficients(coefficients))


def rank_d1(X: TwoComplex) -> int:
    # the same over every field: v minus the number of components
    return X.v - len(vertex_components(X))


def betti(X: TwoComplex, coefficients: Coefficients = "Q") -> tuple[int, int, int]:
    r1 = rank_d1(X)
    r2 = rank_d2(X, coefficients)
    return (X.v - r1, X.e - r1 - r2, X.f - r2)


def b2(X: TwoComplex, coefficients: Coefficients = "Q") -> int:
    return X.f - rank_d2(X, coefficients)


def euler(X: TwoComplex) -> int:
    return X.v - X.e + X.f


# ---------------------------------------------------------------- cycles


def rational_cycle(X: TwoComplex) -> dict[Face, Fraction] | None:
    """A nonzero rational 2-cycle of X, or None when b2 = 0.

    Works on the collapse of X, which carries the same 2-cycles.
    """
    Y = collapse(X)
    if not Y.faces:
        return None
    eidx = Y.edge_index
    # echelon basis: pivot column -> (row, combination of faces)
    basis: dict[int, tuple[dict[int, Fraction], dict[Face, Fraction]]] = {}
    for f in Y.sorted_faces:
        ab, ac, bc = face_edges(f)
        row = {eidx[bc]: Fraction(1), eidx[ac]: Fraction(-1), eidx[ab]: Fraction(1)}
        comb = {f: Fraction(1)}
        while row:
            j = min(row)
            if j not in basis:
                basis[j] = (row, comb)
                break
            prow, pcomb = basis[j]
            fac = row[j] / prow[j]
            for k, x in prow.items():
                y = row.get(k, 0) - fac * x
                if y:
                    row[k] = y
                else:
                    row.pop(k, None)
            for g, x in pcomb.items():
                y = comb.get(g, 0) - fac * x
                if y:
                    comb[g] = y
                else:
                    comb.pop(g, None)
        if not row:
            return comb
    return None


def boundary_of_chain(chain: dict[Face, int | Fraction]) -> dict[Edge, int | Fraction]:
    out: dict[Edge, int | Fraction] = {}
    for f, c in chain.items():
        ab, ac, bc = face_edges(f)
        for e, s in ((bc, 1), (ac, -1), (ab, 1)):
            out[e] = out.get(e, 0) + s * c
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------- torsion


def _snf_diagonal(rows: list[dict[int, int]], ncols: int) -> list[int]:
    """Nonzero invariant factors of an integer matrix given by sparse rows."""
    rows = [dict(r) for r in rows if r]
    # eliminate unit pivots sparsely; each removes one row and one column
    cols: dict[int, set[int]] = {}
    for i, r in enumerate(rows):
        for j in r:
            cols.setdefault(j, set()).add(i)
    alive = set(range(len(rows)))
    units = 0
    progress = True
    while progress:
        progress = False
        for i in sorted(alive):
            r = rows[i]
            piv = None
            for j, x in r.items():
                if x in (1, -1) and (piv is None or len(cols[j]) < len(cols[piv])):
                    piv = j
            if piv is None:
                continue
            a = r[piv]
            for s in list(cols[piv]):
                if s == i:
                    continue
                rs = rows[s]
                fac = rs[piv] * a
                for j, x in r.items():
                    y = rs.get(j, 0) - fac * x
                    if y:
                        if j not in rs:
                            cols.setdefault(j, set()).add(s)
                        rs[j] = y
                    elif j in rs:
                        del rs[j]
                        cols[j].discard(s)
                if not rs:
                    alive.discard(s)
            for j in r:
                cols[j].discard(i)
            alive.discard(i)
            rows[i] = {}
            units += 1
            progress = True
    rest = [rows[i] for i in sorted(alive) if rows[i]]
    used = sorted({j for r in rest for j in r})
    pos = {j: k for k, j in enumerate(used)}
    A = [[0] * len(used) for _ in rest]
    for i, r in enumerate(rest):
        for j, x in r.items():
            A[i][pos[j]] = x
    return [1] * units + _dense_snf(A)


def _dense_snf(A: list[list[int]]) -> list[int]:
    m = len(A)
    n = len(A[0]) if m else 0
    diag = []
    t = 0
    while t < min(m, n):
        # smallest nonzero entry as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                if A[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                A[t] = [x + y for x, y in zip(A[t], A[bad])]
                continue
            # move the smallest remaining entry of row/column t into the pivot
            best = (t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < abs(A[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < abs(A[best[0]][best[1]]):
                    best = (t, j)
            i, j = best
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def integral_h1(X: TwoComplex, max_faces: int = TORSION_FACE_LIMIT) -> tuple[int, ...]:
    """Torsion coefficients of H1(X; Z), sorted ascending.

    Raises SizeGuardExceeded above ``max_faces`` faces.
    """
    if X.f > max_faces:
        raise SizeGuardExceeded(f"integral_h1: {X.f} faces exceeds the guard of {max_faces}")
    divisors = _snf_diagonal(d2_matrix(X).rows(), X.e)
    return tuple(sorted(d for d in divisors if d > 1))


@dataclass(frozen=True)
class HomologySummary:
    betti: dict[str, tuple[int, int, int]] = field(hash=False)
    h1_torsion: tuple[int, ...] | None
    euler: int


def homology_summary(
    X: TwoComplex, fields: Sequence[Coefficients] = ("Q", 2), torsion: bool = True
) -> HomologySummary:
    betti_map = {}
    for c in fields:
        key = "Q" if _normalize_coefficients(c) == 0 else f"F{_normalize_coefficients(c)}"
        betti_map[key] = betti(X, c)
    tors = None
    if torsion and X.f <= TORSION_FACE_LIMIT:
        tors = integral_h1(X)
    return HomologySummary(betti_map, tors, euler(X))


def snf_oracle(M: np.ndarray) -> list[int]:
    """Dense Smith form diagonal, used to cross-check the sparse path."""
    A = [[int(x) for x in row] for row in M]
    return _dense_snf(A)

