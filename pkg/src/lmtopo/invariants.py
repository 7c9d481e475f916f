"""Density invariants, Cheeger constant, homological systole and embedding counts."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Union

import numpy as np

from .complex import (
    Edge,
    Face,
    TwoComplex,
    contains,
    edge_degrees,
    face_edges,
    is_connected,
    is_pure,
    subcomplex,
)
from .flow import max_closure
from .homology import SizeGuardExceeded, _normalize_coefficients, d2_matrix, euler, is_prime


@dataclass(frozen=True)
class DensityReport:
    v: int
    e: int
    f: int
    chi: int
    L: int
    mu: Fraction | None

    def identity_holds(self) -> bool:
        """mu = 1/2 + (2 chi + L) / (2 f); meaningful for pure complexes."""
        if self.mu is None:
            return True
        return self.mu == Fraction(1, 2) + Fraction(2 * self.chi + self.L, 2 * self.f)


def density(X: TwoComplex) -> DensityReport:
    L = sum(2 - d for d in edge_degrees(X).values())
    mu = Fraction(X.v, X.f) if X.f else None
    rep = DensityReport(X.v, X.e, X.f, euler(X), L, mu)
    if mu is not None and is_pure(X) and not rep.identity_holds():
        raise AssertionError(f"density identity fails on a pure complex: {rep}")
    return rep


@dataclass(frozen=True)
class PairDensity:
    value: Fraction
    dv: int
    df: int
    dchi: int
    dL: int

    def decomposition_holds(self) -> bool:
        """2 dv = df + 2 dchi + dL, the pure-complex counting identity."""
        return 2 * self.dv == self.df + 2 * self.dchi + self.dL


def mu_pair(S1: TwoComplex, S2: TwoComplex) -> PairDensity:
    if not contains(S1, S2):
        raise ValueError("mu_pair: second complex is not contained in the first")
    if S1.f == S2.f:
        raise ValueError("mu_pair: face counts are equal")
    d1, d2 = density(S1), density(S2)
    return PairDensity(
        Fraction(S1.v - S2.v, S1.f - S2.f),
        S1.v - S2.v,
        S1.f - S2.f,
        d1.chi - d2.chi,
        d1.L - d2.L,
    )


@dataclass(frozen=True)
class MuTilde:
    value: Fraction
    witness: TwoComplex
    iterations: int


def mu_tilde(X: TwoComplex) -> MuTilde:
    """Minimum of v(S)/f(S) over subcomplexes with at least one face.

    Dinkelbach iteration; each step maximizes t|F| - |V(F)| over face sets F
    as a maximum-weight closure (faces need their vertices).
    """
    if not X.faces:
        raise ValueError("mu_tilde needs at least one face")
    faces = X.sorted_faces
    verts = sorted({x for f in faces for x in f})
    vidx = {x: i for i, x in enumerate(verts)}
    requires = [[vidx[x] for x in f] for f in faces]
    best = list(range(len(faces)))
    t = Fraction(len(verts), len(faces))
    it = 0
    while True:
        it += 1
        profits = [t.numerator] * len(faces)
        costs = [t.denominator] * len(verts)
        value, chosen = max_closure(profits, costs, requires)
        if value <= 0 or not chosen:
            break
        nv = len({x for i in chosen for x in faces[i]})
        t_new = Fraction(nv, len(chosen))
        if t_new >= t:
            break
        t, best = t_new, chosen
    return MuTilde(t, subcomplex(faces[i] for i in best), it)


def mu_tilde_bruteforce(X: TwoComplex, max_faces: int = 20) -> Fraction:
    """Exhaustive minimum of |V(F)|/|F| over nonempty face sets."""
    if X.f == 0:
        raise ValueError("mu_tilde_bruteforce needs at least one face")
    if X.f > max_faces:
        raise SizeGuardExceeded(f"mu_tilde_bruteforce: {X.f} faces exceeds {max_faces}")
    verts = sorted({x for f in X.faces for x in f})
    if len(verts) > 64:
        raise SizeGuardExceeded("mu_tilde_bruteforce: more than 64 vertices")
    vidx = {x: i for i, x in enumerate(verts)}
    masks = np.zeros(1, dtype=np.uint64)
    sizes = np.zeros(1, dtype=np.int64)
    for f in X.sorted_faces:
        m = np.uint64(sum(1 << vidx[x] for x in f))
        masks = np.concatenate([masks, masks | m])
        sizes = np.concatenate([sizes, sizes + 1])
    counts = np.bitwise_count(masks).astype(np.int64)
    best = None
    for k in range(1, X.f + 1):
        v = int(counts[sizes == k].min())
        r = Fraction(v, k)
        if best is None or r < best:
            best = r
    return best


# ---------------------------------------------------------------- Cheeger constant


@dataclass(frozen=True)
class CheegerResult:
    value: Fraction
    witness: frozenset[Face]
    exact: bool
    visited: int


def cheeger(S: TwoComplex, budget: int = 5_000_000) -> CheegerResult:
    """min |dS|/A(S) over pure subcomplexes with 1 <= A(S) <= A(Sigma)/2.

    Restricting to strongly connected S loses nothing: boundary length and
    area are additive over strong components and each part also satisfies the
    area bound.  Those sets are enumerated exactly once each (ESU).  If more
    than ``budget`` sets would be visited, the best ratio so far is returned
    with ``exact=False``.
    """
    if not is_pure(S):
        raise ValueError("cheeger requires a pure complex")
    faces = S.sorted_faces
    cap = len(faces) // 2
    if cap < 1:
        raise ValueError("cheeger needs at least two faces")
    index = {f: i for i, f in enumerate(faces)}
    adj: list[set[int]] = [set() for _ in faces]
    for e, fs in S.edge_faces.items():
        for a in fs:
            for b in fs:
                if a != b:
                    adj[index[a]].add(index[b])
    fedges = [face_edges(f) for f in faces]

    count: dict[Edge, int] = {}
    state = {"bd": 0, "visited": 0}
    best: list = [None, frozenset()]
    sub: list[int] = []

    def add(i: int) -> None:
        for e in fedges[i]:
            c = count.get(e, 0) + 1
            count[e] = c
            if c == 1:
                state["bd"] += 1
            elif c == 2:
                state["bd"] -= 1
        sub.append(i)

    def drop(i: int) -> None:
        for e in fedges[i]:
            c = count[e] - 1
            count[e] = c
            if c == 1:
                state["bd"] += 1
            elif c == 0:
                state["bd"] -= 1
        sub.pop()

    class Exhausted(Exception):
        pass

    def extend(ext: list[int], root: int, in_sub: set[int], near: set[int]) -> None:
        state["visited"] += 1
        if state["visited"] > budget:
            raise Exhausted
        r = Fraction(state["bd"], len(sub))
        if best[0] is None or r < best[0]:
            best[0] = r
            best[1] = frozenset(faces[i] for i in sub)
        if len(sub) == cap:
            return
        ext = list(ext)
        while ext:
            w = ext.pop()
            new = [u for u in adj[w] if u > root and u not in in_sub and u not in near]
            add(w)
            in_sub.add(w)
            added = [u for u in adj[w] if u not in near]
            near.update(added)
            extend(ext + new, root, in_sub, near)
            near.difference_update(added)
            in_sub.discard(w)
            drop(w)

    exact = True
    try:
        for v in range(len(faces)):
            add(v)
            near = set(adj[v]) | {v}
            extend(sorted(u for u in adj[v] if u > v), v, {v}, near)
            drop(v)
    except Exhausted:
        exact = False
    return CheegerResult(best[0], best[1], exact, state["visited"])


def cheeger_bruteforce(S: TwoComplex) -> Fraction:
    """Exhaustive over every face subset within the area bound (small inputs)."""
    faces = S.sorted_faces
    if len(faces) > 16:
        raise SizeGuardExceeded("cheeger_bruteforce: more than 16 faces")
    cap = len(faces) // 2
    best = None
    for mask in range(1, 1 << len(faces)):
        chosen = [faces[i] for i in range(len(faces)) if mask >> i & 1]
        if len(chosen) > cap:
            continue
        cnt: dict[Edge, int] = {}
        for f in chosen:
            for e in face_edges(f):
                cnt[e] = cnt.get(e, 0) + 1
        r = Fraction(sum(1 for c in cnt.values() if c == 1), len(chosen))
        if best is None or r < best:
            best = r
    return best


# ---------------------------------------------------------------- systole

SystoleCoefficients = Union[str, int]


@dataclass(frozen=True)
class SystoleResult:
    length: int | None
    cycle: tuple[int, ...]

    @property
    def found(self) -> bool:
        return self.length is not None


def _parse_ring(coefficients: SystoleCoefficients) -> tuple[str, int]:
    """('field', p), ('Z', 0) or ('Zm', m)."""
    if isinstance(coefficients, str):
        c = coefficients.strip().upper().replace(" ", "")
        if c in ("Z", "ZZ"):
            return ("Z", 0)
        for prefix in ("Z/", "F", "ZMOD"):
            if c.startswith(prefix):
                c = c[len(prefix):]
                break
        coefficients = int(c)
    m = int(coefficients)
    if m < 2:
        raise ValueError(f"bad coefficient ring modulus {m}")
    return ("field", m) if is_prime(m) else ("Zm", m)


class _Lattice:
    """Integer row lattice in echelon form with exact membership tests."""

    def __init__(self) -> None:
        self.basis: dict[int, dict[int, int]] = {}

    def insert(self, row: dict[int, int]) -> None:
        row = {j: x for j, x in row.items() if x}
        while row:
            j = min(row)
            b = self.basis.get(j)
            if b is None:
                if row[j] < 0:
                    row = {k: -x for k, x in row.items()}
                self.basis[j] = row
                return
            a, c = b[j], row[j]
            if c % a == 0:
                q = c // a
                row = _axpy(row, b, -q)
                continue
            g, s, t = _xgcd(a, c)
            new = _lin(b, s, row, t)
            other = _lin(row, a // g, b, -(c // g))
            self.basis[j] = new
            row = other

    def contains(self, vec: dict[int, int]) -> bool:
        vec = {j: x for j, x in vec.items() if x}
        while vec:
            j = min(vec)
            b = self.basis.get(j)
            if b is None or vec[j] % b[j]:
                return False
            vec = _axpy(vec, b, -(vec[j] // b[j]))
        return True


class _FieldSpan:
    """Row span over F_p with membership tests."""

    def __init__(self, p: int) -> None:
        self.p = p
        self.basis: dict[int, dict[int, int]] = {}

    def _reduce(self, row: dict[int, int]) -> dict[int, int]:
        p = self.p
        row = {j: x % p for j, x in row.items() if x % p}
        while row:
            j = min(row)
            b = self.basis.get(j)
            if b is None:
                return row
            row = {k: x % p for k, x in _axpy(row, b, -row[j]).items() if x % p}
        return row

    def insert(self, row: dict[int, int]) -> None:
        row = self._reduce(row)
        if row:
            j = min(row)
            inv = pow(row[j], -1, self.p)
            self.basis[j] = {k: x * inv % self.p for k, x in row.items()}

    def contains(self, vec: dict[int, int]) -> bool:
        return not self._reduce(vec)


def _axpy(x: dict[int, int], y: dict[int, int], a: int) -> dict[int, int]:
    out = dict(x)
    for k, v in y.items():
        w = out.get(k, 0) + a * v
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _lin(x: dict[int, int], a: int, y: dict[int, int], b: int) -> dict[int, int]:
    out = {k: a * v for k, v in x.items()}
    return _axpy(out, y, b)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _boundary_span(X: TwoComplex, coefficients: SystoleCoefficients):
    kind, m = _parse_ring(coefficients)
    span = _FieldSpan(m) if kind == "field" else _Lattice()
    for row in d2_matrix(X).rows():
        span.insert(row)
    if kind == "Zm":
        for j in range(X.e):
            span.insert({j: m})
    return span


def cycle_vector(X: TwoComplex, loop: tuple[int, ...]) -> dict[int, int]:
    """Edge chain of a closed walk v0 -> v1 -> ... -> v0."""
    eidx = X.edge_index
    vec: dict[int, int] = {}
    k = len(loop)
    for i in range(k):
        a, b = loop[i], loop[(i + 1) % k]
        j = eidx[(a, b) if a < b else (b, a)]
        vec[j] = vec.get(j, 0) + (1 if a < b else -1)
    return {j: x for j, x in vec.items() if x}


def is_homologically_trivial(
    X: TwoComplex, loop: tuple[int, ...], coefficients: SystoleCoefficients = "Z", _span=None
) -> bool:
    span = _span or _boundary_span(X, coefficients)
    vec = cycle_vector(X, loop)
    kind, m = _parse_ring(coefficients)
    if kind != "Z":
        vec = {j: x % m for j, x in vec.items() if x % m}
    return span.contains(vec)


def systole(X: TwoComplex, coefficients: SystoleCoefficients = 2) -> SystoleResult:
    """Shortest edge loop that is nonzero in H1(X; coefficients).

    Candidates are the fundamental cycles of breadth-first trees rooted at
    every vertex, tested in order of length.  A shortest nontrivial cycle is
    always among them: splitting it along a shortest path from any of its
    vertices to the opposite edge gives two loops of no greater length whose
    classes sum to its class.
    """
    span = _boundary_span(X, coefficients)
    kind, m = _parse_ring(coefficients)
    nbrs = {x: sorted(ys) for x, ys in X.neighbors.items()}
    cands = []
    for r in X.sorted_vertices:
        dist = {r: 0}
        parent = {r: r}
        q = deque([r])
        while q:
            u = q.popleft()
            for w in nbrs[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
        for a, b in X.sorted_edges:
            if a in dist and b in dist and parent[a] != b and parent[b] != a:
                cands.append((dist[a] + dist[b] + 1, r, a, b, parent))
    cands.sort(key=lambda c: c[:4])
    seen: set[tuple] = set()
    for length, r, a, b, parent in cands:
        up = [a]
        while up[-1] != r:
            up.append(parent[up[-1]])
        down = [b]
        while down[-1] != r:
            down.append(parent[down[-1]])
        loop = tuple(reversed(up)) + tuple(down[:-1])
        vec = cycle_vector(X, loop)
        if kind != "Z":
            vec = {j: x % m for j, x in vec.items() if x % m}
        key = tuple(sorted(vec.items()))
        if key in seen:
            continue
        seen.add(key)
        if vec and not span.contains(vec):
            return SystoleResult(length, loop)
    return SystoleResult(None, ())


def simple_cycles(X: TwoComplex, max_length: int):
    """Simple edge cycles of length 3..max_length, each listed once.

    A cycle starts at its smallest vertex and its second vertex is smaller
    than its last.
    """
    nbrs = {x: sorted(ys) for x, ys in X.neighbors.items()}
    for s in X.sorted_vertices:
        path = [s]
        on = {s}

        def walk():
            u = path[-1]
            for w in nbrs[u]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    yield tuple(path)
                elif w > s and w not in on and len(path) < max_length:
                    path.append(w)
                    on.add(w)
                    yield from walk()
                    on.discard(w)
                    path.pop()

        yield from walk()


def systole_bruteforce(
    X: TwoComplex, coefficients: SystoleCoefficients = 2, max_length: int = 8
) -> SystoleResult:
    span = _boundary_span(X, coefficients)
    best = None
    for cyc in simple_cycles(X, max_length):
        if best is not None and len(cyc) >= len(best):
            continue
        if not is_homologically_trivial(X, cyc, coefficients, span):
            best = cyc
    return SystoleResult(len(best), best) if best else SystoleResult(None, ())


# ---------------------------------------------------------------- embeddings


def count_embeddings(P: TwoComplex, X: TwoComplex, max_faces: int = 30) -> int:
    """Injective vertex maps sending every face of P onto a face of X."""
    if P.f > max_faces:
        raise SizeGuardExceeded(f"count_embeddings: pattern has {P.f} > {max_faces} faces")
    if not P.faces:
        raise ValueError("count_embeddings needs a pattern with faces")
    if not is_pure(P) or not is_connected(P):
        raise ValueError("count_embeddings needs a pure connected pattern")
    # order faces so that each one after the first meets an earlier one,
    # preferring faces sharing an edge
    order: list[Face] = [P.sorted_faces[0]]
    placed = {order[0]}
    seen_v = set(order[0])
    while len(order) < P.f:
        best = None
        for f in P.sorted_faces:
            if f in placed:
                continue
            k = sum(1 for x in f if x in seen_v)
            if k and (best is None or k > best[0]):
                best = (k, f)
        order.append(best[1])
        placed.add(best[1])
        seen_v.update(best[1])

    pdeg = {x: len(P.vertex_faces[x]) for x in P.vertices}
    xdeg = {x: len(fs) for x, fs in X.vertex_faces.items()}
    xfaces = X.faces
    third: dict[Edge, tuple[int, ...]] = {
        e: tuple(next(y for y in f if y not in e) for f in fs) for e, fs in X.edge_faces.items()
    }
    by_vertex = X.vertex_faces

    phi: dict[int, int] = {}
    used: set[int] = set()

    def ok(x: int, y: int) -> bool:
        return y not in used and xdeg.get(y, 0) >= pdeg[x]

    def rec(i: int) -> int:
        if i == len(order):
            return 1
        f = order[i]
        known = [x for x in f if x in phi]
        free = [x for x in f if x not in phi]
        total = 0
        if not free:
            img = tuple(sorted(phi[x] for x in f))
            return rec(i + 1) if img in xfaces else 0
        if len(known) == 2:
            a, b = phi[known[0]], phi[known[1]]
            e = (a, b) if a < b else (b, a)
            x = free[0]
            for y in third.get(e, ()):
                if ok(x, y):
                    phi[x] = y
                    used.add(y)
                    total += rec(i + 1)
                    used.discard(y)
                    del phi[x]
            return total
        if len(known) == 1:
            a = phi[known[0]]
            cands = by_vertex.get(a, ())
        else:
            cands = X.sorted_faces
        for g in cands:
            rest = [y for y in g if y != a] if known else list(g)
            for perm in permutations(rest):
                if all(ok(x, y) for x, y in zip(free, perm)):
                    for x, y in zip(free, perm):
                        phi[x] = y
                        used.add(y)
                    total += rec(i + 1)
                    for x, y in zip(free, perm):
                        used.discard(y)
                        del phi[x]
        return total

    return rec(0)


def automorphism_count(P: TwoComplex) -> int:
    return count_embeddings(P, P)


def count_subcomplex_copies(P: TwoComplex, X: TwoComplex) -> int:
    emb = count_embeddings(P, X)
    aut = automorphism_count(P)
    if emb % aut:
        raise AssertionError("embedding count is not a multiple of |Aut|")
    return emb // aut
