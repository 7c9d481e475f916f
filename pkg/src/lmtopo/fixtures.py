"""Deterministic constructors for the canonical complexes.

Identification fixtures (Z2Sphere, Z3Sphere) start from a stacked sphere and
add subdivisions until a simplicial quotient exists, so ``k`` is a lower
bound on the number of subdivisions actually used.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .complex import Face, TwoComplex, build_complex, relabel

TETRA_FACES: tuple[Face, ...] = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))

# hemi-icosahedron: the antipodal quotient of the icosahedron
RP2_FACES: tuple[Face, ...] = (
    (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
    (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5),
)

# Moebius-Kantor style 7-vertex torus: translates of {0,1,3} and {0,2,3}
TORUS_FACES: tuple[Face, ...] = tuple(
    tuple(sorted(((i + a) % 7, (i + b) % 7, (i + c) % 7)))  # type: ignore[misc]
    for i in range(7)
    for a, b, c in ((0, 1, 3), (0, 2, 3))
)

MAX_PADDING = 40
ATTEMPTS_PER_SIZE = 50


class FixtureError(RuntimeError):
    pass


@dataclass(frozen=True)
class FixtureKind:
    tag: str
    k: int = 0
    m: int = 0

    def __post_init__(self) -> None:
        tags = {"TetraSphere", "StackedSphere", "RP2Six", "Z2Sphere", "Z3Sphere", "Z4", "Torus7", "Moore"}
        if self.tag not in tags:
            raise ValueError(f"unknown fixture {self.tag!r}")
        if self.k < 0:
            raise ValueError("subdivision count must be >= 0")
        if self.tag == "Moore" and self.m < 2:
            raise ValueError("Moore surface needs m >= 2")

    @classmethod
    def parse(cls, text: str) -> "FixtureKind":
        """'RP2Six', 'StackedSphere(3)', 'Moore(4)' and so on."""
        text = text.strip()
        if "(" in text:
            name, arg = text.split("(", 1)
            arg = arg.rstrip(")").strip()
            try:
                val = int(arg)
            except ValueError:
                raise ValueError(f"bad fixture parameter in {text!r}") from None
            if name == "Moore":
                return cls(name, m=val)
            return cls(name, k=val)
        return cls(text)


def tetra_sphere() -> TwoComplex:
    return build_complex(TETRA_FACES)


def rp2_six() -> TwoComplex:
    return build_complex(RP2_FACES)


def torus7() -> TwoComplex:
    return build_complex(TORUS_FACES)


def _stacked_faces(k: int, rng: random.Random) -> list[Face]:
    faces = list(TETRA_FACES)
    nxt = 4
    for _ in range(k):
        a, b, c = faces.pop(rng.randrange(len(faces)))
        faces += [(a, b, nxt), (a, c, nxt), (b, c, nxt)]
        nxt += 1
    return faces


def stacked_sphere(k: int, seed: int = 0) -> TwoComplex:
    """Boundary of the tetrahedron after k random stellar face subdivisions."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return build_complex(_stacked_faces(k, random.Random(seed)))


def _distances(X: TwoComplex, s: int) -> dict[int, int]:
    dist = {s: 0}
    q = deque([s])
    while q:
        u = q.popleft()
        for w in X.neighbors[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def _compact(X: TwoComplex) -> TwoComplex:
    return relabel(X, {x: i for i, x in enumerate(X.sorted_vertices)})


def _padded_search(k: int, seed: int, attempt):
    for pad in range(MAX_PADDING + 1):
        for t in range(ATTEMPTS_PER_SIZE):
            rng = random.Random(f"{seed}:{k}:{pad}:{t}")
            S = build_complex(_stacked_faces(k + pad, rng))
            out = attempt(S, rng)
            if out is not None:
                return out
    raise FixtureError(f"no simplicial quotient found for k={k} within {MAX_PADDING} extra subdivisions")


def z2_sphere(k: int, seed: int = 0) -> TwoComplex:
    """Stacked sphere with two vertices at distance >= 3 identified."""

    def attempt(S: TwoComplex, rng: random.Random):
        pairs = []
        for x in S.sorted_vertices:
            d = _distances(S, x)
            pairs += [(x, y) for y in S.sorted_vertices if y > x and d[y] >= 3]
        if not pairs:
            return None
        x, y = pairs[rng.randrange(len(pairs))]
        return _compact(relabel(S, {y: x}))

    return _padded_search(k, seed, attempt)


def z3_sphere(k: int, seed: int = 0) -> TwoComplex:
    """Stacked sphere with adjacent edges (v,a), (v,b) folded together by a -> b.

    Needs a, b non-adjacent with v as their only common neighbour, so the
    quotient stays simplicial and exactly one edge gets degree 4.
    """

    def attempt(S: TwoComplex, rng: random.Random):
        triples = []
        for v in S.sorted_vertices:
            for a, b in combinations(sorted(S.neighbors[v]), 2):
                if b not in S.neighbors[a] and S.neighbors[a] & S.neighbors[b] == {v}:
                    triples.append((v, a, b))
        if not triples:
            return None
        v, a, b = triples[rng.randrange(len(triples))]
        return _compact(relabel(S, {a: b}))

    return _padded_search(k, seed, attempt)


def z4() -> TwoComplex:
    """The 6-vertex projective plane plus a cone on its first non-face triangle."""
    P = rp2_six()
    tri = next(t for t in combinations(range(6), 3) if t not in P.faces)
    a, b, c = tri
    return build_complex(list(RP2_FACES) + [(a, b, 6), (a, c, 6), (b, c, 6)])


def moore(m: int) -> TwoComplex:
    """Moore surface: a disc whose 3m-gon boundary wraps m times around a triangle.

    Labels: circle 0..2, outer ring 3..3m+2, inner ring 3m+3..3m+5, centre 3m+6.
    The three circle edges have degree m.
    """
    if m < 2:
        raise ValueError("Moore surface needs m >= 2")
    n = 3 * m
    c = lambda i: i % 3  # noqa: E731  boundary vertex b_i lands on c_(i mod 3)
    r = lambda i: 3 + i % n  # noqa: E731
    s = lambda j: 3 + n + j % 3  # noqa: E731
    z = 3 + n + 3
    faces = []
    for i in range(n):
        faces.append((c(i), c(i + 1), r(i)))
        faces.append((r(i), c(i + 1), r(i + 1)))
        faces.append((r(i), r(i + 1), s(i // m)))
    for j in range(3):
        faces.append((r((j + 1) * m), s(j), s(j + 1)))
        faces.append((s(j), s(j + 1), z))
    return build_complex(faces)


def fixture(kind: FixtureKind | str, seed: int = 0) -> TwoComplex:
    if isinstance(kind, str):
        kind = FixtureKind.parse(kind)
    tag = kind.tag
    if tag == "TetraSphere":
        return tetra_sphere()
    if tag == "StackedSphere":
        return stacked_sphere(kind.k, seed)
    if tag == "RP2Six":
        return rp2_six()
    if tag == "Z2Sphere":
        return z2_sphere(kind.k, seed)
    if tag == "Z3Sphere":
        return z3_sphere(kind.k, seed)
    if tag == "Z4":
        return z4()
    if tag == "Torus7":
        return torus7()
    return moore(kind.m)
