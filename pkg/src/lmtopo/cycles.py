"""Minimal 2-cycles, recognition of the canonical closed complexes, and
wedge decompositions into strong components.

Recognition is by explicit surgery: the singular vertex of a Z2 is cut open,
the folded vertex of a Z3 is split along the two loops of its link, and a Z4
is cut along its triangle of degree-3 edges into a projective plane and a
disc.  Each surgery must land on a recognized sphere, projective plane or
disc, so every positive verdict is backed by a homeomorphism.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any

from .complex import (
    Edge,
    Face,
    TwoComplex,
    boundary_edges,
    build_complex,
    cut_open,
    edge_degrees,
    face_components,
    face_edges,
    is_closed,
    is_connected,
    is_pure,
    link,
    strong_components,
    StrongComponent,
    subcomplex,
)
from .homology import b2, euler, rational_cycle
from .invariants import _boundary_span

SPHERE = "Sphere"
PROJECTIVE_PLANE = "ProjectivePlane"
TORUS = "Torus"
OTHER_SURFACE = "OtherClosedSurface"
Z2 = "Z2"
Z3 = "Z3"
Z4 = "Z4"
NOT_RECOGNIZED = "NotRecognized"
NOT_APPLICABLE = "NotApplicable"

MINIMAL_TYPES = frozenset({SPHERE, Z2, Z3, Z4})


class ClassificationError(AssertionError):
    """A minimal cycle with mu > 1/2 outside the four known types."""


@dataclass(frozen=True)
class SpaceType:
    tag: str
    orientable: bool | None = None
    chi: int | None = None
    evidence: dict[str, Any] = field(default_factory=dict, compare=False, hash=False)

    def __str__(self) -> str:
        if self.tag == OTHER_SURFACE:
            kind = "orientable" if self.orientable else "non-orientable"
            return f"{self.tag}({kind}, chi={self.chi})"
        return self.tag


@dataclass(frozen=True)
class MinimalCycle:
    complex: TwoComplex
    classification: SpaceType | None = None


# ---------------------------------------------------------------- surfaces


def _orientable(X: TwoComplex) -> bool:
    """Propagate coherent orientations across degree-2 edges."""
    sign: dict[Face, int] = {}

    def coef(f: Face, e: Edge) -> int:
        ab, ac, bc = face_edges(f)
        return -1 if e == ac else 1

    for start in X.sorted_faces:
        if start in sign:
            continue
        sign[start] = 1
        q = deque([start])
        while q:
            f = q.popleft()
            for e in face_edges(f):
                for g in X.edge_faces[e]:
                    if g == f:
                        continue
                    want = -sign[f] * coef(f, e) * coef(g, e)
                    if g not in sign:
                        sign[g] = want
                        q.append(g)
                    elif sign[g] != want:
                        return False
    return True


def _classify_surface(X: TwoComplex) -> SpaceType:
    chi = euler(X)
    orient = _orientable(X)
    if orient and chi == 2:
        return SpaceType(SPHERE, True, 2)
    if not orient and chi == 1:
        return SpaceType(PROJECTIVE_PLANE, False, 1)
    if orient and chi == 0:
        return SpaceType(TORUS, True, 0)
    return SpaceType(OTHER_SURFACE, orient, chi)


def is_closed_surface(X: TwoComplex) -> bool:
    degs = edge_degrees(X)
    if any(d != 2 for d in degs.values()):
        return False
    return all(link(X, v).is_cycle() for v in X.vertices)


def _recognize_surface(X: TwoComplex) -> SpaceType | None:
    if X.faces and is_pure(X) and is_connected(X) and is_closed_surface(X):
        return _classify_surface(X)
    return None


def is_disc(X: TwoComplex) -> bool:
    """Connected surface with one boundary circle and Euler characteristic 1."""
    if not X.faces or not is_pure(X) or not is_connected(X):
        return False
    degs = edge_degrees(X)
    if any(d > 2 for d in degs.values()):
        return False
    for v in X.vertices:
        L = link(X, v)
        if not (L.is_cycle() or L.is_path()):
            return False
    return euler(X) == 1


# ---------------------------------------------------------------- recognition


def _split_vertex(X: TwoComplex, u: int) -> TwoComplex | None:
    """Split u along the two loops of its figure-eight link."""
    L = link(X, u)
    if not L.is_figure_eight():
        return None
    hub = next(x for x, n in L.adjacency.items() if len(n) == 4)
    rest = L.nodes - {hub}
    # components of the link minus the hub
    side: dict[int, int] = {}
    k = 0
    for s in sorted(rest):
        if s in side:
            continue
        stack = [s]
        side[s] = k
        while stack:
            x = stack.pop()
            for y in L.adjacency[x]:
                if y != hub and y not in side:
                    side[y] = k
                    stack.append(y)
        k += 1
    if k != 2:
        return None
    fresh = max(X.vertices) + 1
    faces = []
    for f in X.sorted_faces:
        if u in f:
            a, b = (x for x in f if x != u)
            node = a if a != hub else b
            if side[node] == 1:
                f = tuple(fresh if x == u else x for x in f)
        faces.append(f)
    return build_complex(faces)


def _recognize_z3(X: TwoComplex, degs: dict[Edge, int]) -> SpaceType | None:
    four = [e for e, d in degs.items() if d == 4]
    if len(four) != 1 or any(d not in (2, 4) for d in degs.values()):
        return None
    x, y = four[0]
    if not (link(X, x).is_figure_eight() and link(X, y).is_figure_eight()):
        return None
    for v in X.sorted_vertices:
        if v not in (x, y) and not link(X, v).is_cycle():
            return None
    for u in (x, y):
        S = _split_vertex(X, u)
        if S is not None and (t := _recognize_surface(S)) is not None and t.tag == SPHERE:
            return SpaceType(Z3, evidence={"edge": four[0], "folded_vertex": u})
    return None


def _recognize_z2(X: TwoComplex) -> SpaceType | None:
    singular = []
    for v in X.sorted_vertices:
        L = link(X, v)
        if L.is_cycle():
            continue
        if L.is_disjoint_cycles(2):
            singular.append(v)
        else:
            return None
    if len(singular) != 1:
        return None
    S, _ = cut_open(X)
    t = _recognize_surface(S)
    if t is not None and t.tag == SPHERE:
        return SpaceType(Z2, evidence={"singular_vertex": singular[0]})
    return None


def _f2_nontrivial_loop(P: TwoComplex, loop_edges: list[Edge]) -> bool:
    span = _boundary_span(P, 2)
    eidx = P.edge_index
    vec = {eidx[e]: 1 for e in loop_edges}
    return not span.contains(vec)


def _recognize_z4(X: TwoComplex, degs: dict[Edge, int]) -> SpaceType | None:
    three = sorted(e for e, d in degs.items() if d == 3)
    if len(three) != 3 or any(d not in (2, 3) for d in degs.values()):
        return None
    tri_vertices = sorted({x for e in three for x in e})
    if len(tri_vertices) != 3:
        return None
    for v in tri_vertices:
        if not link(X, v).is_theta():
            return None
    E = set(three)
    # sheets: faces joined through edges off the triangle
    sheet_of: dict[Face, int] = {}
    sheets = face_components_avoiding(X, E)
    for i, sh in enumerate(sheets):
        for f in sh:
            sheet_of[f] = i
    choices = [X.edge_faces[e] for e in three]
    tried = set()
    for pick in product(*choices):
        chosen = frozenset(sheet_of[f] for f in pick)
        if chosen in tried:
            continue
        tried.add(chosen)
        Dfaces = frozenset(f for i in chosen for f in sheets[i])
        Pfaces = X.faces - Dfaces
        if not Pfaces:
            continue
        if any(sum(1 for f in X.edge_faces[e] if f in Dfaces) != 1 for e in three):
            continue
        D, P = subcomplex(Dfaces), subcomplex(Pfaces)
        if boundary_edges(D) != E or not is_disc(D):
            continue
        if D.vertices & P.vertices != set(tri_vertices) or D.edges & P.edges != E:
            continue
        t = _recognize_surface(P)
        if t is None or t.tag != PROJECTIVE_PLANE:
            continue
        if not _f2_nontrivial_loop(P, three):
            continue
        return SpaceType(
            Z4,
            evidence={
                "triangle": tuple(tri_vertices),
                "disc_faces": tuple(sorted(Dfaces)),
                "projective_faces": tuple(sorted(Pfaces)),
            },
        )
    return None


def face_components_avoiding(X: TwoComplex, cut: set[Edge]) -> list[frozenset[Face]]:
    """Face classes under adjacency through edges not in ``cut``."""
    parent = {f: f for f in X.sorted_faces}

    def find(a: Face) -> Face:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e, fs in X.edge_faces.items():
        if e in cut:
            continue
        for g in fs[1:]:
            ra, rb = find(fs[0]), find(g)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[Face, set[Face]] = {}
    for f in X.sorted_faces:
        groups.setdefault(find(f), set()).add(f)
    return [frozenset(groups[r]) for r in sorted(groups)]


def recognize_space(X: TwoComplex) -> SpaceType:
    """Decide whether a closed connected pure complex is one of the catalogued
    spaces: a closed surface, Z2, Z3 or Z4."""
    if not X.faces or not is_pure(X):
        raise ValueError("recognize_space needs a pure complex with faces")
    if not is_closed(X):
        raise ValueError("recognize_space needs a closed complex")
    if not is_connected(X):
        raise ValueError("recognize_space needs a connected complex")
    degs = edge_degrees(X)
    if all(d == 2 for d in degs.values()):
        t = _recognize_surface(X)
        if t is not None:
            return t
        t = _recognize_z2(X)
        if t is not None:
            return t
        return SpaceType(NOT_RECOGNIZED)
    for attempt in (_recognize_z3, _recognize_z4):
        t = attempt(X, degs)
        if t is not None:
            return t
    return SpaceType(NOT_RECOGNIZED)


# ---------------------------------------------------------------- minimal cycles


def _has_b2(faces: frozenset[Face]) -> bool:
    return bool(faces) and b2(subcomplex(faces)) >= 1


def find_minimal_cycle(X: TwoComplex) -> MinimalCycle | None:
    """A minimal 2-cycle inside X, or None when b2(X; Q) = 0.

    Starts from the support of a rational 2-cycle, then drops faces in
    lexicographic order whenever b2 stays positive.  A single pass suffices:
    a face that cannot be dropped from a set cannot be dropped from any
    subset of it that still carries a cycle.
    """
    z = rational_cycle(X)
    if z is None:
        return None
    support = frozenset(z)
    for f in sorted(support):
        trial = support - {f}
        if _has_b2(trial):
            support = trial
    Z = subcomplex(support)
    if not is_minimal_cycle(Z):
        raise AssertionError("extracted cycle failed the minimality check")
    return MinimalCycle(Z, None)


def is_minimal_cycle(Z: TwoComplex) -> bool:
    if b2(Z) != 1:
        return False
    return all(b2(subcomplex(Z.faces - {f})) == 0 for f in Z.sorted_faces)


def classify_minimal_cycle(Z: MinimalCycle | TwoComplex) -> SpaceType:
    C = Z.complex if isinstance(Z, MinimalCycle) else Z
    if Fraction(C.v, C.f) <= Fraction(1, 2):
        return SpaceType(NOT_APPLICABLE)
    t = recognize_space(C)
    if t.tag not in MINIMAL_TYPES:
        raise ClassificationError(
            f"minimal cycle with mu = {Fraction(C.v, C.f)} recognized as {t}; faces {C.sorted_faces}"
        )
    return t


def deletable_faces(C: TwoComplex, t: SpaceType) -> tuple[Face, ...]:
    """Faces whose boundary is null-homotopic in the complement.

    For Z4 = P u D only the disc faces are offered, so the projective plane
    survives the deletion.
    """
    if t.tag in (SPHERE, Z2, Z3):
        return C.sorted_faces
    if t.tag == Z4:
        return tuple(t.evidence["disc_faces"])
    raise ValueError(f"no deletable face for type {t}")


def deletable_face(C: MinimalCycle | TwoComplex, t: SpaceType | None = None) -> Face:
    if isinstance(C, MinimalCycle):
        t = t or C.classification
        C = C.complex
    if t is None:
        t = classify_minimal_cycle(C)
    return deletable_faces(C, t)[0]


# ---------------------------------------------------------------- wedges


@dataclass(frozen=True)
class WedgeDecomposition:
    ok: bool
    components: tuple[StrongComponent, ...]
    wedge_points: tuple[int | None, ...]
    reason: str = ""


def wedge_decomposition(X: TwoComplex) -> WedgeDecomposition:
    """Order strong components so each meets the union of its predecessors in
    exactly one vertex."""
    if not is_pure(X) or not is_connected(X):
        raise ValueError("wedge_decomposition needs a pure connected complex")
    comps = strong_components(X)
    order = [comps[0]]
    points: list[int | None] = [None]
    covered = set(comps[0].complex.vertices)
    remaining = list(comps[1:])
    while remaining:
        for i, c in enumerate(remaining):
            meet = covered & c.complex.vertices
            if len(meet) == 1:
                order.append(c)
                points.append(next(iter(meet)))
                covered |= c.complex.vertices
                del remaining[i]
                break
        else:
            return WedgeDecomposition(
                False, tuple(order), tuple(points), "a component meets the rest in two or more vertices"
            )
    return WedgeDecomposition(True, tuple(order), tuple(points))


def is_wedge_of_projective_planes(X: TwoComplex) -> bool:
    w = wedge_decomposition(X)
    if not w.ok:
        return False
    for c in w.components:
        t = _recognize_surface(c.complex)
        if t is None or t.tag != PROJECTIVE_PLANE:
            return False
    return True


__all__ = [
    "SpaceType",
    "MinimalCycle",
    "WedgeDecomposition",
    "ClassificationError",
    "recognize_space",
    "find_minimal_cycle",
    "classify_minimal_cycle",
    "deletable_face",
    "deletable_faces",
    "wedge_decomposition",
    "is_wedge_of_projective_planes",
    "is_minimal_cycle",
    "is_disc",
    "face_components",
]
