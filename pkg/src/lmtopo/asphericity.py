"""Small-witness search, the asphericity criterion and aspherification.

A witness is a closed subcomplex with at most ``face_budget`` faces that is
a sphere, a projective plane, a Z2 or a Z3.  The first three have every edge
of degree 2; a Z3 has exactly one edge of degree 4.  Both families are
enumerated by canonical growth: starting from a fixed seed, the search
always extends the open edge with the fewest admissible faces, and must put
exactly one face on it.  Every closed set is reached along exactly one
branch, so no memo table is needed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

import numpy as np

from .complex import (
    Edge,
    Face,
    TwoComplex,
    boundary_edges,
    face_edges,
    remove_face,
    subcomplex,
    two_core,
)
from .cycles import (
    PROJECTIVE_PLANE,
    SPHERE,
    Z2,
    Z3,
    Z4,
    ClassificationError,
    SpaceType,
    classify_minimal_cycle,
    deletable_faces,
    find_minimal_cycle,
    is_disc,
    recognize_space,
)
from .homology import b2 as betti2, betti, integral_h1, TORSION_FACE_LIMIT
from .invariants import _boundary_span
from .kernels import growth

WITNESS_KINDS = (SPHERE, PROJECTIVE_PLANE, Z2, Z3)


@dataclass(frozen=True)
class AsphericityBudget:
    epsilon: Fraction

    def __post_init__(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.face_budget < 4:
            raise ValueError("face budget below 4 (epsilon larger than 1/2)")

    @property
    def face_budget(self) -> int:
        return math.ceil(2 / Fraction(self.epsilon))

    @classmethod
    def parse(cls, text: str | Fraction | float) -> "AsphericityBudget":
        return cls(Fraction(text) if not isinstance(text, str) else Fraction(text.strip()))


@dataclass(frozen=True)
class Witness:
    kind: str
    faces: tuple[Face, ...]

    @property
    def complex(self) -> TwoComplex:
        return subcomplex(self.faces)


# ---------------------------------------------------------------- growth engine


class _GrowthTable:
    """Dense indexing of an edge -> faces table for the growth kernel.

    A grower enumerates face sets in which every touched edge reaches its
    target degree exactly (2 unless overridden), using faces with index above
    ``min_index`` that are not banned.  ``va * v + vb`` is a lower bound on
    the final face count of a set spanning v vertices.
    """

    def __init__(self, edge_faces: dict[Edge, tuple[Face, ...]]) -> None:
        self.faces = sorted({f for fs in edge_faces.values() for f in fs})
        self.face_id = {f: i for i, f in enumerate(self.faces)}
        self.edges = sorted({e for f in self.faces for e in face_edges(f)})
        self.edge_id = {e: i for i, e in enumerate(self.edges)}
        verts = sorted({x for f in self.faces for x in f})
        vid = {x: i for i, x in enumerate(verts)}
        self.nvertices = len(verts)
        m = len(self.faces)
        self.fedges = np.array([[self.edge_id[e] for e in face_edges(f)] for f in self.faces], dtype=np.int32).reshape(m, 3)
        self.fverts = np.array([[vid[x] for x in f] for f in self.faces], dtype=np.int32).reshape(m, 3)
        incident: list[list[int]] = [[] for _ in self.edges]
        for i in range(m):
            for e in self.fedges[i]:
                incident[e].append(i)
        self.eptr = np.zeros(len(self.edges) + 1, dtype=np.int32)
        self.eptr[1:] = np.cumsum([len(ids) for ids in incident])
        self.eface = np.array([i for ids in incident for i in ids], dtype=np.int32)
        self.nodes = 0

    def banned(self, pred: Callable[[Face], bool]) -> np.ndarray:
        return np.array([pred(f) for f in self.faces], dtype=np.int8)

    def target(self, overrides: dict[Edge, int]) -> np.ndarray:
        t = np.full(len(self.edges), 2, dtype=np.int32)
        for e, k in overrides.items():
            if e in self.edge_id:
                t[self.edge_id[e]] = k
        return t

    def run(
        self,
        start: Iterable[Face],
        emit: Callable[[list[Face]], bool],
        budget: int,
        target: np.ndarray,
        banned: np.ndarray,
        min_index: int,
        va: int,
        vb: int,
    ) -> bool:
        """Grow from ``start``; ``emit`` returns True to stop the search."""
        faces = self.faces

        def callback(ids: list[int]) -> bool:
            return bool(emit([faces[i] for i in ids]))

        g = growth(self.fedges, self.fverts, self.eptr, self.eface, target, banned,
                   min_index, budget, va, vb, self.nvertices, callback)
        try:
            return g.run([self.face_id[f] for f in start])
        finally:
            self.nodes += g.nodes


# ---------------------------------------------------------------- witness search


def _core_edge_faces(Y: TwoComplex) -> dict[Edge, tuple[Face, ...]]:
    core = two_core(Y)
    table: dict[Edge, list[Face]] = {}
    for f in sorted(core):
        for e in face_edges(f):
            table.setdefault(e, []).append(f)
    return {e: tuple(fs) for e, fs in table.items()}


def _pseudo_surface_sets(table: _GrowthTable, budget: int, stop_first: Callable[[list[Face]], bool]) -> bool:
    """Closed face sets with every edge of degree exactly 2."""
    target = table.target({})
    banned = np.zeros(len(table.faces), dtype=np.int8)
    for i, seed in enumerate(table.faces):
        if table.run([seed], stop_first, budget, target, banned, i, 2, -4):
            return True
    return False


def _z3_candidate_sets(table: _GrowthTable, budget: int, stop_first) -> bool:
    """Closed face sets with one edge of degree 4 and all others of degree 2."""
    for x, ei in table.edge_id.items():
        fs = [table.faces[i] for i in table.eface[table.eptr[ei] : table.eptr[ei + 1]]]
        if len(fs) < 4:
            continue
        target = table.target({x: 4})
        banned = table.banned(lambda g: x in face_edges(g))
        for quad in combinations(fs, 4):
            if table.run(quad, stop_first, budget, target, banned, -1, 2, -2):
                return True
    return False


def find_witnesses(Y: TwoComplex, budget: AsphericityBudget | int, mode: str = "all") -> list[Witness]:
    """Spheres, projective planes, Z2s and Z3s in Y within the face budget.

    ``mode="first"`` stops at the first witness in search order (seeds in
    lexicographic order, degree-2 family before the Z3 family).  In ``all``
    mode witnesses are sorted by size, then by face list.  A Z4 within budget
    shows up through the projective plane it contains.
    """
    B = budget.face_budget if isinstance(budget, AsphericityBudget) else int(budget)
    if mode not in ("first", "all"):
        raise ValueError(f"mode must be 'first' or 'all', got {mode!r}")
    table = _GrowthTable(_core_edge_faces(Y))
    found: list[Witness] = []

    def make_emit(kinds: tuple[str, ...]):
        def emit(faces: list[Face]) -> bool:
            t = recognize_space(subcomplex(faces))
            if t.tag in kinds:
                found.append(Witness(t.tag, tuple(sorted(faces))))
                return mode == "first"
            return False

        return emit

    if not _pseudo_surface_sets(table, B, make_emit((SPHERE, PROJECTIVE_PLANE, Z2))):
        _z3_candidate_sets(table, B, make_emit((Z3,)))
    if mode == "all":
        found.sort(key=lambda w: (len(w.faces), w.faces))
    return found


def closed_sets_bruteforce(Y: TwoComplex, max_faces: int) -> list[Witness]:
    """Independent oracle: every edge-connected face set of the 2-core up to
    ``max_faces`` faces, kept when closed and recognized as a witness kind."""
    core = sorted(two_core(Y))
    index = {f: i for i, f in enumerate(core)}
    adj: list[set[int]] = [set() for _ in core]
    table: dict[Edge, list[int]] = {}
    for i, f in enumerate(core):
        for e in face_edges(f):
            table.setdefault(e, []).append(i)
    for ids in table.values():
        for a in ids:
            adj[a].update(b for b in ids if b != a)
    out: list[Witness] = []
    seen: set[frozenset[int]] = set()

    def visit(sub: frozenset[int]) -> None:
        faces = [core[i] for i in sub]
        X = subcomplex(faces)
        if boundary_edges(X):
            return
        t = recognize_space(X)
        if t.tag in WITNESS_KINDS:
            out.append(Witness(t.tag, tuple(sorted(faces))))

    # plain breadth-first closure over connected sets; fine for tiny budgets
    frontier = {frozenset([i]) for i in range(len(core))}
    while frontier:
        nxt = set()
        for sub in frontier:
            if sub in seen:
                continue
            seen.add(sub)
            visit(sub)
            if len(sub) < max_faces:
                for i in sub:
                    for j in adj[i]:
                        if j not in sub:
                            nxt.add(sub | {j})
        frontier = nxt
    del index
    out.sort(key=lambda w: (len(w.faces), w.faces))
    return out


# ---------------------------------------------------------------- criterion


@dataclass(frozen=True)
class AsphericityVerdict:
    aspherical_by_criterion: bool
    witness: Witness | None
    note: str = (
        "criterion verdict: equivalent to asphericity asymptotically almost surely for "
        "subcomplexes of Y(n,p) with p << n^(-1/2-epsilon); not a proof for arbitrary complexes"
    )

    @property
    def label(self) -> str:
        if self.aspherical_by_criterion:
            return "CriterionAspherical"
        return f"NotAspherical({self.witness.kind})"


def check_aspherical(Y: TwoComplex, budget: AsphericityBudget | int) -> AsphericityVerdict:
    ws = find_witnesses(Y, budget, mode="first")
    if ws:
        return AsphericityVerdict(False, ws[0])
    return AsphericityVerdict(True, None)


# ---------------------------------------------------------------- aspherification


@dataclass(frozen=True)
class DeletionStep:
    step: int
    witness_kind: str
    witness_faces: tuple[Face, ...]
    deleted_face: Face
    b2_after: int


@dataclass
class AspherifyResult:
    complex: TwoComplex
    log: list[DeletionStep]
    b2_before: int
    b2_after: int
    remaining_witnesses: list[Witness] = field(default_factory=list)

    @property
    def deletions(self) -> int:
        return len(self.log)

    def log_csv(self) -> str:
        lines = ["step,witness_kind,witness_faces,deleted_face,b2_after"]
        for s in self.log:
            wf = " ".join("-".join(map(str, f)) for f in s.witness_faces)
            lines.append(f"{s.step},{s.witness_kind},{wf},{'-'.join(map(str, s.deleted_face))},{s.b2_after}")
        return "\n".join(lines) + "\n"


def _z4_completion(
    Y: TwoComplex, P: Witness, budget: int
) -> tuple[TwoComplex, SpaceType] | None:
    """A disc D in Y attached to the projective plane P along a triangle that
    is nonzero in H1(P; F2), with f(P) + f(D) within budget."""
    room = budget - len(P.faces)
    if room < 1:
        return None
    Pc = P.complex
    span = _boundary_span(Pc, 2)
    eidx = Pc.edge_index
    pfaces = set(P.faces)
    table = _GrowthTable(Y.edge_faces)
    for tri in combinations(Pc.sorted_vertices, 3):
        if tri in pfaces:
            continue
        tedges = face_edges(tri)  # type: ignore[arg-type]
        if any(e not in Pc.edges for e in tedges):
            continue
        if span.contains({eidx[e]: 1 for e in tedges}):
            continue
        others = Pc.vertices - set(tri)
        T = set(tedges)
        hit: list = []

        def emit(faces: list[Face]) -> bool:
            D = subcomplex(faces)
            if boundary_edges(D) != T or not is_disc(D):
                return False
            Z = subcomplex(set(faces) | pfaces)
            t = recognize_space(Z)
            if t.tag == Z4:
                hit.append((Z, t))
                return True
            return False

        target = table.target({e: 1 for e in T})
        banned = table.banned(lambda g, o=others: g in pfaces or bool(set(g) & o))
        for d in Y.edge_faces.get(tedges[0], ()):
            if d in pfaces or set(d) & others:
                continue
            if table.run([d], emit, room, target, banned, -1, 2, -5):
                return hit[0]
    return None


def aspherify(
    Y: TwoComplex,
    budget: AsphericityBudget | int,
    seed: int | None = None,
    rule: str = "lex",
    verify: bool = True,
) -> AspherifyResult:
    """Delete one null-bounding face from each small minimal cycle until the
    only witnesses left (if any) are projective planes.

    ``rule="lex"`` deletes the smallest eligible face, ``rule="random"`` an
    eligible face drawn with a generator seeded by ``seed``.  Vertices and
    edges are never removed.  With ``verify`` every deletion is checked to
    lower b2 by exactly one.
    """
    if rule not in ("lex", "random"):
        raise ValueError(f"unknown deletion rule {rule!r}")
    if rule == "random" and seed is None:
        raise ValueError("random deletion rule needs a seed")
    B = budget.face_budget if isinstance(budget, AsphericityBudget) else int(budget)
    rng = random.Random(seed) if rule == "random" else None
    witnesses = find_witnesses(Y, B, mode="all")
    X = Y
    start_b2 = betti2(Y)
    current = start_b2
    log: list[DeletionStep] = []
    # a completion that fails in X also fails in every subcomplex of X
    no_completion: set[tuple[Face, ...]] = set()
    while True:
        alive = X.faces
        target = None
        for w in witnesses:
            if w.kind == PROJECTIVE_PLANE or not alive.issuperset(w.faces):
                continue
            mc = find_minimal_cycle(w.complex)
            if mc is None:
                raise ClassificationError(f"witness {w.kind} carries no 2-cycle")
            target = (w, mc.complex, classify_minimal_cycle(mc))
            break
        if target is None:
            for w in witnesses:
                if w.kind != PROJECTIVE_PLANE or w.faces in no_completion or not alive.issuperset(w.faces):
                    continue
                hit = _z4_completion(X, w, B)
                if hit is None:
                    no_completion.add(w.faces)
                else:
                    Z, _ = hit
                    target = (w, Z, classify_minimal_cycle(Z))
                    break
        if target is None:
            break
        w, C, t = target
        if t.tag not in (SPHERE, Z2, Z3, Z4):
            raise ClassificationError(f"witness classified as {t}")
        eligible = deletable_faces(C, t)
        face = eligible[0] if rng is None else eligible[rng.randrange(len(eligible))]
        X = remove_face(X, face)
        current -= 1
        if verify:
            actual = betti2(X)
            if actual != current:
                raise AssertionError(f"b2 after deleting {face} is {actual}, expected {current}")
        log.append(DeletionStep(len(log) + 1, t.tag, tuple(sorted(C.faces)), face, current))
    remaining = [w for w in witnesses if X.faces.issuperset(w.faces)]
    return AspherifyResult(X, log, start_b2, current, remaining)


# ---------------------------------------------------------------- reporting


@dataclass(frozen=True)
class CdReport:
    rp2_witness: bool
    aspherified: bool
    deletions: int
    b2_after: int
    b1_after: int
    h1_torsion: tuple[int, ...] | None
    conclusion: str


def cd_report(Y: TwoComplex, budget: AsphericityBudget | int) -> CdReport:
    """Cohomological-dimension evidence from the aspherification pipeline.

    All conclusions are conditional on the asymptotic regime in which the
    witness criterion characterizes asphericity.
    """
    res = aspherify(Y, budget)
    rp2 = any(w.kind == PROJECTIVE_PLANE for w in res.remaining_witnesses)
    X = res.complex
    _, b1, _ = betti(X)
    tors = integral_h1(X) if X.f <= TORSION_FACE_LIMIT else None
    parts: list[str] = []
    if rp2:
        parts.append("RP2 witness present; 2-torsion evidence in pi_1")
    else:
        parts.append(f"no RP2 witness; aspherified after {res.deletions} deletions; cd <= 2")
    if res.b2_after > 0:
        parts.append(f"b2 = {res.b2_after} > 0: pi_1 not free")
    elif not rp2:
        parts.append(f"b2 = 0: cd <= 1 or 2 per b1 = {b1}")
    parts.append("conditional on the a.a.s. regime of the witness criterion")
    conclusion = "; ".join(p for p in parts if p)
    return CdReport(rp2, not rp2, res.deletions, res.b2_after, b1, tors, conclusion)
