"""Finite simplicial 2-complexes and their elementary structural operations."""
from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping

Edge = tuple[int, int]
Face = tuple[int, int, int]


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


def face_edges(face: Face) -> tuple[Edge, Edge, Edge]:
    a, b, c = face
    return ((a, b), (a, c), (b, c))


@dataclass(frozen=True)
class TwoComplex:
    """A simplicial complex of dimension at most 2.

    Edges are sorted pairs and faces sorted triples.  Instances are immutable;
    derived incidence tables are cached on first use.
    """

    vertices: frozenset[int]
    edges: frozenset[Edge]
    faces: frozenset[Face]

    def __post_init__(self) -> None:
        for f in self.faces:
            if not (f[0] < f[1] < f[2]):
                raise ValueError(f"face {f} is not a sorted triple of distinct vertices")
            for e in face_edges(f):
                if e not in self.edges:
                    raise ValueError(f"edge {e} of face {f} missing")
        for a, b in self.edges:
            if not a < b:
                raise ValueError(f"edge {(a, b)} is not a sorted pair of distinct vertices")
            if a not in self.vertices or b not in self.vertices:
                raise ValueError(f"endpoint of edge {(a, b)} missing")

    @property
    def v(self) -> int:
        return len(self.vertices)

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def f(self) -> int:
        return len(self.faces)

    @cached_property
    def sorted_vertices(self) -> tuple[int, ...]:
        return tuple(sorted(self.vertices))

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def sorted_faces(self) -> tuple[Face, ...]:
        return tuple(sorted(self.faces))

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.sorted_edges)}

    @cached_property
    def edge_faces(self) -> dict[Edge, tuple[Face, ...]]:
        """Faces through each edge, sorted; edges in no face are absent."""
        table: dict[Edge, list[Face]] = defaultdict(list)
        for f in self.sorted_faces:
            for e in face_edges(f):
                table[e].append(f)
        return {e: tuple(fs) for e, fs in table.items()}

    @cached_property
    def vertex_faces(self) -> dict[int, tuple[Face, ...]]:
        table: dict[int, list[Face]] = defaultdict(list)
        for f in self.sorted_faces:
            for x in f:
                table[x].append(f)
        return {x: tuple(fs) for x, fs in table.items()}

    @cached_property
    def neighbors(self) -> dict[int, frozenset[int]]:
        table: dict[int, set[int]] = {x: set() for x in self.vertices}
        for a, b in self.edges:
            table[a].add(b)
            table[b].add(a)
        return {x: frozenset(s) for x, s in table.items()}

    def degree(self, e: Edge) -> int:
        return len(self.edge_faces.get(_edge(*e), ()))

    def __repr__(self) -> str:
        return f"TwoComplex(v={self.v}, e={self.e}, f={self.f})"


EMPTY = TwoComplex(frozenset(), frozenset(), frozenset())


def build_complex(
    faces: Iterable[Iterable[int]] = (),
    extra_edges: Iterable[Iterable[int]] = (),
    extra_vertices: Iterable[int] = (),
) -> TwoComplex:
    """Close a list of faces, edges and vertices under incidence."""
    fs: set[Face] = set()
    for raw in faces:
        t = tuple(int(x) for x in raw)
        if len(t) != 3:
            raise ValueError(f"face {t} is not a triple")
        if len(set(t)) != 3:
            raise ValueError(f"degenerate face {t}")
        fs.add(tuple(sorted(t)))  # type: ignore[arg-type]
    es: set[Edge] = set()
    for f in fs:
        es.update(face_edges(f))
    for raw in extra_edges:
        t = tuple(int(x) for x in raw)
        if len(t) != 2 or t[0] == t[1]:
            raise ValueError(f"degenerate edge {t}")
        es.add(_edge(*t))
    vs: set[int] = {int(x) for x in extra_vertices}
    for a, b in es:
        vs.update((a, b))
    for x in vs:
        if x < 0:
            raise ValueError(f"negative vertex label {x}")
    return TwoComplex(frozenset(vs), frozenset(es), frozenset(fs))


def subcomplex(faces: Iterable[Face]) -> TwoComplex:
    """The pure complex generated by already-canonical faces."""
    fs = frozenset(faces)
    es = frozenset(e for f in fs for e in face_edges(f))
    vs = frozenset(x for f in fs for x in f)
    return TwoComplex(vs, es, fs)


def edge_degrees(X: TwoComplex) -> dict[Edge, int]:
    table = X.edge_faces
    return {e: len(table.get(e, ())) for e in X.sorted_edges}


def boundary_edges(X: TwoComplex) -> frozenset[Edge]:
    return frozenset(e for e, fs in X.edge_faces.items() if len(fs) == 1)


def L_value(X: TwoComplex) -> int:
    """Sum over edges of (2 - degree)."""
    return sum(2 - d for d in edge_degrees(X).values())


def is_pure(X: TwoComplex) -> bool:
    return len(X.edge_faces) == X.e and len(X.vertex_faces) == X.v


def is_closed(X: TwoComplex) -> bool:
    return not boundary_edges(X)


def pure_part(X: TwoComplex) -> TwoComplex:
    return subcomplex(X.faces)


def remove_face(X: TwoComplex, face: Iterable[int]) -> TwoComplex:
    """Delete the interior of one face; the skeleton stays."""
    sigma = tuple(sorted(int(x) for x in face))
    if sigma not in X.faces:
        raise ValueError(f"face {sigma} not in complex")
    return TwoComplex(X.vertices, X.edges, X.faces - {sigma})


def remove_faces(X: TwoComplex, faces: Iterable[Face]) -> TwoComplex:
    drop = frozenset(faces)
    missing = drop - X.faces
    if missing:
        raise ValueError(f"faces {sorted(missing)} not in complex")
    return TwoComplex(X.vertices, X.edges, X.faces - drop)


def union(*parts: TwoComplex) -> TwoComplex:
    vs: set[int] = set()
    es: set[Edge] = set()
    fs: set[Face] = set()
    for P in parts:
        vs |= P.vertices
        es |= P.edges
        fs |= P.faces
    return TwoComplex(frozenset(vs), frozenset(es), frozenset(fs))


def contains(big: TwoComplex, small: TwoComplex) -> bool:
    return small.vertices <= big.vertices and small.edges <= big.edges and small.faces <= big.faces


def relabel(X: TwoComplex, mapping: Mapping[int, int]) -> TwoComplex:
    """Apply a vertex map; identifications are allowed but must stay simplicial."""
    faces = [tuple(mapping.get(x, x) for x in f) for f in X.sorted_faces]
    edges = [tuple(mapping.get(x, x) for x in e) for e in X.sorted_edges]
    verts = [mapping.get(x, x) for x in X.sorted_vertices]
    return build_complex(faces, edges, verts)


def normalize_labels(X: TwoComplex) -> tuple[TwoComplex, dict[int, int]]:
    """Relabel vertices to 0..v-1 in sorted order."""
    mapping = {x: i for i, x in enumerate(X.sorted_vertices)}
    return relabel(X, mapping), mapping


def vertex_components(X: TwoComplex) -> list[frozenset[int]]:
    """Path components of the 1-skeleton, ordered by smallest vertex."""
    parent = {x: x for x in X.vertices}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in X.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set[int]] = defaultdict(set)
    for x in X.vertices:
        groups[find(x)].add(x)
    return [frozenset(groups[r]) for r in sorted(groups)]


def is_connected(X: TwoComplex) -> bool:
    return len(vertex_components(X)) <= 1


# ---------------------------------------------------------------- links


@dataclass(frozen=True)
class LinkGraph:
    """Link of a vertex: nodes are opposite endpoints of incident edges,
    arcs are the opposite edges of incident faces."""

    apex: int
    nodes: frozenset[int]
    arcs: tuple[Edge, ...]

    @cached_property
    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {x: [] for x in self.nodes}
        for a, b in self.arcs:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def node_degree(self, x: int) -> int:
        return len(self.adjacency[x])

    @cached_property
    def components(self) -> list[frozenset[int]]:
        seen: set[int] = set()
        comps = []
        for s in sorted(self.nodes):
            if s in seen:
                continue
            stack = [s]
            seen.add(s)
            comp = {s}
            while stack:
                x = stack.pop()
                for y in self.adjacency[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.add(y)
                        stack.append(y)
            comps.append(frozenset(comp))
        return comps

    @property
    def sing(self) -> int:
        if not self.arcs:
            return 0
        return len(self.components) - 1

    def is_cycle(self) -> bool:
        """A single cycle: connected, every node of degree 2."""
        return (
            len(self.nodes) >= 3
            and len(self.components) == 1
            and all(len(n) == 2 for n in self.adjacency.values())
        )

    def is_path(self) -> bool:
        if len(self.components) != 1 or len(self.arcs) != len(self.nodes) - 1:
            return False
        return all(len(n) <= 2 for n in self.adjacency.values())

    def is_disjoint_cycles(self, count: int) -> bool:
        if len(self.components) != count:
            return False
        return all(len(n) == 2 for n in self.adjacency.values())

    def is_figure_eight(self) -> bool:
        degs = sorted(len(n) for n in self.adjacency.values())
        return (
            len(self.components) == 1
            and degs.count(4) == 1
            and all(d == 2 for d in degs if d != 4)
        )

    def is_theta(self) -> bool:
        degs = [len(n) for n in self.adjacency.values()]
        return (
            len(self.components) == 1
            and degs.count(3) == 2
            and all(d in (2, 3) for d in degs)
        )


def link(X: TwoComplex, v: int) -> LinkGraph:
    if v not in X.vertices:
        raise ValueError(f"unknown vertex {v}")
    nodes = frozenset(X.neighbors[v])
    arcs = []
    for f in X.vertex_faces.get(v, ()):
        a, b = (x for x in f if x != v)
        arcs.append((a, b))
    return LinkGraph(v, nodes, tuple(arcs))


def sing(X: TwoComplex, v: int) -> int:
    return link(X, v).sing


# ---------------------------------------------------------------- strong connectivity


@dataclass(frozen=True)
class StrongComponent:
    faces: frozenset[Face]

    @cached_property
    def complex(self) -> TwoComplex:
        return subcomplex(self.faces)

    @cached_property
    def min_face(self) -> Face:
        return min(self.faces)


def face_components(faces: Iterable[Face]) -> list[frozenset[Face]]:
    """Classes of faces under adjacency through shared edges, ordered by
    smallest face."""
    fs = sorted(set(faces))
    parent = {f: f for f in fs}

    def find(x: Face) -> Face:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    first: dict[Edge, Face] = {}
    for f in fs:
        for e in face_edges(f):
            g = first.setdefault(e, f)
            if g is not f:
                rf, rg = find(f), find(g)
                if rf != rg:
                    parent[max(rf, rg)] = min(rf, rg)
    groups: dict[Face, set[Face]] = defaultdict(set)
    for f in fs:
        groups[find(f)].add(f)
    return [frozenset(groups[r]) for r in sorted(groups)]


def strong_components(X: TwoComplex) -> list[StrongComponent]:
    return [StrongComponent(c) for c in face_components(X.faces)]


def is_strongly_connected(X: TwoComplex) -> bool:
    return len(face_components(X.faces)) == 1


# ---------------------------------------------------------------- cut open and collapse


def cut_open(X: TwoComplex) -> tuple[TwoComplex, dict[int, int]]:
    """Multiply each vertex once per link component.

    The copy attached to the first link component keeps the original label;
    further copies get fresh labels above the current maximum, allotted in
    order of (vertex, component).  Returns the new complex and the map from
    new labels to original ones.
    """
    if not is_pure(X):
        raise ValueError("cut_open requires a pure complex")
    nxt = (max(X.vertices) + 1) if X.vertices else 0
    where: dict[tuple[int, Face], int] = {}
    back: dict[int, int] = {}
    for v in X.sorted_vertices:
        L = link(X, v)
        comp_label: dict[int, int] = {}
        for i, comp in enumerate(L.components):
            if i == 0:
                label = v
            else:
                label = nxt
                nxt += 1
            back[label] = v
            for node in comp:
                comp_label[node] = label
        for f in X.vertex_faces[v]:
            other = next(x for x in f if x != v)
            where[(v, f)] = comp_label[other]
    faces = [tuple(where[(x, f)] for x in f) for f in X.sorted_faces]
    return build_complex(faces), back


def collapse(X: TwoComplex) -> TwoComplex:
    """Elementary collapses through free edges until none remain.

    At each step the lexicographically smallest (face, free edge) pair is
    removed.  Vertices and the remaining edges are kept.
    """
    deg = {e: len(fs) for e, fs in X.edge_faces.items()}
    faces = set(X.faces)
    edges = set(X.edges)
    heap: list[tuple[Face, Edge]] = []
    for e, fs in X.edge_faces.items():
        if len(fs) == 1:
            heap.append((fs[0], e))
    heapq.heapify(heap)
    while heap:
        f, e = heapq.heappop(heap)
        if f not in faces or deg.get(e) != 1:
            continue
        faces.discard(f)
        edges.discard(e)
        for g in face_edges(f):
            deg[g] -= 1
            if g != e and deg[g] == 1:
                for h in X.edge_faces[g]:
                    if h in faces:
                        heapq.heappush(heap, (h, g))
                        break
        del deg[e]
    return TwoComplex(X.vertices, frozenset(edges), frozenset(faces))


def two_core(X: TwoComplex) -> frozenset[Face]:
    """Faces surviving repeated removal of faces that have a degree-1 edge.

    Every closed subcomplex lies inside this set.
    """
    deg = {e: len(fs) for e, fs in X.edge_faces.items()}
    alive = set(X.faces)
    stack = [fs[0] for fs in X.edge_faces.values() if len(fs) == 1]
    while stack:
        f = stack.pop()
        if f not in alive:
            continue
        alive.discard(f)
        for g in face_edges(f):
            deg[g] -= 1
            if deg[g] == 1:
                for h in X.edge_faces[g]:
                    if h in alive:
                        stack.append(h)
                        break
    return frozenset(alive)


def full_skeleton(n: int) -> TwoComplex:
    """The complete graph on vertices 0..n-1, no faces."""
    return build_complex((), combinations(range(n), 2), range(n))
