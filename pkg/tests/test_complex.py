from itertools import combinations

import pytest
from hypothesis import given

from lmtopo import fixtures as fx
from lmtopo.complex import (
    EMPTY,
    boundary_edges,
    build_complex,
    collapse,
    cut_open,
    edge_degrees,
    face_components,
    full_skeleton,
    is_connected,
    is_pure,
    link,
    pure_part,
    relabel,
    remove_face,
    sing,
    strong_components,
    subcomplex,
    two_core,
    union,
)
from lmtopo.homology import b2, betti

from .conftest import any_complexes, pure_complexes

TETRA = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def test_build_tetra_counts():
    X = build_complex(TETRA)
    assert (X.v, X.e, X.f) == (4, 6, 4)


def test_build_closure_bookkeeping():
    X = build_complex([], [(0, 1)], [2])
    assert (X.v, X.e, X.f) == (3, 1, 0)


def test_degenerate_face_rejected():
    with pytest.raises(ValueError, match="degenerate face"):
        build_complex([(0, 1, 1)])


def test_unsorted_input_is_normalized():
    X = build_complex([(2, 0, 1), (1, 0, 2)])
    assert X.faces == {(0, 1, 2)}


def test_edge_degrees_examples():
    assert set(edge_degrees(build_complex(TETRA)).values()) == {2}
    assert set(edge_degrees(build_complex([(0, 1, 2)])).values()) == {1}
    degs = edge_degrees(fx.z4())
    assert sorted(degs.values()).count(3) == 3
    assert all(d in (2, 3) for d in degs.values())


def test_boundary_edges_examples():
    assert boundary_edges(build_complex(TETRA)) == frozenset()
    assert boundary_edges(build_complex([(0, 1, 2)])) == {(0, 1), (0, 2), (1, 2)}
    assert boundary_edges(build_complex([(0, 1, 2), (0, 1, 3)])) == {(0, 2), (1, 2), (0, 3), (1, 3)}


def test_link_of_tetra_is_triangle():
    X = build_complex(TETRA)
    for v in X.vertices:
        L = link(X, v)
        assert L.is_cycle() and len(L.nodes) == 3 and L.sing == 0


def test_z2_doubled_vertex_link():
    X = fx.z2_sphere(2)
    singular = [v for v in X.vertices if sing(X, v) > 0]
    assert len(singular) == 1
    L = link(X, singular[0])
    assert L.sing == 1 and L.is_disjoint_cycles(2)


def test_wedge_point_sing():
    X = build_complex([(0, 1, 2), (0, 3, 4)])
    assert sing(X, 0) == 1
    assert len(strong_components(X)) == 2


def test_link_unknown_vertex():
    with pytest.raises(ValueError):
        link(build_complex(TETRA), 9)


def test_strong_components_examples():
    assert len(strong_components(build_complex(TETRA))) == 1
    assert len(strong_components(fx.z2_sphere(2))) == 1


def test_cut_open_examples():
    T = build_complex(TETRA)
    C, back = cut_open(T)
    assert C == T and all(back[v] == v for v in C.vertices)
    Z = fx.z2_sphere(2)
    C, back = cut_open(Z)
    assert C.v == Z.v + 1 and C.f == Z.f
    assert all(sing(C, v) == 0 for v in C.vertices)
    W, back = cut_open(build_complex([(0, 1, 2), (0, 3, 4)]))
    assert W.v == 6 and len(strong_components(W)) == 2 and not is_connected(W)


def test_collapse_examples():
    assert collapse(build_complex([(0, 1, 2)])).f == 0
    T = build_complex(TETRA)
    assert collapse(T).faces == T.faces
    flap = build_complex(TETRA + [(0, 1, 4)])
    assert collapse(flap).faces == T.faces


def test_remove_face_examples():
    T = build_complex(TETRA)
    R = remove_face(T, (0, 1, 2))
    assert (R.v, R.e, R.f) == (4, 6, 3)
    assert R.degree((0, 1)) == 1
    for f in TETRA:
        assert b2(remove_face(T, f)) == 0


def test_pure_part_examples():
    X = build_complex([(0, 1, 2)], combinations(range(5), 2))
    P = pure_part(X)
    assert (P.v, P.e, P.f) == (3, 3, 1)
    T = build_complex(TETRA)
    assert pure_part(T) == T
    assert pure_part(EMPTY) == EMPTY


def test_full_skeleton():
    X = full_skeleton(6)
    assert (X.v, X.e, X.f) == (6, 15, 0)


def test_relabel_identification():
    X = relabel(build_complex([(0, 1, 2), (3, 4, 5)]), {3: 0})
    assert X.v == 5 and sing(X, 0) == 1


def test_two_core_drops_flaps():
    X = build_complex(TETRA + [(0, 1, 4), (4, 5, 6)])
    assert two_core(X) == frozenset(TETRA)


# ---------------------------------------------------------------- properties


@given(any_complexes())
def test_closure_holds(X):
    for f in X.faces:
        a, b, c = f
        assert {(a, b), (a, c), (b, c)} <= X.edges
    for a, b in X.edges:
        assert a in X.vertices and b in X.vertices


@given(pure_complexes())
def test_link_arcs_match_degrees(X):
    degs = edge_degrees(X)
    for v in X.vertices:
        L = link(X, v)
        assert len(L.arcs) == len(X.vertex_faces.get(v, ()))
        for w in L.nodes:
            assert L.node_degree(w) == degs[(min(v, w), max(v, w))]


@given(pure_complexes())
def test_strong_components_partition(X):
    comps = strong_components(X)
    seen = [f for c in comps for f in c.faces]
    assert len(seen) == len(set(seen)) == X.f
    assert union(*(c.complex for c in comps)) == pure_part(X)


@given(pure_complexes(max_vertices=7, max_faces=10))
def test_cut_open_removes_singularities(X):
    C, back = cut_open(X)
    assert all(sing(C, v) == 0 for v in C.vertices)
    assert sorted(tuple(sorted(back[x] for x in f)) for f in C.faces) == list(X.sorted_faces)


@given(pure_complexes(max_vertices=7, max_faces=10))
def test_collapse_preserves_homology(X):
    Y = collapse(X)
    for field in ("Q", 2, 3):
        assert betti(Y, field)[1:] == betti(X, field)[1:]
    assert is_pure(X)


@given(pure_complexes(max_vertices=7, max_faces=12))
def test_connected_nonsingular_is_strongly_connected(X):
    if is_connected(X) and all(sing(X, v) == 0 for v in X.vertices):
        assert len(strong_components(X)) == 1


@given(pure_complexes())
def test_face_components_cover(X):
    comps = face_components(X.faces)
    assert frozenset().union(*comps) == X.faces
    assert subcomplex(X.faces) == X
