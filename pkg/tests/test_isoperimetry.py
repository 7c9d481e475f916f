import random
from fractions import Fraction

import pytest

from lmtopo import fixtures as fx
from lmtopo.complex import build_complex, remove_face
from lmtopo.isoperimetry import (
    AREA,
    BEYOND_CAP,
    NOT_SHOWN,
    EdgeLoop,
    Move,
    canonical,
    empirical_isoperimetric,
    filling_area,
    free_reduce,
    replay_certificate,
)

TETRA = fx.tetra_sphere()


def sphere_minus_face(S, i=0):
    sigma = S.sorted_faces[i]
    return remove_face(S, sigma), sigma


def test_free_reduce():
    assert free_reduce((0, 1, 0)) == ()
    assert free_reduce((0, 1, 2, 1)) == ()
    assert free_reduce((0, 1, 2, 3, 2, 1)) == ()
    assert free_reduce((0, 1, 2)) == (0, 1, 2)
    assert free_reduce((0, 1, 2, 3, 2)) == (0, 1, 2)
    assert free_reduce((5, 0, 1, 2, 0)) == (0, 1, 2)


def test_canonical_is_rotation_and_reversal_invariant():
    w = (3, 1, 4, 2)
    base, _ = canonical(w)
    assert canonical((1, 4, 2, 3))[0] == base
    assert canonical(tuple(reversed(w)))[0] == base


def test_edge_loop_parsing_and_checks():
    assert EdgeLoop.parse("0,1,2").vertices == (0, 1, 2)
    assert EdgeLoop((0, 1, 0)).vertices == (0, 1)
    with pytest.raises(ValueError, match="cannot parse"):
        EdgeLoop.parse("0,x")
    X = build_complex([(0, 1, 2)])
    with pytest.raises(ValueError, match="not an edge"):
        filling_area(X, (0, 1, 3))


def test_backtrack_has_area_zero():
    r = filling_area(build_complex([(0, 1, 2)]), (0, 1, 0))
    assert r.outcome == AREA and r.area == 0 and r.label == "Area(0)"


def test_tetra_minus_face():
    X, sigma = sphere_minus_face(TETRA)
    r = filling_area(X, sigma)
    assert r.label == "Area(3)"
    assert replay_certificate(X, sigma, r.certificate)
    assert replay_certificate(X, sigma, r.certificate_text().splitlines())
    assert not replay_certificate(X, sigma, r.certificate[:-1])


def test_stacked_sphere_minus_face():
    S = fx.stacked_sphere(1)
    X, sigma = sphere_minus_face(S)
    r = filling_area(X, sigma, 10, 12)
    assert r.area == 5 and replay_certificate(X, sigma, r.certificate)


@pytest.mark.parametrize("k,i", [(0, 3), (1, 2), (2, 0), (3, 5), (4, 1), (8, 0)])
def test_sphere_minus_face_exactness(k, i):
    S = fx.stacked_sphere(k, seed=k)
    X, sigma = sphere_minus_face(S, i)
    r = filling_area(X, sigma, S.f, 12)
    assert r.area == S.f - 1 and replay_certificate(X, sigma, r.certificate)


def test_cap_verdicts():
    S = fx.stacked_sphere(3)
    X, sigma = sphere_minus_face(S)
    r = filling_area(X, sigma, area_cap=4, length_cap=12)
    assert r.outcome == BEYOND_CAP and r.upper_bound >= S.f - 1
    assert replay_certificate(X, sigma, r.certificate)
    P = fx.rp2_six()
    r = filling_area(P, (0, 1, 3))
    assert r.outcome == NOT_SHOWN and "H1(X; Z)" in r.reason
    r = filling_area(fx.torus7(), fx.torus7().sorted_faces[0][:2] + (fx.torus7().sorted_faces[0][2],), 0)
    assert r.outcome in (BEYOND_CAP, AREA)


def test_nontrivial_loop_not_shown():
    T = fx.torus7()
    from lmtopo.invariants import systole

    loop = systole(T, "Z").cycle
    r = filling_area(T, loop)
    assert r.outcome == NOT_SHOWN and "H1(X; Q)" in r.reason


def test_move_lines():
    m = Move.parse("expand 0 1 2")
    assert m.line() == "expand 0 1 2"
    with pytest.raises(ValueError):
        Move.parse("flip 0 1 2")


def test_monotone_under_inclusion():
    rng = random.Random(3)
    for _ in range(10):
        S = fx.stacked_sphere(rng.randint(1, 4), seed=rng.randint(0, 99))
        Xs, _ = sphere_minus_face(S, rng.randrange(S.f))
        f = rng.choice(Xs.sorted_faces)
        small = filling_area(Xs, f, 20, 12)
        big = filling_area(S, f, 20, 12)
        assert small.outcome == big.outcome == AREA
        assert big.area <= small.area


def test_concatenation_subadditive():
    S = fx.stacked_sphere(4, seed=2)
    X, _ = sphere_minus_face(S)
    checked = 0
    for f in X.sorted_faces:
        for g in X.sorted_faces:
            common = set(f) & set(g)
            if len(common) != 1 or f >= g:
                continue
            v = common.pop()
            a, b = [x for x in f if x != v]
            c, d = [x for x in g if x != v]
            r1 = filling_area(X, (v, a, b))
            r2 = filling_area(X, (v, c, d))
            r12 = filling_area(X, (v, a, b, v, c, d))
            if AREA == r1.outcome == r2.outcome == r12.outcome:
                assert r12.area <= r1.area + r2.area
                checked += 1
    assert checked > 5


def test_empirical_examples():
    X, _ = sphere_minus_face(TETRA)
    est = empirical_isoperimetric(X, 6, 10)
    assert est.ratio == 1 and est.area == 3 and "upper bound" in est.note
    S = fx.stacked_sphere(8)
    X, _ = sphere_minus_face(S)
    est = empirical_isoperimetric(X, 3, 19)
    assert est.ratio == Fraction(3, 19)


def test_empirical_absent_without_loops():
    ring = build_complex([], [(0, 1), (1, 2), (2, 3), (0, 3)])
    est = empirical_isoperimetric(ring, 6, 5)
    assert est.ratio is None and est.loop is None and est.loops_tried == 1


def test_torus_schedule_nonincreasing():
    T = fx.torus7()
    ratios = [empirical_isoperimetric(T, L, A).ratio for L, A in [(6, 20), (9, 40), (12, 80)]]
    assert all(r is not None for r in ratios)
    assert ratios[0] >= ratios[1] >= ratios[2]
