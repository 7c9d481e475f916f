import math
import random
from fractions import Fraction

import pytest
from hypothesis import given

from lmtopo import fixtures as fx
from lmtopo.complex import build_complex, subcomplex
from lmtopo.homology import SizeGuardExceeded
from lmtopo.invariants import (
    automorphism_count,
    cheeger,
    cheeger_bruteforce,
    count_embeddings,
    count_subcomplex_copies,
    density,
    is_homologically_trivial,
    mu_pair,
    mu_tilde,
    mu_tilde_bruteforce,
    systole,
    systole_bruteforce,
)

from .conftest import pure_complexes, random_pure

TETRA = fx.tetra_sphere()


def test_density_examples():
    d = density(TETRA)
    assert (d.v, d.f, d.L, d.chi, d.mu) == (4, 4, 0, 2, 1)
    assert density(fx.rp2_six()).mu == Fraction(3, 5)
    z = density(fx.z4())
    assert z.L == -3 and z.mu == Fraction(7, 13)
    assert density(build_complex([], [(0, 1)])).mu is None


def test_mu_pair_examples():
    r = mu_pair(fx.z4(), fx.rp2_six())
    assert r.value == Fraction(1, 3) == Fraction(1, 2) - Fraction(1, 2 * (13 - 10))
    assert r.decomposition_holds()
    flap = build_complex(list(TETRA.faces) + [(0, 1, 4)])
    assert mu_pair(flap, TETRA).value == 1


def test_mu_pair_rejections():
    with pytest.raises(ValueError, match="not contained"):
        mu_pair(TETRA, fx.rp2_six())
    with pytest.raises(ValueError, match="equal"):
        mu_pair(TETRA, TETRA)


def test_mu_tilde_examples():
    m = mu_tilde(fx.rp2_six())
    assert m.value == Fraction(3, 5) and m.witness.f == 10
    for k in range(6):
        S = fx.stacked_sphere(k)
        assert mu_tilde(S).value == Fraction(1, 2) + Fraction(2, S.f)


def test_mu_tilde_bruteforce_examples():
    assert mu_tilde_bruteforce(build_complex([(0, 1, 2)])) == 3
    assert mu_tilde_bruteforce(TETRA) == 1
    assert mu_tilde_bruteforce(fx.rp2_six()) == Fraction(3, 5)
    with pytest.raises(SizeGuardExceeded):
        mu_tilde_bruteforce(fx.stacked_sphere(10))


def test_cheeger_examples():
    c = cheeger(TETRA)
    assert c.value == 2 and c.exact and len(c.witness) == 2
    two = build_complex([(0, 1, 2), (0, 1, 3)])
    c = cheeger(two)
    assert c.value == 3 and len(c.witness) == 1


def test_cheeger_sphere_bound():
    for k in range(0, 9):
        for seed in range(2):
            S = fx.stacked_sphere(k, seed)
            assert cheeger(S).value <= 16 / math.sqrt(S.f)


def test_systole_examples():
    P = fx.rp2_six()
    s = systole(P, 2)
    assert s.length == 3 and tuple(sorted(s.cycle)) not in P.faces
    assert not systole(TETRA, 2).found and not systole(TETRA, "Z").found
    M = fx.moore(3)
    s = systole(M, 3)
    assert s.length == 3 and set(s.cycle) == {0, 1, 2}
    assert systole_bruteforce(M, 3).length == 3
    assert systole_bruteforce(P, 2, max_length=4).length == 3


def test_systole_inequality_on_cyclic_families():
    for X, ring in [(fx.rp2_six(), 2), (fx.moore(2), 2), (fx.moore(3), 3), (fx.moore(4), 4)]:
        assert systole(X, ring).length < 6 * math.sqrt(X.f)


def test_embedding_examples():
    assert count_embeddings(TETRA, TETRA) == 24
    face = build_complex([(0, 1, 2)])
    assert count_embeddings(face, TETRA) == 24
    assert count_subcomplex_copies(face, TETRA) == 4
    aut = automorphism_count(fx.rp2_six())
    assert aut == 60 and math.factorial(6) % aut == 0
    assert count_embeddings(fx.rp2_six(), fx.z4()) == 60


def test_embedding_rejects_bad_patterns():
    with pytest.raises(ValueError):
        count_embeddings(build_complex([(0, 1, 2), (3, 4, 5)]), TETRA)


# ---------------------------------------------------------------- properties


def test_density_identity_fuzz():
    rng = random.Random(1)
    for _ in range(1000):
        X = random_pure(rng, rng.randint(3, 9), rng.random() * 0.5)
        assert density(X).identity_holds()


def test_interval_property_fuzz():
    rng = random.Random(2)
    for _ in range(1000):
        X = random_pure(rng, rng.randint(4, 9), 0.1 + rng.random() * 0.4)
        faces = X.sorted_faces
        if len(faces) < 2:
            continue
        keep = rng.sample(faces, rng.randint(1, len(faces) - 1))
        S2 = subcomplex(keep)
        m1, m2 = density(X).mu, density(S2).mu
        m12 = mu_pair(X, S2).value
        assert min(m2, m12) <= m1 <= max(m2, m12)


@given(pure_complexes(max_vertices=8, max_faces=12))
def test_mu_tilde_matches_bruteforce(X):
    m = mu_tilde(X)
    assert m.value == mu_tilde_bruteforce(X)
    assert m.value <= density(X).mu
    assert density(m.witness).mu == m.value


@given(pure_complexes(max_vertices=7, max_faces=10, min_faces=2))
def test_cheeger_matches_bruteforce(X):
    c = cheeger(X)
    assert c.value == cheeger_bruteforce(X)
    W = subcomplex(c.witness)
    assert 1 <= W.f <= X.f / 2
    assert Fraction(sum(1 for d in W.edge_faces.values() if len(d) == 1), W.f) == c.value


@given(pure_complexes(max_vertices=7, max_faces=10))
def test_systole_matches_bruteforce(X):
    for ring in (2, "Z"):
        s, b = systole(X, ring), systole_bruteforce(X, ring, max_length=7)
        assert s.length == b.length
        if s.found:
            assert not is_homologically_trivial(X, s.cycle, ring)


@given(pure_complexes(max_vertices=6, max_faces=6))
def test_embeddings_aut_relation(P):
    from lmtopo.complex import is_connected

    if not is_connected(P):
        return
    X = fx.z4()
    assert count_embeddings(P, X) == automorphism_count(P) * count_subcomplex_copies(P, X)
