from __future__ import annotations

import random
from itertools import combinations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lmtopo.complex import TwoComplex, build_complex

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@st.composite
def face_sets(draw, max_vertices: int = 8, max_faces: int = 12, min_faces: int = 1):
    n = draw(st.integers(3 if min_faces <= 1 else 4, max_vertices))
    triples = list(combinations(range(n), 3))
    picked = draw(
        st.lists(st.sampled_from(triples), min_size=min_faces, max_size=min(max_faces, len(triples)), unique=True)
    )
    return sorted(picked)


@st.composite
def pure_complexes(draw, max_vertices: int = 8, max_faces: int = 12, min_faces: int = 1) -> TwoComplex:
    return build_complex(draw(face_sets(max_vertices, max_faces, min_faces)))


@st.composite
def any_complexes(draw, max_vertices: int = 8, max_faces: int = 10) -> TwoComplex:
    faces = draw(face_sets(max_vertices, max_faces, min_faces=0))
    n = max([max(f) for f in faces], default=2) + 1
    pairs = list(combinations(range(n + 2), 2))
    extra = draw(st.lists(st.sampled_from(pairs), max_size=4, unique=True))
    iso = draw(st.lists(st.integers(0, n + 3), max_size=3))
    return build_complex(faces, extra, iso)


def random_faces(rng: random.Random, n: int, p: float) -> list[tuple[int, int, int]]:
    return [t for t in combinations(range(n), 3) if rng.random() < p]


def random_pure(rng: random.Random, n: int, p: float) -> TwoComplex:
    faces = random_faces(rng, n, p)
    while not faces:
        faces = random_faces(rng, n, p)
    return build_complex(faces)
