"""Acceptance criteria 1-12, each at its stated tolerance and time limit.

Every test prints one line ``criterion N: PASS|FAIL  <detail>`` to the
terminal, outside pytest's capture.
"""
import math
import random
import time
from fractions import Fraction

import pytest

from lmtopo import fixtures as fx
from lmtopo.asphericity import AsphericityBudget, find_witnesses
from lmtopo.complex import build_complex, remove_face
from lmtopo.cycles import (
    NOT_APPLICABLE,
    classify_minimal_cycle,
    deletable_face,
    find_minimal_cycle,
    recognize_space,
)
from lmtopo.homology import b2, integral_h1
from lmtopo.invariants import (
    cheeger,
    count_embeddings,
    density,
    mu_tilde,
    mu_tilde_bruteforce,
    systole,
)
from lmtopo.isoperimetry import filling_area, replay_certificate
from lmtopo.random_model import (
    GnpParams,
    aspherify_experiment,
    b2_experiment,
    containment_experiment,
    sample_complex,
    trial_seed,
)

from .conftest import random_pure


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")

    return emit


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_01_density_identity(report):
    rng = random.Random(1)
    bad = 0
    with Clock() as c:
        for _ in range(1000):
            n = rng.randint(4, 15)
            p = rng.choice([0.1, 0.2, 0.3, 0.4, 0.5])
            X = random_pure(rng, n, p)
            d = density(X)
            if d.mu != Fraction(1, 2) + Fraction(2 * d.chi + d.L, 2 * d.f):
                bad += 1
    ok = bad == 0 and c.elapsed < 5
    report(1, ok, f"1000 complexes, {bad} identity failures, {c.elapsed:.2f}s (limit 5s)")
    assert bad == 0
    assert c.elapsed < 5


def test_criterion_02_rp2_signature(report):
    with Clock() as c:
        P = fx.rp2_six()
        d = density(P)
        sig = (
            (P.v, P.e, P.f),
            d.mu,
            mu_tilde(P).value,
            integral_h1(P),
            recognize_space(P).tag,
        )
    want = ((6, 15, 10), Fraction(3, 5), Fraction(3, 5), (2,), "ProjectivePlane")
    ok = sig == want and c.elapsed < 1
    report(2, ok, f"signature {sig}, {c.elapsed:.3f}s (limit 1s)")
    assert sig == want
    assert c.elapsed < 1


def test_criterion_03_sphere_density_family(report):
    with Clock() as c:
        got = [mu_tilde(fx.stacked_sphere(k)).value for k in range(9)]
    want = [Fraction(1, 2) + Fraction(2, 4 + 2 * k) for k in range(9)]
    ok = got == want and c.elapsed < 10
    report(3, ok, f"k=0..8 exact match {got == want}, {c.elapsed:.2f}s (limit 10s)")
    assert got == want
    assert c.elapsed < 10


def test_criterion_04_mu_tilde_oracle(report):
    rng = random.Random(4)
    mismatches = 0
    done = 0
    with Clock() as c:
        while done < 300:
            n = rng.randint(4, 9)
            faces = [t for t in _triples(n) if rng.random() < 0.3]
            if not faces or len(faces) > 12:
                continue
            X = build_complex(faces)
            if mu_tilde(X).value != mu_tilde_bruteforce(X):
                mismatches += 1
            done += 1
    ok = mismatches == 0 and c.elapsed < 60
    report(4, ok, f"300 complexes <= 12 faces, {mismatches} mismatches, {c.elapsed:.2f}s (limit 60s)")
    assert mismatches == 0
    assert c.elapsed < 60


def _triples(n):
    from itertools import combinations

    return list(combinations(range(n), 3))


def _classified_cycles():
    """Fixture cycles plus every minimal cycle with mu > 1/2 met while
    peeling 100 samples of Y(22, 0.04)."""
    out = []
    for k in (2, 4, 6):
        out.append((f"Z2Sphere({k})", "Z2", fx.z2_sphere(k)))
        out.append((f"Z3Sphere({k})", "Z3", fx.z3_sphere(k)))
    out.append(("Z4", "Z4", fx.z4()))
    out.append(("TetraSphere", "Sphere", fx.tetra_sphere()))
    samples = []
    for t in range(100):
        X = sample_complex(22, 0.04, trial_seed(5, t))
        while True:
            Z = find_minimal_cycle(X)
            if Z is None:
                break
            samples.append((X, Z.complex))
            X = remove_face(X, Z.complex.sorted_faces[0])
    return out, samples


_CACHE: dict = {}


def _criterion5_data():
    if "c5" not in _CACHE:
        t0 = time.perf_counter()
        fixtures, samples = _classified_cycles()
        verdicts = []
        for name, want, X in fixtures:
            verdicts.append((name, want, classify_minimal_cycle(X).tag, X, X))
        for X, Z in samples:
            tag = classify_minimal_cycle(Z).tag  # raises on an unexpected type
            verdicts.append(("sample", None, tag, X, Z))
        _CACHE["c5"] = (verdicts, time.perf_counter() - t0)
    return _CACHE["c5"]


def test_criterion_05_classification(report):
    verdicts, elapsed = _criterion5_data()
    wrong = [(n, w, g) for n, w, g, _, _ in verdicts if w is not None and w != g]
    sample_tags = [g for n, w, g, _, _ in verdicts if w is None]
    hot = [g for g in sample_tags if g != NOT_APPLICABLE]
    bad = [g for g in hot if g not in ("Sphere", "Z2", "Z3", "Z4")]
    ok = not wrong and not bad and elapsed < 300
    report(
        5, ok,
        f"fixtures wrong {len(wrong)}; {len(sample_tags)} sample cycles, {len(hot)} with mu > 1/2, "
        f"{len(bad)} unrecognized; {elapsed:.1f}s (limit 300s)",
    )
    assert not wrong
    assert not bad
    assert elapsed < 300


def test_criterion_06_deletable_face(report):
    verdicts, _ = _criterion5_data()
    checked = failures = 0
    for _, _, tag, X, Z in verdicts:
        if tag == NOT_APPLICABLE:
            continue
        f = deletable_face(Z)
        checked += 1
        if b2(remove_face(X, f)) != b2(X) - 1 or b2(remove_face(Z, f)) != 0:
            failures += 1
    ok = failures == 0 and checked > 0
    report(6, ok, f"{checked} classified cycles, {failures} deletions not dropping b2 by exactly 1")
    assert checked > 0
    assert failures == 0


def test_criterion_07_b2_sandwich(report):
    with Clock() as c:
        st = b2_experiment(GnpParams(30, Fraction(6, 30), 7), 50)
        lower = [r.f2 - math.comb(29, 2) for r in st.records]
        ok_sand = all(lo <= r.b2 <= r.f2 for lo, r in zip(lower, st.records))
        led = aspherify_experiment(GnpParams(30, Fraction(3, 30), 7), "1/10", 5, check_fixpoint=False)
    ok = ok_sand and led.ledger_ok and c.elapsed < 120
    report(
        7, ok,
        f"50 samples sandwich {ok_sand}; ledger b2' = b2 - k on 5 runs {led.ledger_ok}; "
        f"{c.elapsed:.1f}s (limit 120s)",
    )
    assert ok_sand
    assert led.ledger_ok
    assert c.elapsed < 120


def test_criterion_08_containment_contrast(report):
    P = fx.tetra_sphere()
    with Clock() as c:
        hi = containment_experiment(P, GnpParams(60, Fraction(5, 60), 8), 200)
        lo = containment_experiment(P, GnpParams(60, Fraction(1, 300), 8), 200)
    ok = hi.frequency >= 0.9 and lo.frequency <= 0.05 and c.elapsed < 300
    report(
        8, ok,
        f"freq {hi.frequency:.3f} at p=5/60 (>= 0.9), {lo.frequency:.3f} at p=0.2/60 (<= 0.05); "
        f"{c.elapsed:.1f}s (limit 300s)",
    )
    assert hi.frequency >= 0.9
    assert lo.frequency <= 0.05
    assert c.elapsed < 300


def test_criterion_09_expectation_calibration(report):
    face = build_complex([(0, 1, 2)])
    with Clock() as c:
        st = containment_experiment(face, GnpParams(30, Fraction(1, 4), 9), 200)
    target = math.comb(30, 3) * 6 / 4
    dev = abs(st.mean - target) / st.std_error
    ok = target == 6090 and dev <= 4 and c.elapsed < 120
    report(9, ok, f"mean {st.mean:.1f} vs 6090, {dev:.2f} standard errors (<= 4); {c.elapsed:.1f}s (limit 120s)")
    assert dev <= 4
    assert c.elapsed < 120


def test_criterion_10_isoperimetry(report):
    got = []
    with Clock() as c:
        for S in (fx.tetra_sphere(), fx.stacked_sphere(1)):
            sigma = S.sorted_faces[0]
            X = remove_face(S, sigma)
            r = filling_area(X, sigma, area_cap=10, length_cap=12)
            got.append((r.area, replay_certificate(X, sigma, r.certificate)))
    ok = got == [(3, True), (5, True)] and c.elapsed < 30
    report(10, ok, f"(area, replays) {got}, expected [(3, True), (5, True)]; {c.elapsed:.2f}s (limit 30s)")
    assert got == [(3, True), (5, True)]
    assert c.elapsed < 30


def test_criterion_11_geometric_inequalities(report):
    with Clock() as c:
        cheeger_ok = []
        for k in range(9):
            S = fx.stacked_sphere(k)
            cheeger_ok.append(cheeger(S).value <= 16 / math.sqrt(S.f))
        sys_rp2 = systole(fx.rp2_six(), 2).length
        M = fx.moore(3)
        sys_m3 = systole(M, 3).length
        sys_ok = sys_rp2 < 6 * math.sqrt(10) and sys_m3 < 6 * math.sqrt(M.f)
    ok = all(cheeger_ok) and sys_ok and c.elapsed < 60
    report(
        11, ok,
        f"Cheeger bound on k=0..8 {all(cheeger_ok)}; sys(RP2)={sys_rp2}, sys(Moore(3))={sys_m3} "
        f"below 6 sqrt(A) {sys_ok}; {c.elapsed:.1f}s (limit 60s)",
    )
    assert all(cheeger_ok)
    assert sys_ok
    assert c.elapsed < 60


def test_criterion_12_asphericity_pipeline(report):
    budget = AsphericityBudget(Fraction(1, 10))
    with Clock() as c:
        main = aspherify_experiment(GnpParams(40, Fraction(4, 40), 3), budget, 20, check_fixpoint=True)
        sparse = aspherify_experiment(GnpParams.parse(40, "n^-0.8", 3), budget, 20, check_fixpoint=True)
    # witness-free fixpoint: nothing at all left for the search to find
    left = [r.extra["remaining"] for r in main.records]
    witness_free = all(k == 0 for k in left)
    ok = main.ledger_ok and main.fixpoint_ok and witness_free and sparse.rp2_frequency <= 1 / 20 and c.elapsed < 600
    report(
        12, ok,
        f"ledger {main.ledger_ok}; search stable on output {main.fixpoint_ok}; witness-free in {sum(k == 0 for k in left)}/20 trials "
        f"(remaining projective planes {sum(left)}); RP2 frequency at n^-0.8 {sparse.rp2_frequency:.2f} "
        f"(<= 0.05); {c.elapsed:.0f}s (limit 600s)",
    )
    assert main.ledger_ok
    assert main.fixpoint_ok
    assert sparse.rp2_frequency <= 1 / 20
    assert c.elapsed < 600
    assert witness_free, "projective-plane witnesses survive aspherification at p = 4/40"
