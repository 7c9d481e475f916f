import math
from fractions import Fraction

import pytest

from lmtopo import fixtures as fx
from lmtopo.complex import build_complex
from lmtopo.homology import b2
from lmtopo.random_model import (
    CSV_HEADER,
    GnpParams,
    aspherify_experiment,
    b2_experiment,
    containment_experiment,
    expected_embeddings,
    face_index,
    face_table,
    format_probability,
    parse_probability,
    records_csv,
    sample_complex,
    sample_faces,
    trial_seed,
)

FACE = build_complex([(0, 1, 2)])


def test_parse_probability():
    assert parse_probability("4*n^-1", 40) == Fraction(1, 10)
    assert parse_probability("0.2/60", 60) == Fraction(1, 300)
    assert parse_probability("3/5", 10) == Fraction(3, 5)
    p = parse_probability("n^-0.8", 40)
    assert isinstance(p, float) and math.isclose(p, 40**-0.8)
    with pytest.raises(ValueError, match="probability out of range"):
        parse_probability("2", 40)
    with pytest.raises(ValueError, match="cannot parse"):
        parse_probability("4*", 40)
    with pytest.raises(ValueError, match="unsupported"):
        parse_probability("m^-1", 40)
    with pytest.raises(ValueError, match="division by zero"):
        parse_probability("1/(n-40)", 40)


def test_params_validation():
    with pytest.raises(ValueError):
        GnpParams(3, Fraction(1, 2), 0)
    assert GnpParams.parse(30, "6*n^-1", 1).p == Fraction(1, 5)


def test_extreme_probabilities():
    Y = sample_complex(12, Fraction(0), 1)
    assert (Y.v, Y.e, Y.f) == (12, 66, 0)
    Y = sample_complex(12, Fraction(1), 1)
    assert Y.f == math.comb(12, 3)


def test_face_count_moments():
    Y = sample_complex(30, Fraction(1, 2), 42)
    mean, sd = 2030, math.sqrt(4060 / 4)
    assert abs(Y.f - mean) <= 4 * sd


def test_face_index_matches_table():
    T = face_table(9)
    for i, f in enumerate(T.tolist()):
        assert face_index(9, f) == i


def test_reproducible_and_coupled():
    a = sample_faces(25, Fraction(1, 10), 5)
    assert (a == sample_faces(25, Fraction(1, 10), 5)).all()
    low = {tuple(f) for f in sample_faces(25, Fraction(1, 20), 5).tolist()}
    high = {tuple(f) for f in sample_faces(25, Fraction(1, 10), 5).tolist()}
    assert low <= high
    assert trial_seed(1, 0) != trial_seed(1, 1) and trial_seed(1, 3) == trial_seed(1, 3)


def test_expected_embeddings_examples():
    assert expected_embeddings(FACE, 10, Fraction(1, 2)) == 360
    # C(20,4) * 24 * 10^-4 = 116280 / 10^4
    assert expected_embeddings(fx.tetra_sphere(), 20, Fraction(1, 10)) == Fraction(116280, 10**4)
    p = 40 ** (-3 / 5)
    assert math.isclose(expected_embeddings(fx.rp2_six(), 40, p), math.comb(40, 6) * 720 * p**10)


def test_containment_examples():
    st = containment_experiment(FACE, GnpParams(12, Fraction(0), 1), 5)
    assert st.frequency == 0 and st.mean == 0
    st = containment_experiment(FACE, GnpParams(15, Fraction(1, 4), 2), 40, name="face")
    target = float(expected_embeddings(FACE, 15, Fraction(1, 4)))
    assert abs(st.mean - target) <= 4 * st.std_error
    assert {r.pattern for r in st.records} == {"face"}


def test_containment_monotone_in_p():
    P = fx.tetra_sphere()
    ladder = [Fraction(k, 100) for k in (2, 5, 8, 12)]
    freqs = [containment_experiment(P, GnpParams(20, p, 9), 15).frequency for p in ladder]
    assert freqs == sorted(freqs)
    counts = [[r.embeddings for r in containment_experiment(P, GnpParams(20, p, 9), 15).records] for p in ladder]
    for lo, hi in zip(counts, counts[1:]):
        assert all(a <= b for a, b in zip(lo, hi))


def test_b2_examples():
    st = b2_experiment(GnpParams(30, Fraction(1, 5), 1), 10)
    assert st.sandwich_ok and all(r.sandwich_holds() for r in st.records)
    assert all(r.b2 == b2(sample_complex(30, Fraction(1, 5), r.seed)) for r in st.records[:2])
    assert all(r.b2 == 0 for r in b2_experiment(GnpParams(10, Fraction(0), 1), 3).records)
    # full skeleton: rank d2 = C(n-1, 2), so b2 = C(n, 3) - C(n-1, 2) = C(n-1, 3)
    full = b2_experiment(GnpParams(8, Fraction(1), 1), 1).records[0]
    assert full.f2 - full.b2 == math.comb(7, 2) and full.b2 == math.comb(7, 3)


def test_csv_format():
    st = b2_experiment(GnpParams(10, Fraction(1, 3), 4), 3)
    text = records_csv(st.records)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER) == "trial,seed,n,p,f2,b2,pattern,embeddings,contains,deletions,b2_after"
    assert len(lines) == 4 and lines[1].split(",")[3] == "0.333333333333"
    assert lines[1].endswith(",,,,,")
    assert text == records_csv(b2_experiment(GnpParams(10, Fraction(1, 3), 4), 3).records)
    assert format_probability(0.1) == "0.1"


def test_parallel_matches_serial():
    params = GnpParams(14, Fraction(1, 4), 8)
    a = b2_experiment(params, 4, workers=1)
    b = b2_experiment(params, 4, workers=2)
    assert records_csv(a.records) == records_csv(b.records)


def test_aspherify_experiment_small():
    st = aspherify_experiment(GnpParams(20, Fraction(1, 10), 2), "1/10", 4)
    assert st.ledger_ok and st.fixpoint_ok
    assert all(r.b2_after == r.b2 - r.deletions for r in st.records)
    zero = aspherify_experiment(GnpParams(12, Fraction(0), 2), "1/10", 3)
    assert all(r.deletions == 0 for r in zero.records)
    assert st.csv().splitlines()[0].startswith("trial,seed")
