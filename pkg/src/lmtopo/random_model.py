"""The Linial-Meshulam model Y(n, p) and Monte Carlo experiments on it.

Face inclusion uses a counter-based generator: face number i (in
lexicographic order of triples) is kept iff its uniform draw
U(seed, i) < p.  The draw does not depend on p, so for a fixed seed the
complexes are nested in p, and the result never depends on sampling order
or worker count.
"""
from __future__ import annotations

import ast
import csv
import io
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .complex import TwoComplex, build_complex, is_pure
from .homology import b2 as betti2
from .invariants import count_embeddings

Prob = Union[Fraction, float]

_GOLDEN = 0x9E3779B97F4A7C15
_M64 = (1 << 64) - 1
CSV_HEADER = ("trial", "seed", "n", "p", "f2", "b2", "pattern", "embeddings", "contains", "deletions", "b2_after")


def _mix_int(z: int) -> int:
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def _mix_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def trial_seed(seed: int, trial: int) -> int:
    """Independent 64-bit seed for one trial of an experiment."""
    return _mix_int(_mix_int(seed + _GOLDEN) ^ ((trial + 1) * _GOLDEN & _M64))


def draws53(seed: int, count: int) -> np.ndarray:
    """53-bit integer draws U_i * 2**53 for counters 0..count-1."""
    key = np.uint64(_mix_int(seed + _GOLDEN))
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = _mix_array(key + idx * np.uint64(_GOLDEN))
    return h >> np.uint64(11)


def uniforms(seed: int, count: int) -> np.ndarray:
    return draws53(seed, count).astype(np.float64) * 2.0**-53


@lru_cache(maxsize=16)
def face_table(n: int) -> np.ndarray:
    """All triples a<b<c of range(n) in lexicographic order."""
    table = np.array(list(combinations(range(n), 3)), dtype=np.int64)
    return table.reshape(-1, 3)


def face_index(n: int, face: Sequence[int]) -> int:
    """Position of a sorted triple in the lexicographic list of triples."""
    a, b, c = face
    before_a = math.comb(n, 3) - math.comb(n - a, 3)
    before_b = math.comb(n - a - 1, 2) - math.comb(n - b, 2)
    return before_a + before_b + (c - b - 1)


# ---------------------------------------------------------------- probabilities


_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)


def parse_probability(text: str | float | Fraction, n: int) -> Prob:
    """Evaluate expressions like '4*n^-1', 'n^-0.8', '0.2/60' or '3/5'.

    Exact rational arithmetic is used whenever every power has an integer
    exponent; otherwise the value is a float.
    """
    if isinstance(text, (Fraction, float, int)):
        p: Prob = Fraction(text) if not isinstance(text, float) else text
    else:
        src = text.strip().replace("^", "**")
        try:
            tree = ast.parse(src, mode="eval")
        except SyntaxError:
            raise ValueError(f"cannot parse probability {text!r}") from None
        p = _eval(tree.body, n, text)
    if not 0 <= p <= 1:
        raise ValueError(f"probability out of range: {text} = {float(p):.6g}")
    return p


def _eval(node: ast.AST, n: int, text: str) -> Prob:
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        return Fraction(str(node.value)) if isinstance(node.value, float) else Fraction(node.value)
    if isinstance(node, ast.Name) and node.id == "n":
        return Fraction(n)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, n, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        x, y = _eval(node.left, n, text), _eval(node.right, n, text)
        if isinstance(node.op, ast.Add):
            return x + y
        if isinstance(node.op, ast.Sub):
            return x - y
        if isinstance(node.op, ast.Mult):
            return x * y
        if isinstance(node.op, ast.Div):
            if y == 0:
                raise ValueError(f"division by zero in {text!r}")
            return x / y
        if isinstance(y, Fraction) and y.denominator == 1 and isinstance(x, Fraction):
            if x == 0 and y < 0:
                raise ValueError(f"division by zero in {text!r}")
            return x ** int(y)
        return float(x) ** float(y)
    raise ValueError(f"unsupported token in probability {text!r}")


def format_probability(p: Prob) -> str:
    return format(float(p), ".12g")


def _threshold53(p: Prob) -> int:
    """Smallest T with draw < T  <=>  draw / 2**53 < p."""
    q = Fraction(p)
    num = q.numerator << 53
    return -(-num // q.denominator)


@dataclass(frozen=True)
class GnpParams:
    n: int
    p: Prob
    seed: int

    def __post_init__(self) -> None:
        if self.n < 4:
            raise ValueError("n must be at least 4")
        if not 0 <= self.p <= 1:
            raise ValueError("probability out of range")

    @classmethod
    def parse(cls, n: int, p: str | Prob, seed: int) -> "GnpParams":
        return cls(n, parse_probability(p, n), seed)


def sample_faces(n: int, p: Prob, seed: int) -> np.ndarray:
    table = face_table(n)
    if len(table) == 0:
        return table
    if p >= 1:
        return table
    return table[draws53(seed, len(table)) < np.uint64(_threshold53(p))]


def sample_complex(params: GnpParams | int, p: Prob | None = None, seed: int | None = None) -> TwoComplex:
    """Y(n, p): complete graph on 0..n-1 plus independently kept faces."""
    if not isinstance(params, GnpParams):
        params = GnpParams(params, p, seed)  # type: ignore[arg-type]
    n = params.n
    faces = sample_faces(n, params.p, params.seed)
    return build_complex(map(tuple, faces.tolist()), combinations(range(n), 2), range(n))


def expected_embeddings(P: TwoComplex, n: int, p: Prob) -> Prob:
    """Expected number of embeddings of P into Y(n, p)."""
    if not is_pure(P):
        raise ValueError("expected_embeddings needs a pure pattern")
    base = math.comb(n, P.v) * math.factorial(P.v)
    return base * p**P.f


# ---------------------------------------------------------------- records


@dataclass
class TrialRecord:
    trial: int
    seed: int
    n: int
    p: Prob
    f2: int | None = None
    b2: int | None = None
    pattern: str | None = None
    embeddings: int | None = None
    contains: bool | None = None
    deletions: int | None = None
    b2_after: int | None = None
    extra: dict = field(default_factory=dict)

    def row(self) -> list[str]:
        def fmt(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "1" if x else "0"
            return str(x)

        return [
            str(self.trial),
            str(self.seed),
            str(self.n),
            format_probability(self.p),
            fmt(self.f2),
            fmt(self.b2),
            fmt(self.pattern),
            fmt(self.embeddings),
            fmt(self.contains),
            fmt(self.deletions),
            fmt(self.b2_after),
        ]

    def sandwich_holds(self) -> bool:
        return self.f2 - math.comb(self.n - 1, 2) <= self.b2 <= self.f2


def records_csv(records: Iterable[TrialRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def worker_count() -> int:
    raw = os.environ.get("LMTOPO_THREADS", "")
    if not raw:
        return 1
    try:
        k = int(raw)
    except ValueError:
        raise ValueError(f"LMTOPO_THREADS must be an integer, got {raw!r}") from None
    return max(1, k)


def run_trials(fn: Callable[[int], TrialRecord], trials: int, workers: int | None = None) -> list[TrialRecord]:
    """Run fn(trial) for every trial; output order is trial order."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or trials <= 1:
        return [fn(t) for t in range(trials)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, range(trials)))


# ---------------------------------------------------------------- experiments


@dataclass(frozen=True)
class ContainmentStats:
    frequency: float
    mean: float
    variance: float
    records: tuple[TrialRecord, ...]

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance / len(self.records)) if self.records else 0.0


class _ContainmentTrial:
    def __init__(self, P: TwoComplex, params: GnpParams, name: str) -> None:
        self.P, self.params, self.name = P, params, name

    def __call__(self, t: int) -> TrialRecord:
        s = trial_seed(self.params.seed, t)
        Y = sample_complex(GnpParams(self.params.n, self.params.p, s))
        k = count_embeddings(self.P, Y)
        return TrialRecord(t, s, self.params.n, self.params.p, f2=Y.f, pattern=self.name, embeddings=k, contains=k > 0)


def containment_experiment(
    P: TwoComplex, params: GnpParams, trials: int, name: str = "pattern", workers: int | None = None
) -> ContainmentStats:
    recs = run_trials(_ContainmentTrial(P, params, name), trials, workers)
    counts = [r.embeddings for r in recs]
    mean = sum(counts) / trials if trials else 0.0
    var = sum((c - mean) ** 2 for c in counts) / (trials - 1) if trials > 1 else 0.0
    freq = sum(1 for r in recs if r.contains) / trials if trials else 0.0
    return ContainmentStats(freq, mean, var, tuple(recs))


@dataclass(frozen=True)
class B2Stats:
    mean_b2: float
    mean_f2: float
    sandwich_ok: bool
    records: tuple[TrialRecord, ...]


class _B2Trial:
    def __init__(self, params: GnpParams) -> None:
        self.params = params

    def __call__(self, t: int) -> TrialRecord:
        s = trial_seed(self.params.seed, t)
        Y = sample_complex(GnpParams(self.params.n, self.params.p, s))
        rec = TrialRecord(t, s, self.params.n, self.params.p, f2=Y.f, b2=betti2(Y))
        if not rec.sandwich_holds():
            raise AssertionError(f"b2 sandwich violated in trial {t}: f2={rec.f2}, b2={rec.b2}")
        return rec


def b2_experiment(params: GnpParams, trials: int, workers: int | None = None) -> B2Stats:
    recs = run_trials(_B2Trial(params), trials, workers)
    mb = sum(r.b2 for r in recs) / trials if trials else 0.0
    mf = sum(r.f2 for r in recs) / trials if trials else 0.0
    return B2Stats(mb, mf, all(r.sandwich_holds() for r in recs), tuple(recs))


@dataclass(frozen=True)
class AspherifyStats:
    """Aggregates of an aspherification experiment.

    ``sandwich_fraction`` is the share of trials with
    n^2 (c - 3) / 8 <= b2_after <= n^(5/2 - epsilon), c = p n.  Those bounds
    are asymptotic, so the fraction is reported and never asserted.
    """

    records: tuple[TrialRecord, ...]
    ledger_ok: bool
    fixpoint_ok: bool
    rp2_frequency: float
    sandwich_fraction: float

    def csv(self) -> str:
        return records_csv(self.records)


def _b2_after_bounds(n: int, p: Prob, epsilon: Fraction) -> tuple[float, float]:
    c = float(p) * n
    return n * n * (c - 3) / 8, n ** (2.5 - float(epsilon))


class _AspherifyTrial:
    def __init__(self, params: GnpParams, budget, check_fixpoint: bool) -> None:
        self.params, self.budget, self.check_fixpoint = params, budget, check_fixpoint

    def __call__(self, t: int) -> TrialRecord:
        from .asphericity import PROJECTIVE_PLANE, aspherify, find_witnesses

        s = trial_seed(self.params.seed, t)
        Y = sample_complex(GnpParams(self.params.n, self.params.p, s))
        res = aspherify(Y, self.budget)
        if res.b2_after != res.b2_before - res.deletions:
            raise AssertionError(f"trial {t}: b2_after {res.b2_after} != {res.b2_before} - {res.deletions}")
        rec = TrialRecord(
            t, s, self.params.n, self.params.p, f2=Y.f, b2=res.b2_before, deletions=res.deletions, b2_after=res.b2_after
        )
        remaining = sorted(w.faces for w in res.remaining_witnesses)
        rec.extra["rp2"] = any(w.kind == PROJECTIVE_PLANE for w in res.remaining_witnesses)
        rec.extra["remaining"] = len(remaining)
        rec.extra["vertex_edge_kept"] = res.complex.v == Y.v and res.complex.e == Y.e
        if self.check_fixpoint:
            again = sorted(w.faces for w in find_witnesses(res.complex, self.budget))
            rec.extra["fixpoint"] = again == remaining and all(
                w.kind == PROJECTIVE_PLANE for w in res.remaining_witnesses
            )
        return rec


def aspherify_experiment(
    params: GnpParams, budget, trials: int, workers: int | None = None, check_fixpoint: bool = True
) -> AspherifyStats:
    """Run aspherify on ``trials`` samples of Y(n, p).

    With ``check_fixpoint`` the witness search is repeated on every output;
    the fixpoint holds when it finds nothing beyond projective planes.
    """
    from .asphericity import AsphericityBudget

    if not isinstance(budget, AsphericityBudget):
        budget = AsphericityBudget.parse(budget)
    recs = run_trials(_AspherifyTrial(params, budget, check_fixpoint), trials, workers)
    lo_hi = _b2_after_bounds(params.n, params.p, budget.epsilon)
    inside = sum(1 for r in recs if lo_hi[0] <= r.b2_after <= lo_hi[1])
    return AspherifyStats(
        records=tuple(recs),
        ledger_ok=all(r.b2_after == r.b2 - r.deletions and r.extra["vertex_edge_kept"] for r in recs),
        fixpoint_ok=all(r.extra.get("fixpoint", True) for r in recs),
        rp2_frequency=sum(1 for r in recs if r.extra["rp2"]) / trials if trials else 0.0,
        sandwich_fraction=inside / trials if trials else 0.0,
    )
