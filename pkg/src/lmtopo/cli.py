"""Command-line front end: ``lmtopo <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error and 2 on a usage error.
Every randomized path requires an explicit ``--seed``.
"""
from __future__ import annotations

import argparse
import os
import sys
import traceback
from fractions import Fraction
from pathlib import Path
from typing import Sequence, TextIO

from . import io as cio
from .asphericity import AsphericityBudget, aspherify, find_witnesses
from .complex import TwoComplex, is_pure
from .cycles import NOT_APPLICABLE, classify_minimal_cycle, deletable_faces, find_minimal_cycle
from .fixtures import FixtureKind, fixture
from .homology import homology_summary
from .invariants import count_embeddings, density, mu_tilde
from .isoperimetry import EdgeLoop, filling_area
from .random_model import (
    GnpParams,
    aspherify_experiment,
    b2_experiment,
    containment_experiment,
    format_probability,
    parse_probability,
    records_csv,
    sample_complex,
)

SEEDED_FIXTURES = {"StackedSphere", "Z2Sphere", "Z3Sphere"}


class UsageError(Exception):
    pass


def _fmt_face(f) -> str:
    return " ".join(map(str, f))


def _fmt_faces(fs) -> str:
    return ";".join(_fmt_face(f) for f in fs)


def _read_complex(path: str) -> TwoComplex:
    if not Path(path).is_file():
        raise UsageError(f"no such file: {path}")
    return cio.read(path)


def _epsilon(text: str) -> AsphericityBudget:
    try:
        return AsphericityBudget.parse(text)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad --epsilon {text!r}: {e}") from None


def _params(args) -> GnpParams:
    if args.n < 4:
        raise UsageError("-n must be at least 4")
    try:
        p = parse_probability(args.p, args.n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    return GnpParams(args.n, p, args.seed)


def _pattern(spec: str, seed: int | None) -> tuple[TwoComplex, str]:
    """A pattern is a .2c file or a fixture name."""
    if Path(spec).is_file():
        return cio.read(spec), Path(spec).stem
    try:
        kind = FixtureKind.parse(spec)
    except ValueError:
        raise UsageError(f"pattern {spec!r} is neither a file nor a fixture name") from None
    if kind.tag in SEEDED_FIXTURES and seed is None:
        raise UsageError(f"fixture {kind.tag} is randomized and needs --pattern-seed")
    return fixture(kind, seed or 0), spec


def _emit(text: str, out: str | None, stdout: TextIO) -> None:
    if out:
        Path(out).write_text(text)
    else:
        stdout.write(text)


# ---------------------------------------------------------------- subcommands


def cmd_gen(args, out: TextIO) -> int:
    params = _params(args)
    Y = sample_complex(params)
    comments = [
        f"Y(n, p) sample: n={params.n} p={args.p} = {format_probability(params.p)} seed={params.seed}",
        f"v={Y.v} e={Y.e} f={Y.f}",
    ]
    text = cio.dumps(Y, comments)
    _emit(text, args.output, out)
    return 0


def cmd_analyze(args, out: TextIO) -> int:
    X = _read_complex(args.file)
    wanted = [r.strip() for r in args.report.split(",") if r.strip()]
    for r in wanted:
        if r not in ("density", "homology"):
            raise UsageError(f"unknown report {r!r} (choose density, homology)")
    if "density" in wanted:
        d = density(X)
        mu = "undefined" if d.mu is None else str(d.mu)
        out.write(f"density: v={d.v} e={d.e} f={d.f} chi={d.chi} L={d.L} mu={mu} pure={int(is_pure(X))}\n")
    if "homology" in wanted:
        h = homology_summary(X)
        for key, (b0, b1, b2) in h.betti.items():
            out.write(f"betti({key}): b0={b0} b1={b1} b2={b2}\n")
        tors = "skipped (size guard)" if h.h1_torsion is None else "{" + ",".join(map(str, h.h1_torsion)) + "}"
        out.write(f"H1 torsion: {tors}\n")
        out.write(f"euler: {h.euler}\n")
    return 0


def cmd_classify(args, out: TextIO) -> int:
    X = _read_complex(args.file)
    mc = find_minimal_cycle(X)
    if mc is None:
        out.write("no 2-cycle; b2 = 0\n")
        return 0
    C = mc.complex
    t = classify_minimal_cycle(C)
    L = sum(2 - d for d in (C.degree(e) for e in C.edges))
    if t.tag == NOT_APPLICABLE:
        out.write(f"{t.tag}; L={L}; mu={Fraction(C.v, C.f)} <= 1/2\n")
    else:
        face = deletable_faces(C, t)[0]
        out.write(f"{t}; L={L}; deletable face: {_fmt_face(face)}\n")
    out.write(f"cycle faces: {_fmt_faces(C.sorted_faces)}\n")
    return 0


def cmd_witnesses(args, out: TextIO) -> int:
    X = _read_complex(args.file)
    budget = _epsilon(args.epsilon)
    ws = find_witnesses(X, budget, mode=args.mode)
    lines = ["kind,faces,witness_faces"]
    lines += [f"{w.kind},{len(w.faces)},{_fmt_faces(w.faces)}" for w in ws]
    _emit("\n".join(lines) + "\n", args.output, out)
    if args.output:
        out.write(f"{len(ws)} witnesses (face budget {budget.face_budget})\n")
    return 0


def cmd_aspherify(args, out: TextIO) -> int:
    X = _read_complex(args.file)
    budget = _epsilon(args.epsilon)
    if args.rule == "random" and args.seed is None:
        raise UsageError("--rule random needs --seed")
    res = aspherify(X, budget, seed=args.seed, rule=args.rule)
    _emit(res.log_csv(), args.log, out)
    if args.output:
        cio.write(res.complex, args.output, [f"aspherified: {res.deletions} deletions, b2 {res.b2_before} -> {res.b2_after}"])
    rem = ",".join(w.kind for w in res.remaining_witnesses) or "none"
    sys.stderr.write(f"deletions={res.deletions} b2_before={res.b2_before} b2_after={res.b2_after} remaining={rem}\n")
    return 0


def cmd_mc(args, out: TextIO) -> int:
    params = _params(args)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    workers = args.workers
    if args.experiment == "b2":
        st = b2_experiment(params, args.trials, workers)
        recs = st.records
        summary = f"mean_b2={st.mean_b2:.6g} mean_f2={st.mean_f2:.6g} sandwich_ok={int(st.sandwich_ok)}"
    elif args.experiment == "contain":
        if not args.pattern:
            raise UsageError("mc contain needs --pattern")
        P, name = _pattern(args.pattern, args.pattern_seed)
        st = containment_experiment(P, params, args.trials, name, workers)
        recs = st.records
        summary = f"frequency={st.frequency:.6g} mean={st.mean:.6g} variance={st.variance:.6g}"
    else:
        budget = _epsilon(args.epsilon)
        st = aspherify_experiment(params, budget, args.trials, workers)
        recs = st.records
        summary = (
            f"ledger_ok={int(st.ledger_ok)} fixpoint_ok={int(st.fixpoint_ok)} rp2_frequency={st.rp2_frequency:.6g} "
            f"sandwich_fraction={st.sandwich_fraction:.6g}"
        )
    _emit(records_csv(recs), args.output, out)
    sys.stderr.write(f"n={params.n} p={args.p} = {format_probability(params.p)} seed={params.seed} {summary}\n")
    return 0


def cmd_mu_tilde(args, out: TextIO) -> int:
    X = _read_complex(args.file)
    if X.f == 0:
        raise ValueError("mu-tilde needs at least one face")
    r = mu_tilde(X)
    out.write(f"mu_tilde={r.value}\n")
    out.write(f"witness faces: {_fmt_faces(r.witness.sorted_faces)}\n")
    return 0


def cmd_filling(args, out: TextIO) -> int:
    X = _read_complex(args.file)
    try:
        loop = EdgeLoop.parse(args.loop)
    except ValueError as e:
        raise UsageError(str(e)) from None
    res = filling_area(X, loop, args.area_cap, args.length_cap)
    out.write(f"{res.label}; caps area={res.area_cap} length={res.length_cap}")
    if res.upper_bound is not None and res.outcome != "Area":
        out.write(f"; area upper bound {res.upper_bound}")
    if res.reason:
        out.write(f"; {res.reason}")
    out.write("\n")
    if args.certificate:
        Path(args.certificate).write_text(res.certificate_text())
    return 0


def cmd_contain(args, out: TextIO) -> int:
    P, name = _pattern(args.pattern, args.pattern_seed)
    X = _read_complex(args.file)
    k = count_embeddings(P, X)
    out.write(f"pattern={name} embeddings={k} contains={int(k > 0)}\n")
    return 0


def cmd_fixture(args, out: TextIO) -> int:
    try:
        kind = FixtureKind.parse(args.name)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if kind.tag in SEEDED_FIXTURES and args.seed is None:
        raise UsageError(f"fixture {kind.tag} is randomized and needs --seed")
    X = fixture(kind, args.seed or 0)
    comments = [f"fixture {args.name}" + (f" seed={args.seed}" if kind.tag in SEEDED_FIXTURES else "")]
    _emit(cio.dumps(X, comments), args.output, out)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lmtopo", description="Topology of random 2-complexes.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="subcommand")
    ap.set_defaults(subparsers=sub.choices)

    def gnp(p: argparse.ArgumentParser) -> None:
        p.add_argument("-n", type=int, required=True, help="vertex count (>= 4)")
        p.add_argument("-p", required=True, help="face probability, e.g. 0.1, 3/5 or 4*n^-1")
        p.add_argument("--seed", type=int, required=True, help="64-bit seed (required)")

    g = sub.add_parser("gen", help="sample Y(n, p) to a .2c file")
    gnp(g)
    g.add_argument("-o", "--output", help="output .2c path (default stdout)")
    g.set_defaults(func=cmd_gen)

    a = sub.add_parser("analyze", help="density and homology of a complex")
    a.add_argument("file")
    a.add_argument("--report", default="density,homology", help="comma list of density, homology")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify", help="extract a minimal cycle and classify it")
    c.add_argument("file")
    c.set_defaults(func=cmd_classify)

    w = sub.add_parser("witnesses", help="spheres, projective planes, Z2 and Z3 within the face budget")
    w.add_argument("file")
    w.add_argument("--epsilon", required=True, help="epsilon; face budget is ceil(2/epsilon)")
    w.add_argument("--mode", choices=("all", "first"), default="all")
    w.add_argument("-o", "--output", help="CSV path (default stdout)")
    w.set_defaults(func=cmd_witnesses)

    s = sub.add_parser("aspherify", help="delete faces of small minimal cycles; CSV deletion log")
    s.add_argument("file")
    s.add_argument("--epsilon", required=True)
    s.add_argument("--rule", choices=("lex", "random"), default="lex")
    s.add_argument("--seed", type=int, help="required with --rule random")
    s.add_argument("--log", help="deletion log CSV path (default stdout)")
    s.add_argument("-o", "--output", help="write the aspherified complex here")
    s.set_defaults(func=cmd_aspherify)

    m = sub.add_parser("mc", help="Monte Carlo experiments on Y(n, p), CSV output")
    m.add_argument("experiment", choices=("b2", "contain", "aspherify"))
    gnp(m)
    m.add_argument("--trials", type=int, required=True)
    m.add_argument("--pattern", help="pattern .2c file or fixture name (contain)")
    m.add_argument("--pattern-seed", type=int, help="seed for randomized pattern fixtures")
    m.add_argument("--epsilon", default="1/10", help="epsilon for the aspherify experiment")
    m.add_argument("--workers", type=int, help="worker processes (default from LMTOPO_THREADS)")
    m.add_argument("-o", "--output", help="CSV path (default stdout)")
    m.set_defaults(func=cmd_mc)

    u = sub.add_parser("mu-tilde", help="minimum vertex/face ratio over subcomplexes")
    u.add_argument("file")
    u.set_defaults(func=cmd_mu_tilde)

    f = sub.add_parser("filling", help="bounded van Kampen filling area of an edge loop")
    f.add_argument("file")
    f.add_argument("--loop", required=True, help="vertex sequence, e.g. 0,1,2")
    f.add_argument("--area-cap", type=int, default=20)
    f.add_argument("--length-cap", type=int, default=12)
    f.add_argument("--certificate", help="write the move list here")
    f.set_defaults(func=cmd_filling)

    k = sub.add_parser("contain", help="count embeddings of a pattern into a complex")
    k.add_argument("pattern", help="pattern .2c file or fixture name")
    k.add_argument("file")
    k.add_argument("--pattern-seed", type=int)
    k.set_defaults(func=cmd_contain)

    x = sub.add_parser("fixture", help="write a canonical complex")
    x.add_argument("name", help="TetraSphere, StackedSphere(k), RP2Six, Z2Sphere(k), Z3Sphere(k), Z4, Torus7, Moore(m)")
    x.add_argument("--seed", type=int, help="required for randomized fixtures")
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_fixture)
    return ap


def _origin(exc: BaseException) -> str:
    """Name of the innermost lmtopo module in the traceback."""
    name = "lmtopo"
    for frame, _ in traceback.walk_tb(exc.__traceback__):
        mod = frame.f_globals.get("__name__", "")
        if mod.startswith("lmtopo."):
            name = mod
    return name


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if os.environ.get("LMTOPO_THREADS", "").strip():
        try:
            int(os.environ["LMTOPO_THREADS"])
        except ValueError:
            sys.stderr.write("lmtopo: LMTOPO_THREADS must be an integer\n")
            return 2
    try:
        return args.func(args, out)
    except UsageError as e:
        args.subparsers[args.command].print_usage(sys.stderr)
        sys.stderr.write(f"lmtopo {args.command}: error: {e}\n")
        return 2
    except (ValueError, ArithmeticError, AssertionError, RuntimeError, OSError) as e:
        sys.stderr.write(f"{_origin(e)}: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
