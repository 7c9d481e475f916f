"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Times sparse rank over F_p and over Z on the boundary matrix of a Y(n, p)
sample, and the witness-growth engine on the 2-core of another sample.
Each pair of timings runs on identical input and the results must agree.
"""
from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from lmtopo import _kernels_py
from lmtopo.asphericity import _core_edge_faces, _GrowthTable
from lmtopo.homology import CHECK_PRIMES, d2_matrix
from lmtopo.random_model import sample_complex

try:
    from lmtopo import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def growth_run(impl, table: _GrowthTable, budget: int) -> tuple[int, int]:
    """Enumerate all closed pseudo-surface sets; returns (sets, nodes)."""
    found = [0]
    nodes = 0

    def cb(ids):
        found[0] += 1
        return False

    target = table.target({})
    banned = np.zeros(len(table.faces), dtype=np.int8)
    for i in range(len(table.faces)):
        g = impl._Growth(table.fedges, table.fverts, table.eptr, table.eface, target, banned,
                         i, budget, 2, -4, table.nvertices, cb)
        g.run([i])
        nodes += g.nodes
    return found[0], nodes


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--budget", type=int, default=10)
    args = ap.parse_args()
    if compiled is None:
        raise SystemExit("compiled extension not available; build with pip install -e . --no-build-isolation")

    Y = sample_complex(30, Fraction(1, 5), 11)
    M = d2_matrix(Y)
    rows, cols = M.shape
    print(f"d2 of Y(30, 1/5): {rows} x {cols}, {len(M.data)} nonzeros")
    cases = [
        ("rank mod p", lambda k: k.rank_mod_p(M.indptr, M.indices, M.data, rows, cols, CHECK_PRIMES[0])),
        ("rank over Z", lambda k: k.rank_integer(M.indptr, M.indices, M.data, rows, cols)),
    ]
    W = sample_complex(40, Fraction(1, 10), 3)
    table = _GrowthTable(_core_edge_faces(W))
    cases.append((f"growth (budget {args.budget})", lambda k: growth_run(k, table, args.budget)))

    print(f"{'kernel':<22}{'python s':>10}{'compiled s':>12}{'speedup':>9}")
    for name, fn in cases:
        tp, rp = best_of(lambda: fn(_kernels_py), args.repeat)
        tc, rc = best_of(lambda: fn(compiled), args.repeat)
        if rp != rc:
            raise SystemExit(f"{name}: backends disagree ({rp} vs {rc})")
        print(f"{name:<22}{tp:>10.3f}{tc:>12.4f}{tp / tc:>8.1f}x   result {rc}")


if __name__ == "__main__":
    main()
