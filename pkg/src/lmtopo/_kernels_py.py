"""Pure-Python kernels, used when the compiled extension is absent.

Same contract as ``lmtopo._kernels``: sparse rank over F_p and over Z, and
the canonical-growth engine behind the witness search.  Rows are held as ``{column: value}``
dicts so the work stays proportional to the number of nonzeros.
"""
from __future__ import annotations

from math import gcd


def _rows(indptr, indices, data, nrows):
    rows = []
    for r in range(nrows):
        row: dict[int, int] = {}
        for k in range(int(indptr[r]), int(indptr[r + 1])):
            j = int(indices[k])
            v = row.get(j, 0) + int(data[k])
            if v:
                row[j] = v
            else:
                row.pop(j, None)
        rows.append(row)
    return rows


def _by_column(rows):
    cols: dict[int, set[int]] = {}
    for r, row in enumerate(rows):
        for j in row:
            cols.setdefault(j, set()).add(r)
    return cols


def rank_mod_p(indptr, indices, data, nrows, ncols, p):
    if nrows == 0 or ncols == 0:
        return 0
    p = int(p)
    rows = []
    for row in _rows(indptr, indices, data, nrows):
        row = {j: v % p for j, v in row.items() if v % p}
        rows.append(row)
    cols = _by_column(rows)
    alive = set(range(nrows))
    rank = 0
    for col in range(ncols):
        cand = cols.get(col, set()) & alive
        if not cand:
            continue
        pr = min(cand, key=lambda r: (len(rows[r]), r))
        alive.discard(pr)
        prow = rows[pr]
        inv = pow(prow[col], -1, p)
        for r in cand:
            if r == pr:
                continue
            row = rows[r]
            fac = row[col] * inv % p
            for j, v in prow.items():
                nv = (row.get(j, 0) - fac * v) % p
                if nv:
                    if j not in row:
                        cols.setdefault(j, set()).add(r)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    cols[j].discard(r)
        rank += 1
    return rank


def rank_integer(indptr, indices, data, nrows, ncols):
    if nrows == 0 or ncols == 0:
        return 0
    rows = _rows(indptr, indices, data, nrows)
    cols = _by_column(rows)
    alive = set(range(nrows))
    rank = 0
    for col in range(ncols):
        cand = cols.get(col, set()) & alive
        if not cand:
            continue
        pr = min(cand, key=lambda r: (abs(rows[r][col]), len(rows[r]), r))
        alive.discard(pr)
        prow = rows[pr]
        a = prow[col]
        for r in cand:
            if r == pr:
                continue
            row = rows[r]
            b = row[col]
            if a in (1, -1):
                fac = b * a
                for j, v in prow.items():
                    nv = row.get(j, 0) - fac * v
                    if nv:
                        if j not in row:
                            cols.setdefault(j, set()).add(r)
                        row[j] = nv
                    elif j in row:
                        del row[j]
                        cols[j].discard(r)
            else:
                g = gcd(a, b)
                ma, mb = a // g, b // g
                new = {j: ma * v for j, v in row.items()}
                for j, v in prow.items():
                    nv = new.get(j, 0) - mb * v
                    if nv:
                        new[j] = nv
                    else:
                        new.pop(j, None)
                content = 0
                for v in new.values():
                    content = gcd(content, v)
                if content > 1:
                    new = {j: v // content for j, v in new.items()}
                for j in row.keys() - new.keys():
                    cols[j].discard(r)
                for j in new.keys() - row.keys():
                    cols.setdefault(j, set()).add(r)
                rows[r] = new
        rank += 1
    return rank


class _Growth:
    """Canonical growth of face sets toward exact per-edge degree targets.

    Mirrors the compiled class step for step, so both enumerate the same
    sets in the same order.
    """

    def __init__(self, fedges, fverts, eptr, eface, target, banned, min_index, budget, va, vb, nvertices, callback):
        self.fedges = [tuple(int(x) for x in r) for r in fedges]
        self.fverts = [tuple(int(x) for x in r) for r in fverts]
        self.eptr = [int(x) for x in eptr]
        self.eface = [int(x) for x in eface]
        self.target = [int(x) for x in target]
        self.banned = [bool(x) for x in banned]
        self.min_index = min_index
        self.budget = budget
        self.va, self.vb = va, vb
        self.cnt = [0] * (len(self.eptr) - 1)
        self.vcnt = [0] * nvertices
        self.inF = [False] * len(self.fedges)
        self.stack: list[int] = []
        self.nv = 0
        self.nodes = 0
        self.callback = callback

    def _add(self, f: int) -> None:
        self.stack.append(f)
        self.inF[f] = True
        for e in self.fedges[f]:
            self.cnt[e] += 1
        for x in self.fverts[f]:
            if self.vcnt[x] == 0:
                self.nv += 1
            self.vcnt[x] += 1

    def _drop(self) -> None:
        f = self.stack.pop()
        self.inF[f] = False
        for e in self.fedges[f]:
            self.cnt[e] -= 1
        for x in self.fverts[f]:
            self.vcnt[x] -= 1
            if self.vcnt[x] == 0:
                self.nv -= 1

    def _fits(self, g: int) -> bool:
        if g <= self.min_index or self.inF[g] or self.banned[g]:
            return False
        cnt, target = self.cnt, self.target
        for e in self.fedges[g]:
            if cnt[e] + 1 > target[e]:
                return False
        return True

    def _rec(self) -> bool:
        self.nodes += 1
        seen = set()
        open_edges = []
        deficit = 0
        for f in self.stack:
            for e in self.fedges[f]:
                if e not in seen:
                    seen.add(e)
                    c, t = self.cnt[e], self.target[e]
                    if c < t:
                        deficit += t - c
                        open_edges.append(e)
        nf = len(self.stack)
        if nf + (deficit + 2) // 3 > self.budget or self.va * self.nv + self.vb > self.budget:
            return False
        if deficit == 0:
            return bool(self.callback(list(self.stack)))
        best_e, best_c = -1, 0
        for e in open_edges:
            c = sum(1 for j in range(self.eptr[e], self.eptr[e + 1]) if self._fits(self.eface[j]))
            if best_e < 0 or c < best_c or (c == best_c and e < best_e):
                best_e, best_c = e, c
            if c == 0:
                return False
        cands = [g for g in self.eface[self.eptr[best_e] : self.eptr[best_e + 1]] if self._fits(g)]
        for g in cands:
            self._add(g)
            stop = self._rec()
            self._drop()
            if stop:
                return True
        return False

    def run(self, start) -> bool:
        for f in start:
            self._add(int(f))
        try:
            return self._rec()
        finally:
            while self.stack:
                self._drop()
