"""Bounded van Kampen filling areas and the empirical isoperimetric ratio.

A loop is a cyclic vertex word.  Each face {a, b, c} gives two unit-cost
moves: expand a step a->b into a->c->b, or contract a->c->b into a->b.
Backtracks a->b->a cancel for free.  Since every unit move glues one
triangle onto a van Kampen diagram, the least number of moves that reduces a
loop to the empty word is its simplicial filling area (within the caps).

The search is A* over canonical words.  The lower bound comes from 2-chains:
any filling of area A is a 2-chain c with boundary gamma and L1 norm at most
A, and c is unique up to 2-cycles.  The bound is the least L1 norm over that
coset when the cycle space has dimension at most one, and otherwise the L1
norm on the faces that no 2-cycle touches.  Each move changes the chain by
one face, so the bound is consistent and A* returns optimal areas.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .complex import Face, TwoComplex
from .invariants import is_homologically_trivial, simple_cycles

AREA = "Area"
BEYOND_CAP = "NullHomotopicBeyondCap"
NOT_SHOWN = "NotShownNullHomotopic"

DEFAULT_STATE_LIMIT = 500_000

Word = tuple[int, ...]


@dataclass(frozen=True)
class EdgeLoop:
    """Cyclic vertex sequence; the empty tuple is the constant loop.

    A closed-path spelling that repeats the start vertex at the end, such as
    (0, 1, 0), is accepted and stored without the repeat.
    """

    vertices: Word

    def __post_init__(self) -> None:
        vs = tuple(int(x) for x in self.vertices)
        if len(vs) >= 2 and vs[0] == vs[-1]:
            vs = vs[:-1]
        object.__setattr__(self, "vertices", vs)

    def __len__(self) -> int:
        return len(self.vertices)

    def steps(self) -> list[tuple[int, int]]:
        w = self.vertices
        if len(w) < 2:
            return []
        return [(w[i], w[(i + 1) % len(w)]) for i in range(len(w))]

    def check(self, X: TwoComplex) -> None:
        if len(self.vertices) == 1:
            raise ValueError("a loop needs at least two steps or none")
        for a, b in self.steps():
            if a == b or (min(a, b), max(a, b)) not in X.edges:
                raise ValueError(f"loop step {a}->{b} is not an edge of the complex")

    @classmethod
    def parse(cls, text: str) -> "EdgeLoop":
        """'0,1,2' or '0 1 2'."""
        parts = text.replace(",", " ").split()
        try:
            return cls(tuple(int(p) for p in parts))
        except ValueError:
            raise ValueError(f"cannot parse loop {text!r}") from None


@dataclass(frozen=True)
class Move:
    kind: str  # "expand" or "contract"
    a: int
    b: int
    c: int

    def line(self) -> str:
        return f"{self.kind} {self.a} {self.b} {self.c}"

    @classmethod
    def parse(cls, line: str) -> "Move":
        parts = line.split()
        if len(parts) != 4 or parts[0] not in ("expand", "contract"):
            raise ValueError(f"bad certificate line {line!r}")
        return cls(parts[0], int(parts[1]), int(parts[2]), int(parts[3]))


@dataclass(frozen=True)
class FillingResult:
    outcome: str
    area: int | None
    area_cap: int
    length_cap: int
    certificate: tuple[Move, ...] = ()
    upper_bound: int | None = None
    states: int = 0
    reason: str = ""

    @property
    def label(self) -> str:
        return f"Area({self.area})" if self.outcome == AREA else self.outcome

    def certificate_text(self) -> str:
        return "".join(m.line() + "\n" for m in self.certificate)


# ---------------------------------------------------------------- words


def free_reduce(w: Sequence[int]) -> Word:
    """Cancel backtracks a->b->a cyclically until none remain."""
    out: list[int] = []
    for x in w:
        if len(out) >= 2 and out[-2] == x:
            out.pop()
        else:
            out.append(x)
    # the stack is reduced as a path; only the wrap-around can still cancel
    while len(out) >= 3:
        if out[-2] == out[0]:
            out.pop()
            out.pop()
        elif out[-1] == out[1]:
            out.pop()
            out.pop(0)
        else:
            break
    return tuple(out) if len(out) >= 3 else ()


def _rotations(w: Word) -> Iterable[Word]:
    for i in range(len(w)):
        yield w[i:] + w[:i]


def canonical(w: Sequence[int]) -> tuple[Word, bool]:
    """Least rotation of the loop or of its reverse; the flag says reversed."""
    w = free_reduce(w)
    if not w:
        return (), False
    fwd = min(_rotations(w))
    rev = min(_rotations(w[::-1]))
    return (rev, True) if rev < fwd else (fwd, False)


def _orient_sign(x: int, y: int, z: int) -> int:
    """Sign of the permutation sorting (x, y, z)."""
    s = 1
    if x > y:
        s = -s
    if x > z:
        s = -s
    if y > z:
        s = -s
    return s


def _moves(X: TwoComplex, w: Word):
    """All (move, new word, face, sign) with d2 chain change sign * face."""
    k = len(w)
    faces = X.faces
    edge_faces = X.edge_faces
    for i in range(k):
        x, y = w[i], w[(i + 1) % k]
        for f in edge_faces.get((min(x, y), max(x, y)), ()):
            z = next(v for v in f if v != x and v != y)
            new = w[: i + 1] + (z,) + w[i + 1 :]
            yield Move("expand", x, y, z), new, f, _orient_sign(x, z, y)
    if k >= 3:
        for i in range(k):
            x, z, y = w[i], w[(i + 1) % k], w[(i + 2) % k]
            if x == y:
                continue
            f = tuple(sorted((x, y, z)))
            if f in faces:
                j = (i + 1) % k
                new = w[:j] + w[j + 1 :]
                yield Move("contract", x, y, z), new, f, -_orient_sign(x, z, y)


def _apply(w: Word, m: Move, i: int) -> Word | None:
    """Apply ``m`` at position i of w, or None if it does not match there."""
    k = len(w)
    if m.kind == "expand":
        if w[i] == m.a and w[(i + 1) % k] == m.b:
            return w[: i + 1] + (m.c,) + w[i + 1 :]
        return None
    if k >= 3 and w[i] == m.a and w[(i + 1) % k] == m.c and w[(i + 2) % k] == m.b:
        j = (i + 1) % k
        return w[:j] + w[j + 1 :]
    return None


# ---------------------------------------------------------------- chains


class _ChainBound:
    """Rational solve of d2 c = z plus the L1 lower bound over c + ker d2."""

    def __init__(self, X: TwoComplex) -> None:
        self.faces = X.sorted_faces
        self.fidx = {f: i for i, f in enumerate(self.faces)}
        self.eidx = X.edge_index
        ne, nf = len(X.sorted_edges), len(self.faces)
        rows = [[Fraction(0)] * nf for _ in range(ne)]
        for j, (a, b, c) in enumerate(self.faces):
            rows[self.eidx[(b, c)]][j] += 1
            rows[self.eidx[(a, c)]][j] -= 1
            rows[self.eidx[(a, b)]][j] += 1
        # reduced row echelon form, remembering the row operations
        self.ops: list[tuple] = []
        pivots: list[int] = []
        r = 0
        for col in range(nf):
            piv = next((i for i in range(r, ne) if rows[i][col] != 0), None)
            if piv is None:
                continue
            if piv != r:
                rows[r], rows[piv] = rows[piv], rows[r]
                self.ops.append(("swap", r, piv))
            inv = 1 / rows[r][col]
            rows[r] = [v * inv for v in rows[r]]
            self.ops.append(("scale", r, inv))
            for i in range(ne):
                if i != r and rows[i][col] != 0:
                    t = rows[i][col]
                    rows[i] = [a - t * b for a, b in zip(rows[i], rows[r])]
                    self.ops.append(("sub", i, r, t))
            pivots.append(col)
            r += 1
        self.rank = r
        self.pivots = pivots
        self.nrows = ne
        free = [c for c in range(nf) if c not in set(pivots)]
        self.kernel: list[list[Fraction]] = []
        for fc in free:
            v = [Fraction(0)] * nf
            v[fc] = Fraction(1)
            for i, pc in enumerate(pivots):
                v[pc] = -rows[i][fc]
            self.kernel.append(v)
        self.rigid = [all(k[j] == 0 for k in self.kernel) for j in range(nf)]

    def solve(self, loop: Word) -> list[Fraction] | None:
        z = [Fraction(0)] * self.nrows
        k = len(loop)
        for i in range(k):
            a, b = loop[i], loop[(i + 1) % k]
            if a < b:
                z[self.eidx[(a, b)]] += 1
            else:
                z[self.eidx[(b, a)]] -= 1
        for op in self.ops:
            if op[0] == "swap":
                _, i, j = op
                z[i], z[j] = z[j], z[i]
            elif op[0] == "scale":
                z[op[1]] *= op[2]
            else:
                _, i, r, t = op
                z[i] -= t * z[r]
        if any(z[i] != 0 for i in range(self.rank, self.nrows)):
            return None
        c = [Fraction(0)] * len(self.faces)
        for i, pc in enumerate(self.pivots):
            c[pc] = z[i]
        return c

    def bound(self, c: Sequence[Fraction]) -> int:
        if len(self.kernel) == 1:
            return _ceil(_l1_line_min(c, self.kernel[0]))
        return _ceil(sum(abs(v) for v, rigid in zip(c, self.rigid) if rigid))


def _ceil(q: Fraction) -> int:
    return -(-q.numerator // q.denominator)


def _l1_line_min(c: Sequence[Fraction], k: Sequence[Fraction]) -> Fraction:
    """min over real t of sum |c_i + t k_i| (a weighted median problem)."""
    best = sum(abs(v) for v in c)
    for ci, ki in zip(c, k):
        if ki != 0:
            t = -ci / ki
            best = min(best, sum(abs(a + t * b) for a, b in zip(c, k)))
    return best


# ---------------------------------------------------------------- search


def filling_area(
    X: TwoComplex,
    loop: EdgeLoop | Sequence[int],
    area_cap: int = 20,
    length_cap: int = 12,
    state_limit: int = DEFAULT_STATE_LIMIT,
) -> FillingResult:
    """Least number of face moves that reduce ``loop`` to the empty word.

    Words longer than ``length_cap`` are never visited.  When no filling of
    area at most ``area_cap`` exists inside that window, a greedy search
    without the area cap looks for any filling; success gives
    NullHomotopicBeyondCap with the area found as an upper bound.
    Certificates refer to canonical words (least rotation of the loop or its
    reverse), which is how ``replay_certificate`` applies them.
    """
    if not isinstance(loop, EdgeLoop):
        loop = EdgeLoop(tuple(loop))
    loop.check(X)
    if area_cap < 0 or length_cap < 0:
        raise ValueError("caps must be non-negative")
    start, flipped = canonical(loop.vertices)
    if not start:
        return FillingResult(AREA, 0, area_cap, length_cap, (), 0, 1)
    if len(start) > length_cap:
        return FillingResult(NOT_SHOWN, None, area_cap, length_cap, reason="reduced loop longer than length cap")
    cb = _ChainBound(X)
    c0 = cb.solve(start)
    if c0 is None:
        return FillingResult(NOT_SHOWN, None, area_cap, length_cap, reason="loop is nonzero in H1(X; Q)")
    if not is_homologically_trivial(X, start, "Z"):
        return FillingResult(NOT_SHOWN, None, area_cap, length_cap, reason="loop is nonzero in H1(X; Z)")
    found, states = _astar(X, cb, start, c0, area_cap, length_cap, state_limit)
    if found is not None:
        return FillingResult(AREA, len(found), area_cap, length_cap, tuple(found), len(found), states)
    if states >= state_limit:
        return FillingResult(NOT_SHOWN, None, area_cap, length_cap, states=states, reason="state limit reached")
    relaxed, more = _greedy(X, cb, start, c0, length_cap, state_limit)
    if relaxed is not None:
        return FillingResult(
            BEYOND_CAP, None, area_cap, length_cap, tuple(relaxed), len(relaxed), states + more,
            reason="filling found above the area cap",
        )
    return FillingResult(
        NOT_SHOWN, None, area_cap, length_cap, states=states + more, reason="no filling within the caps"
    )


def _successors(X: TwoComplex, cb: _ChainBound, w: Word, c: list[Fraction], length_cap: int):
    for m, new, f, sign in _moves(X, w):
        nw, flipped = canonical(new)
        if len(nw) > length_cap:
            continue
        nc = list(c)
        nc[cb.fidx[f]] += sign
        if flipped:
            nc = [-v for v in nc]
        yield m, nw, nc


def _path(parent: dict, goal: Word) -> list[Move]:
    moves: list[Move] = []
    w = goal
    while parent[w] is not None:
        w, m = parent[w]
        moves.append(m)
    moves.reverse()
    return moves


def _astar(X, cb, start, c0, area_cap, length_cap, state_limit):
    h0 = cb.bound(c0)
    if h0 > area_cap:
        return None, 0
    best = {start: 0}
    parent: dict[Word, tuple[Word, Move] | None] = {start: None}
    chain = {start: c0}
    # ties go to deeper nodes: with a tight bound the plateau is walked straight down
    heap = [(h0, 0, start)]
    closed: set[Word] = set()
    while heap:
        fval, negg, w = heapq.heappop(heap)
        g = -negg
        if w in closed or g > best[w]:
            continue
        if not w:
            return _path(parent, w), len(best)
        closed.add(w)
        if len(best) >= state_limit:
            return None, len(best)
        for m, nw, nc in _successors(X, cb, w, chain[w], length_cap):
            ng = g + 1
            if nw in closed or ng >= best.get(nw, ng + 1):
                continue
            h = 0 if not nw else cb.bound(nc)
            if ng + h > area_cap:
                continue
            best[nw] = ng
            parent[nw] = (w, m)
            chain[nw] = nc
            heapq.heappush(heap, (ng + h, -ng, nw))
    return None, len(best)


def _greedy(X, cb, start, c0, length_cap, state_limit):
    seen = {start}
    parent: dict[Word, tuple[Word, Move] | None] = {start: None}
    chain = {start: c0}
    heap = [(cb.bound(c0), len(start), start)]
    while heap and len(seen) < state_limit:
        _, _, w = heapq.heappop(heap)
        if not w:
            return _path(parent, w), len(seen)
        for m, nw, nc in _successors(X, cb, w, chain[w], length_cap):
            if nw in seen:
                continue
            seen.add(nw)
            parent[nw] = (w, m)
            chain[nw] = nc
            heapq.heappush(heap, (0 if not nw else cb.bound(nc), len(nw), nw))
    return None, len(seen)


def replay_certificate(X: TwoComplex, loop: EdgeLoop | Sequence[int], certificate: Sequence[Move | str]) -> bool:
    """True iff the moves, applied in order to canonical words, reach the
    empty word exactly at the last move.  Positions are searched depth first."""
    if not isinstance(loop, EdgeLoop):
        loop = EdgeLoop(tuple(loop))
    loop.check(X)
    moves = [m if isinstance(m, Move) else Move.parse(m) for m in certificate]
    for m in moves:
        if tuple(sorted((m.a, m.b, m.c))) not in X.faces or len({m.a, m.b, m.c}) != 3:
            return False
    start, _ = canonical(loop.vertices)

    def dfs(w: Word, i: int) -> bool:
        if i == len(moves):
            return not w
        for pos in range(len(w)):
            nw = _apply(w, moves[i], pos)
            if nw is not None and dfs(canonical(nw)[0], i + 1):
                return True
        return False

    return dfs(start, 0)


# ---------------------------------------------------------------- isoperimetric ratio


@dataclass(frozen=True)
class IsoperimetricEstimate:
    """Least |gamma| / A over simple loops in the explored window.

    This is an upper bound on I(X) restricted to loops of length at most
    ``length_cap`` with filling area at most ``area_cap``; it is not I(X).
    """

    ratio: Fraction | None
    loop: Word | None
    area: int | None
    length_cap: int
    area_cap: int
    loops_tried: int = 0
    loops_filled: int = 0
    note: str = field(default="window-bounded upper bound on I(X)")


def empirical_isoperimetric(
    X: TwoComplex,
    length_cap: int,
    area_cap: int,
    word_cap: int | None = None,
    state_limit: int = DEFAULT_STATE_LIMIT,
) -> IsoperimetricEstimate:
    """Scan simple edge cycles of length <= ``length_cap`` and fill each one.

    Intermediate words are capped at ``word_cap``, by default
    ``length_cap + area_cap``: a move lengthens a word by at most one, so
    that default never cuts off a filling within the area cap.
    """
    if word_cap is None:
        word_cap = length_cap + area_cap
    best: tuple[Fraction, Word, int] | None = None
    tried = filled = 0
    for cyc in simple_cycles(X, length_cap):
        tried += 1
        res = filling_area(X, cyc, area_cap, word_cap, state_limit)
        if res.outcome != AREA or not res.area:
            continue
        filled += 1
        r = Fraction(len(cyc), res.area)
        if best is None or r < best[0]:
            best = (r, cyc, res.area)
    if best is None:
        return IsoperimetricEstimate(None, None, None, length_cap, area_cap, tried, filled)
    return IsoperimetricEstimate(best[0], best[1], best[2], length_cap, area_cap, tried, filled)
