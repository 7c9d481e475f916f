"""Dinic maximum flow on integer capacities, and project selection on top."""
from __future__ import annotations

from collections import deque


class FlowNetwork:
    def __init__(self, n: int) -> None:
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for k in self.head[u]:
                if self.cap[k] > 0 and level[self.to[k]] < 0:
                    level[self.to[k]] = level[u] + 1
                    q.append(self.to[k])
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * self.n
            while True:
                pushed = self._augment(s, t, level, it)
                if not pushed:
                    break
                total += pushed
        return total

    def _augment(self, s: int, t: int, level: list[int], it: list[int]) -> int:
        # iterative DFS along the level graph; returns the bottleneck pushed
        path: list[int] = []
        u = s
        while True:
            if u == t:
                f = min(self.cap[k] for k in path)
                for k in path:
                    self.cap[k] -= f
                    self.cap[k ^ 1] += f
                return f
            adv = False
            edges = self.head[u]
            while it[u] < len(edges):
                k = edges[it[u]]
                v = self.to[k]
                if self.cap[k] > 0 and level[v] == level[u] + 1:
                    path.append(k)
                    u = v
                    adv = True
                    break
                it[u] += 1
            if not adv:
                if u == s:
                    return 0
                level[u] = -1  # dead end
                k = path.pop()
                u = self.to[k ^ 1]
                it[u] += 1

    def source_side(self, s: int) -> set[int]:
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for k in self.head[u]:
                v = self.to[k]
                if self.cap[k] > 0 and v not in seen:
                    seen.add(v)
                    q.append(v)
        return seen


def max_closure(profits: list[int], costs: list[int], requires: list[list[int]]) -> tuple[int, list[int]]:
    """Choose projects maximizing profit minus the cost of required tools.

    Project i needs every tool in ``requires[i]``.  Returns the optimum and
    the chosen projects (the source side of a minimum cut).
    """
    P, T = len(profits), len(costs)
    s, t = P + T, P + T + 1
    net = FlowNetwork(P + T + 2)
    inf = sum(profits) + 1
    for i, w in enumerate(profits):
        if w:
            net.add_edge(s, i, w)
        for j in requires[i]:
            net.add_edge(i, P + j, inf)
    for j, c in enumerate(costs):
        if c:
            net.add_edge(P + j, t, c)
    cut = net.max_flow(s, t)
    side = net.source_side(s)
    return sum(profits) - cut, [i for i in range(P) if i in side]
