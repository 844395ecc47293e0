"""Windowed Cayley graphs G_R on {0, ..., N} and chromatic bounds."""

from __future__ import annotations

import csv
import heapq
import io
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .intsets import IntegerSetSpec, enumerate as enumerate_set

DEFAULT_BUDGET = 64


@dataclass(frozen=True)
class WindowGraph:
    """Vertices 0..N, edges {m, m+d} for d in ``diffs`` (the members of R in [1, N])."""

    N: int
    diffs: tuple[int, ...]

    def neighbors(self, v: int) -> list[int]:
        out = [v - d for d in self.diffs if v - d >= 0]
        out.extend(v + d for d in self.diffs if v + d <= self.N)
        return out

    @property
    def vertex_count(self) -> int:
        return self.N + 1

    def edge_count(self) -> int:
        return sum(self.N + 1 - d for d in self.diffs)

    def edges(self):
        for d in self.diffs:
            for m in range(self.N + 1 - d):
                yield m, m + d

    def adjacency(self) -> list[set[int]]:
        return [set(self.neighbors(v)) for v in range(self.N + 1)]

    def to_edge_list(self) -> str:
        lines = [f"p edge {self.vertex_count} {self.edge_count()}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> WindowGraph:
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or rows[0][:2] != ["p", "edge"]:
            raise ValueError("missing 'p edge n m' header")
        n, m = int(rows[0][2]), int(rows[0][3])
        pairs = [(int(a), int(b)) for a, b in rows[1:]]
        if len(pairs) != m:
            raise ValueError(f"header announces {m} edges, found {len(pairs)}")
        g = cls(n - 1, tuple(sorted({b - a for a, b in pairs})))
        if sorted(pairs) != sorted(g.edges()):
            raise ValueError("edge list is not a windowed Cayley graph")
        return g


def build_window_graph(R: IntegerSetSpec, N: int) -> WindowGraph:
    if N < 1:
        raise ValueError("window must be positive")
    return WindowGraph(N, tuple(enumerate_set(R, N)))


def is_proper(g: WindowGraph, coloring: Sequence[int]) -> bool:
    return len(coloring) == g.vertex_count and all(coloring[u] != coloring[v] for u, v in g.edges())


class UpperBound(NamedTuple):
    colors: int
    coloring: list[int]
    strategy: str


def _bipartite_coloring(g: WindowGraph) -> list[int] | None:
    col = [0] * g.vertex_count
    for root in range(g.vertex_count):
        if col[root]:
            continue
        col[root] = 1
        stack = [root]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if not col[w]:
                    col[w] = 3 - col[u]
                    stack.append(w)
                elif col[w] == col[u]:
                    return None
    return col


def greedy_coloring(g: WindowGraph, order: Sequence[int] | None = None) -> list[int]:
    col = [0] * g.vertex_count
    for v in order if order is not None else range(g.vertex_count):
        used = {col[w] for w in g.neighbors(v)}
        c = 1
        while c in used:
            c += 1
        col[v] = c
    return col


def dsatur_coloring(g: WindowGraph) -> list[int]:
    """DSATUR: color the vertex with most distinct neighbor colors next.

    Ties go to larger degree, then smallest vertex index.
    """
    n = g.vertex_count
    adj = [g.neighbors(v) for v in range(n)]
    col = [0] * n
    seen: list[set[int]] = [set() for _ in range(n)]
    heap = [(0, -len(adj[v]), v) for v in range(n)]
    heapq.heapify(heap)
    while heap:
        negsat, negdeg, v = heapq.heappop(heap)
        if col[v] or -negsat != len(seen[v]):
            continue
        c = 1
        while c in seen[v]:
            c += 1
        col[v] = c
        for w in adj[v]:
            if not col[w] and c not in seen[w]:
                seen[w].add(c)
                heapq.heappush(heap, (-len(seen[w]), -len(adj[w]), w))
    return col


def chromatic_upper(g: WindowGraph, strategy: str = "dsatur") -> UpperBound:
    """A proper coloring and its color count; bipartite graphs get a 2-coloring certificate."""
    if not g.diffs:
        return UpperBound(1, [1] * g.vertex_count, "edgeless")
    bip = _bipartite_coloring(g)
    if bip is not None:
        return UpperBound(2, bip, "bipartite")
    if strategy == "dsatur":
        col = dsatur_coloring(g)
    elif strategy == "greedy":
        col = greedy_coloring(g)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return UpperBound(max(col), col, strategy)


def greedy_clique(g: WindowGraph) -> list[int]:
    """Largest clique found by greedy growth from each edge {0, d}.

    Translating a clique so its minimum is 0 keeps it inside the window, so
    seeds at vertex 0 lose nothing.
    """
    if not g.diffs:
        return [0]
    diffset = set(g.diffs)
    best = [0, g.diffs[0]]
    for d in g.diffs:
        clique = [0, d]
        for w in g.diffs:
            if w != d and all(abs(w - u) in diffset for u in clique):
                clique.append(w)
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def is_clique(g: WindowGraph, vertices: Sequence[int]) -> bool:
    diffset = set(g.diffs)
    vs = list(vertices)
    return all(abs(a - b) in diffset for i, a in enumerate(vs) for b in vs[i + 1:])


def k_colorable(adj: list[list[int]], k: int, order: Sequence[int] | None = None) -> list[int] | None:
    """Backtracking k-coloring (DSATUR branching, new colors opened in order); None if impossible."""
    n = len(adj)
    col = [0] * n
    counts = [[0] * (k + 1) for _ in range(n)]  # counts[v][c]: neighbors of v colored c

    def sat(v):
        return sum(1 for c in range(1, k + 1) if counts[v][c])

    def assign(v, c, delta):
        for w in adj[v]:
            counts[w][c] += delta

    def pick():
        best, key = -1, None
        for v in range(n):
            if col[v]:
                continue
            kk = (sat(v), len(adj[v]), -v)
            if key is None or kk > key:
                best, key = v, kk
        return best

    def solve(done, used):
        if done == n:
            return True
        v = pick()
        for c in range(1, min(used + 1, k) + 1):
            if counts[v][c]:
                continue
            col[v] = c
            assign(v, c, 1)
            if solve(done + 1, max(used, c)):
                return True
            assign(v, c, -1)
            col[v] = 0
        return False

    import sys
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * n + 100))
    try:
        return col if solve(0, 0) else None
    finally:
        sys.setrecursionlimit(old)


def exact_chromatic(g: WindowGraph, lower: int = 1) -> tuple[int, list[int]]:
    adj = [g.neighbors(v) for v in range(g.vertex_count)]
    k = max(lower, 1 if not g.diffs else 2)
    while True:
        col = k_colorable(adj, k)
        if col is not None:
            return k, col
        k += 1


def chromatic_lower(g: WindowGraph, budget: int = DEFAULT_BUDGET) -> int:
    """Certified lower bound on the chromatic number.

    The larger of a greedily grown clique and the exact chromatic number of
    the induced prefix window {0, ..., min(N, budget)}; equals the exact value
    when N <= budget.
    """
    clique = len(greedy_clique(g))
    prefix_n = min(g.N, budget)
    prefix = WindowGraph(prefix_n, tuple(d for d in g.diffs if d <= prefix_n))
    exact, _ = exact_chromatic(prefix, lower=min(clique, len(greedy_clique(prefix))))
    return max(clique, exact)


class GrowthRow(NamedTuple):
    N: int
    lower: int
    upper: int


def chromatic_growth(R: IntegerSetSpec, schedule: Sequence[int], strategy: str = "dsatur",
                     budget: int = DEFAULT_BUDGET) -> list[GrowthRow]:
    """(N, lower, upper) per window; lower bounds carry forward since windows are nested."""
    if list(schedule) != sorted(set(schedule)):
        raise ValueError("schedule must be strictly increasing")
    rows = []
    carried = 1
    for N in schedule:
        g = build_window_graph(R, N)
        lo = max(carried, chromatic_lower(g, budget))
        up = chromatic_upper(g, strategy).colors
        carried = lo
        rows.append(GrowthRow(N, lo, up))
    return rows


def growth_to_csv(rows: Sequence[GrowthRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["N", "lower", "upper"])
    w.writerows(rows)
    return buf.getvalue()
