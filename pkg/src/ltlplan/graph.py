"""Weighted digraph algorithms behind the optimal-cycle search.

Multi-source Dijkstra (sum and minimax/bottleneck variants), the
S-bottleneck length of a cycle, and :func:`min_bottleneck_cycle`, which
finds a cycle through ``F`` minimizing the largest distance between
successive visits to ``S``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Hashable, Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

INF = math.inf


class WeightedDigraph:
    """Directed graph with positive finite edge weights.

    Parallel edges collapse to the smallest weight.  Vertices are kept in
    sorted order when they are mutually comparable, otherwise in insertion
    order; that order drives every tie-break downstream.
    """

    def __init__(self, edges: Iterable[tuple] = (), vertices: Iterable[Hashable] = ()):
        best: dict = {}
        seen: dict = dict.fromkeys(vertices)
        for u, v, w in edges:
            if not (w > 0) or (isinstance(w, float) and not math.isfinite(w)):
                raise ValueError(f"edge {u!r} -> {v!r} has non-positive or infinite weight {w!r}")
            seen.setdefault(u)
            seen.setdefault(v)
            if (u, v) not in best or w < best[(u, v)]:
                best[(u, v)] = w
        try:
            order = sorted(seen)
        except TypeError:
            order = list(seen)
        self.vertices: list = order
        self.index: dict = {v: i for i, v in enumerate(order)}
        self._adj: list = [[] for _ in order]
        self._w: dict = {}
        for (u, v), w in best.items():
            i, j = self.index[u], self.index[v]
            self._adj[i].append((j, w))
            self._w[(i, j)] = w
        for row in self._adj:
            row.sort(key=lambda e: e[0])
        kinds = {type(w) for w in self._w.values()}
        # machine-number weights can go through the compiled search
        if kinds <= {int}:
            self._kind = int
        elif kinds <= {int, float}:
            self._kind = float
        else:
            self._kind = None
        self._csr = None
        self._csc = None

    def _compiled(self):
        """CSR matrix of the graph and its CSC transpose (in-edges)."""
        if self._csr is None:
            n, m = len(self.vertices), len(self._w)
            keys = np.fromiter((k for ij in self._w for k in ij), dtype=np.intp, count=2 * m)
            data = np.fromiter(self._w.values(), dtype=float, count=m)
            self._csr = csr_matrix((data, (keys[0::2], keys[1::2])), shape=(n, n))
            self._csc = self._csr.tocsc()
        return self._csr, self._csc

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return v in self.index

    @property
    def num_edges(self) -> int:
        return len(self._w)

    def edges(self):
        for (i, j), w in sorted(self._w.items()):
            yield self.vertices[i], self.vertices[j], w

    def successors(self, v):
        return [(self.vertices[j], w) for j, w in self._adj[self.index[v]]]

    def weight(self, u, v):
        """Weight of edge ``u -> v``; ``None`` when absent."""
        i, j = self.index.get(u), self.index.get(v)
        if i is None or j is None:
            return None
        return self._w.get((i, j))


def load_graph(text: str, number=float) -> WeightedDigraph:
    """Parse ``vertex <id>`` and ``edge <src> <dst> <weight>`` lines."""
    vertices, edges = [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        if head == "vertex" and len(args) == 1:
            vertices.append(args[0])
        elif head == "edge" and len(args) == 3:
            try:
                w = number(args[2])
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"line {lineno}: bad weight {args[2]!r}") from None
            if not (w > 0) or not math.isfinite(w):
                raise ValueError(f"line {lineno}: weight must be positive and finite")
            edges.append((args[0], args[1], w))
        else:
            raise ValueError(f"line {lineno}: cannot parse {raw.strip()!r}")
    return WeightedDigraph(edges, vertices)


# ---------------------------------------------------------------------------
# single-source searches


def _search(adj, source: int, targets: set, bottleneck: bool):
    """Dijkstra from ``source``; path cost is the sum of weights, or the
    largest weight when ``bottleneck`` is set.

    Returns ``(dist, pred, back)`` as vertex-indexed lists, where
    ``back = (cost, last)`` describes the best cycle through ``source``
    (``last`` is the vertex closing it).  Stops once every target is
    settled.
    """
    n = len(adj)
    dist = [INF] * n
    dist[source] = 0
    pred = [-1] * n
    done = bytearray(n)
    back_cost, back_last = INF, None
    want_back = source in targets
    remaining = len(targets - {source})
    heap = [(0, source)]
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        d, u = pop(heap)
        if done[u]:
            continue
        if remaining == 0 and (not want_back or d >= back_cost):
            break
        done[u] = 1
        if u != source and u in targets:
            remaining -= 1
        for v, w in adj[u]:
            nd = (w if w > d else d) if bottleneck else d + w
            if v == source:
                if nd < back_cost:
                    back_cost, back_last = nd, u
            elif nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                push(heap, (nd, v))
    return dist, pred, (back_cost, back_last)


def _compiled_searches(g: "WeightedDigraph", sources: list, targets: set):
    """Sum-weight searches from every source at once via scipy; same
    results as :func:`_search` for int and float weights, with distances
    reported for ``targets`` only."""
    csr, csc = g._compiled()
    dist, pred = dijkstra(csr, directed=True, indices=sources, return_predecessors=True)
    cast = g._kind
    out = []
    for k, i in enumerate(sources):
        row, prow = dist[k], pred[k]
        back_cost, back_last = INF, None
        lo, hi = csc.indptr[i], csc.indptr[i + 1]
        into, w_in = csc.indices[lo:hi], csc.data[lo:hi]
        if len(into):
            closing = row[into] + w_in
            k_best = int(np.argmin(closing))  # first minimum: smallest index
            if closing[k_best] < INF:
                back_cost, back_last = float(closing[k_best]), int(into[k_best])
        if back_cost != INF:
            back_cost = cast(back_cost)
        d = {j: cast(row[j]) if row[j] != INF else INF for j in targets}
        d[i] = 0
        out.append((d, prow, (back_cost, back_last)))
    return out


@dataclass
class PathTable:
    """Distances from ``sources`` to ``targets`` plus path reconstruction.

    ``dist[(a, b)]`` is ``inf`` when ``b`` is unreachable from ``a``; the
    entry for ``a == b`` is the best cycle through ``a``.
    """

    graph: WeightedDigraph
    sources: list
    targets: list
    dist: dict
    _pred: dict
    _back: dict

    def __getitem__(self, pair):
        return self.dist[pair]

    def path(self, a, b) -> list | None:
        """Vertex sequence ``a ... b`` realizing ``dist[(a, b)]``; for
        ``a == b`` the closed cycle ``a ... a``.  ``None`` if unreachable."""
        if self.dist[(a, b)] == INF:
            return None
        g = self.graph
        i, j = g.index[a], g.index[b]
        pred = self._pred[a]
        tail = []
        if i == j:
            tail = [i]
            j = self._back[a]
        seq = [j]
        while j != i:
            j = int(pred[j])
            seq.append(j)
        seq.reverse()
        return [g.vertices[k] for k in seq + tail]


def _table(g: WeightedDigraph, A, B, bottleneck: bool) -> PathTable:
    A, B = list(A), list(B)
    for v in A + B:
        if v not in g.index:
            raise KeyError(f"unknown vertex {v!r}")
    targets = {g.index[b] for b in B}
    sources = [g.index[a] for a in A]
    if not bottleneck and g._kind is not None and sources:
        results = _compiled_searches(g, sources, targets)
    else:
        results = [_search(g._adj, i, targets, bottleneck) for i in sources]
    dist, preds, backs = {}, {}, {}
    for a, i, (d, pred, (back_cost, back_last)) in zip(A, sources, results):
        for b in B:
            j = g.index[b]
            dist[(a, b)] = back_cost if i == j else d[j]
        preds[a] = pred
        backs[a] = back_last
    return PathTable(g, A, B, dist, preds, backs)


def shortest_path(g: WeightedDigraph, A, B) -> PathTable:
    """Minimum total weight from every vertex of ``A`` to every vertex of ``B``."""
    return _table(g, A, B, bottleneck=False)


def shortest_bot_path(g: WeightedDigraph, A, B) -> PathTable:
    """Minimum over paths of the largest edge weight, ``A`` to ``B``."""
    return _table(g, A, B, bottleneck=True)


# ---------------------------------------------------------------------------
# cycles


def s_bottleneck_length(g: WeightedDigraph, cycle, S) -> float:
    """Largest weight between successive visits to ``S`` along a closed
    cycle ``v1 ... vk v1``, wrapping around; ``inf`` if ``S`` is never met.
    """
    cycle = list(cycle)
    if len(cycle) < 2 or cycle[0] != cycle[-1]:
        raise ValueError("cycle must be a closed vertex sequence v1 ... v1")
    weights = []
    for u, v in zip(cycle, cycle[1:]):
        w = g.weight(u, v)
        if w is None:
            raise ValueError(f"cycle uses missing edge {u!r} -> {v!r}")
        weights.append(w)
    S = set(S)
    hits = [i for i, v in enumerate(cycle[:-1]) if v in S]
    if not hits:
        return INF
    k = len(weights)
    best = 0
    for a, b in zip(hits, hits[1:] + [hits[0] + k]):
        seg = 0
        for j in range(a, b):
            seg = seg + weights[j % k]
        if seg > best:
            best = seg
    return best


@dataclass(frozen=True)
class CycleResult:
    """Cycle ``v1 ... vk v1`` starting and ending at ``triple[0]``."""

    cycle: list
    length: object  # S-bottleneck length of ``cycle``
    cost: object  # the minimized triple cost; equals ``length``
    triple: tuple  # (f, s1, s2)


def _join(*segments):
    out = list(segments[0])
    for seg in segments[1:]:
        assert out[-1] == seg[0]
        out.extend(seg[1:])
    return out


def min_bottleneck_cycle(g: WeightedDigraph, S, F) -> CycleResult | None:
    """Cycle through ``F`` with minimum S-bottleneck length, or ``None``.

    Follows the six steps of the min-bottleneck-cycle algorithm: all-pairs
    shortest paths inside ``S``, bottleneck paths over the graph those
    distances induce on ``S``, shortest paths between ``F`` and ``S``, and
    an exhaustive search over triples ``(f, s1, s2)``.  Ties are broken
    lexicographically on ``(cost, f, s1, s2)`` in vertex order.
    """
    order = g.index
    S = sorted(set(S), key=order.__getitem__)
    F = sorted(set(F), key=order.__getitem__)
    if not S or not F:
        return None

    # steps 1 and the S -> F half of step 4 share their sources
    d_s = shortest_path(g, S, list(dict.fromkeys(S + F)))
    g_s = WeightedDigraph(
        ((a, b, d_s[(a, b)]) for a in S for b in S if d_s[(a, b)] < INF), S
    )
    d_bot = shortest_bot_path(g_s, S, S)
    d_fs = shortest_path(g, F, S)

    best = INF
    arg = None
    for f in F:
        to_s = [0 if f == s else d_fs[(f, s)] for s in S]
        from_s = [0 if f == s else d_s[(s, f)] for s in S]
        min_from = min(from_s)
        if min_from == INF:
            continue
        for i1, s1 in enumerate(S):
            a = to_s[i1]
            if a + min_from >= best:
                continue
            for i2, s2 in enumerate(S):
                c = a + from_s[i2]
                if c >= best:
                    continue
                if not (i1 == i2 and f != s1):
                    bot = d_bot[(s1, s2)]
                    if bot > c:
                        c = bot
                        if c >= best:
                            continue
                best, arg = c, (f, s1, s2)
    if arg is None:
        return None

    f, s1, s2 = arg
    head = [f] if f == s1 else d_fs.path(f, s1)
    tail = [f] if s2 == f else d_s.path(s2, f)
    if s1 == s2 and f != s1:
        middle = [s1]
    else:
        hops = d_bot.path(s1, s2)
        middle = _join(*(d_s.path(x, y) for x, y in zip(hops, hops[1:])))
    cycle = _join(head, middle, tail)
    return CycleResult(cycle, s_bottleneck_length(g, cycle, S), best, arg)
