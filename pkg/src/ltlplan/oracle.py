"""Brute-force reference implementations used by tests and ``verify``.

Nothing here imports the planning pipeline (``buchi``, ``product``,
``graph``, ``optimal_run``); only the domain types in ``ltl`` and ``ts``
are shared, so every check is an independent second route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ltl import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Implies,
    Next,
    Not,
    Or,
    Release,
    TrueConst,
    Until,
    depth,
    subformulas,
)

INF = math.inf


@dataclass(frozen=True)
class LassoWord:
    """The infinite word ``prefix . cycle^omega`` over sets of propositions."""

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("cycle must be nonempty")
        object.__setattr__(self, "prefix", tuple(frozenset(x) for x in self.prefix))
        object.__setattr__(self, "cycle", tuple(frozenset(x) for x in self.cycle))


def _as_word(prefix, cycle):
    if cycle is None:
        if not isinstance(prefix, LassoWord):
            raise TypeError("expected a LassoWord or a (prefix, cycle) pair")
        return prefix
    return LassoWord(tuple(prefix), tuple(cycle))


# ---------------------------------------------------------------------------
# LTL on lasso words, positional fixpoint evaluation


def _local(f, letter, here, there):
    """Truth of ``f`` at a position from its letter, the truth of the
    children at this position (``here``) and of all subformulas at the
    next position (``there``).  Used by both the fixpoint and the
    backward prefix evaluation."""
    if isinstance(f, TrueConst):
        return True
    if isinstance(f, Atom):
        return f.name in letter
    if isinstance(f, Not):
        return not here[f.operand]
    if isinstance(f, And):
        return here[f.left] and here[f.right]
    if isinstance(f, Or):
        return here[f.left] or here[f.right]
    if isinstance(f, Implies):
        return (not here[f.left]) or here[f.right]
    if isinstance(f, Next):
        return there[f.operand]
    if isinstance(f, Until):
        return here[f.right] or (here[f.left] and there[f])
    if isinstance(f, Release):
        return here[f.right] and (here[f.left] or there[f])
    if isinstance(f, Eventually):
        return here[f.operand] or there[f]
    if isinstance(f, Always):
        return here[f.operand] and there[f]
    raise TypeError(f"not a formula: {f!r}")


# least fixpoint for these, greatest for Release/Always
_LEAST = (Until, Eventually)
_GREATEST = (Release, Always)


def cycle_truth(f: Formula, cycle) -> list[dict]:
    """Truth of every subformula of ``f`` at each position of ``cycle^omega``.

    Returns one ``{subformula: bool}`` dict per cycle position.
    """
    n = len(cycle)
    table = [dict() for _ in range(n)]
    for g in subformulas(f):
        if isinstance(g, _LEAST + _GREATEST):
            vals = [not isinstance(g, _LEAST)] * n
            changed = True
            while changed:
                changed = False
                for i in range(n):
                    v = _local(g, cycle[i], table[i], {g: vals[(i + 1) % n]})
                    if v != vals[i]:
                        vals[i] = v
                        changed = True
            for i in range(n):
                table[i][g] = vals[i]
        else:
            for i in range(n):
                table[i][g] = _local(g, cycle[i], table[i], table[(i + 1) % n])
    return table


def step_back(f: Formula, letter, there: dict) -> dict:
    """Truth of all subformulas at a position given the next position."""
    here: dict = {}
    for g in subformulas(f):
        here[g] = _local(g, letter, here, there)
    return here


def lasso_satisfies(f: Formula, prefix, cycle=None) -> bool:
    """Truth of ``f`` at position 0 of ``prefix . cycle^omega``.

    Accepts either a :class:`LassoWord` or the two letter sequences.
    """
    w = _as_word(prefix, cycle)
    vec = cycle_truth(f, w.cycle)[0]
    for letter in reversed(w.prefix):
        vec = step_back(f, letter, vec)
    return vec[f]


def naive_satisfies(f: Formula, prefix, cycle=None) -> bool:
    """Second evaluator: bounded semantics on an explicitly unrolled word.

    Every suffix of the lasso starts within the first ``|prefix|+|cycle|``
    positions, so searching an eventuality inside that window from any
    position is exact; the unrolled length leaves room for every nesting
    level.
    """
    w = _as_word(prefix, cycle)
    period = len(w.prefix) + len(w.cycle)
    size = 4 * period * (1 + depth(f))
    letters = list(w.prefix)
    while len(letters) < size:
        letters.extend(w.cycle)

    def holds(g, i):
        if i >= len(letters):
            raise AssertionError("unrolled word too short")
        if isinstance(g, TrueConst):
            return True
        if isinstance(g, Atom):
            return g.name in letters[i]
        if isinstance(g, Not):
            return not holds(g.operand, i)
        if isinstance(g, And):
            return holds(g.left, i) and holds(g.right, i)
        if isinstance(g, Or):
            return holds(g.left, i) or holds(g.right, i)
        if isinstance(g, Implies):
            return not holds(g.left, i) or holds(g.right, i)
        if isinstance(g, Next):
            return holds(g.operand, i + 1)
        if isinstance(g, Eventually):
            return any(holds(g.operand, j) for j in range(i, i + period))
        if isinstance(g, Always):
            return all(holds(g.operand, j) for j in range(i, i + period))
        if isinstance(g, Until):
            for j in range(i, i + period):
                if holds(g.right, j):
                    return True
                if not holds(g.left, j):
                    return False
            return False
        if isinstance(g, Release):
            for j in range(i, i + period):
                if not holds(g.right, j):
                    return False
                if holds(g.left, j):
                    return True
            return True
        raise TypeError(f"not a formula: {g!r}")

    return holds(f, 0)


# ---------------------------------------------------------------------------
# graphs: exhaustive path enumeration and Bellman-Ford


def _succ_map(g) -> dict:
    return {v: list(g.successors(v)) for v in g.vertices}


def brute_paths(g, A, B, bottleneck: bool = False) -> dict:
    """Best value over all simple paths (``a != b``) or simple cycles
    through ``a`` (``a == b``); sum of weights or, with ``bottleneck``,
    the largest weight.  Exponential; for tiny graphs only."""
    succ = _succ_map(g)
    out = {}
    for a in A:
        best = {b: INF for b in B}

        def walk(v, cost, visited):
            for u, w in succ[v]:
                c = max(cost, w) if bottleneck else cost + w
                if u == a:
                    if a in best and c < best[a]:
                        best[a] = c
                    continue
                if u in visited:
                    continue
                if u in best and c < best[u]:
                    best[u] = c
                visited.add(u)
                walk(u, c, visited)
                visited.discard(u)

        walk(a, 0, {a})
        for b in B:
            out[(a, b)] = best[b]
    return out


def bellman_ford(vertices, edges, sources) -> dict:
    """Minimum total weight from any source to every vertex."""
    dist = {v: INF for v in vertices}
    for s in sources:
        dist[s] = 0
    for _ in range(len(dist)):
        changed = False
        for u, v, w in edges:
            if dist[u] + w < dist[v]:
                dist[v] = dist[u] + w
                changed = True
        if not changed:
            break
    return dist


def brute_min_s_bottleneck(g, S, F, max_edges: int) -> float:
    """Minimum S-bottleneck length over closed walks through ``F`` with at
    most ``max_edges`` edges; ``inf`` if there is none.

    Walks are enumerated breadth-first by length from each ``f``.  A
    partial walk is summarized by its position, whether it met ``S``, the
    distance from ``f`` to the first ``S`` vertex, the largest closed gap
    and the open gap; a summary no better in every coordinate than one
    already seen (with no more edges) cannot lead to a better walk and is
    dropped.
    """
    succ = _succ_map(g)
    S = set(S)
    best = INF
    for f in sorted(set(F), key=repr):
        start_in_s = f in S
        # label: (first, maxgap, open)
        seen: dict = {}

        def dominated(key, label):
            for other in seen.get(key, ()):
                if all(o <= x for o, x in zip(other, label)):
                    return True
            return False

        def record(key, label):
            kept = [o for o in seen.get(key, ()) if not all(x <= y for x, y in zip(label, o))]
            kept.append(label)
            seen[key] = kept

        layer = [(f, start_in_s, (0, 0, 0))]
        record((f, start_in_s), (0, 0, 0))
        for _ in range(max_edges):
            nxt = []
            for v, met, (first, maxgap, open_) in layer:
                for u, w in succ[v]:
                    o = open_ + w
                    if u == f and met:
                        value = max(maxgap, o + first)
                        if value < best:
                            best = value
                    if u in S and u != f or (u == f and start_in_s):
                        if met:
                            label = (first, max(maxgap, o), 0)
                        else:
                            label = (o, 0, 0)
                        met2 = True
                    else:
                        label = (first, maxgap, o)
                        met2 = met
                    if max(label[1], label[0] + label[2]) >= best:
                        continue
                    key = (u, met2)
                    if dominated(key, label):
                        continue
                    record(key, label)
                    nxt.append((u, met2, label))
            layer = nxt
            if not layer:
                break
    return best


# ---------------------------------------------------------------------------
# end-to-end


def simulate_max_gap(ts, prefix, suffix, pi: str, periods: int = 50):
    """Unroll ``prefix . suffix^periods`` and return the largest gap
    between consecutive ``pi`` instants reached after the prefix."""
    seq = list(prefix) + list(suffix) * periods
    t = 0
    instants = []
    for i, q in enumerate(seq):
        if i:
            t = t + ts.weights[(seq[i - 1], q)]
        if i >= len(prefix) and pi in ts.labels[q]:
            instants.append(t)
    if len(instants) < 2:
        return INF
    return max(b - a for a, b in zip(instants, instants[1:]))


def _vector_key(f, vec):
    return tuple(vec[g] for g in subformulas(f))


def _reachable_satisfying(ts, f, anchor, vec) -> bool:
    """Is there a path ``init ... anchor`` whose word, followed by the
    cycle with truth vector ``vec`` at ``anchor``, satisfies ``f``?"""
    preds: dict = {q: [] for q in ts.states}
    for a, b in ts.weights:
        preds[b].append(a)
    start = (anchor, _vector_key(f, vec))
    seen = {start}
    stack = [(anchor, vec)]
    while stack:
        q, v = stack.pop()
        if q == ts.init and v[f]:
            return True
        for p in preds[q]:
            pv = step_back(f, ts.labels[p], v)
            key = (p, _vector_key(f, pv))
            if key not in seen:
                seen.add(key)
                stack.append((p, pv))
    return False


def brute_optimal_cost(ts, f: Formula, pi: str, max_suffix: int):
    """Minimum cost over lassos whose suffix has at most ``max_suffix``
    transitions and whose word satisfies ``f``.

    Closed walks are enumerated depth-first from every state with
    branch-and-bound on their cost; the prefix is unbounded and handled
    by a backward search over truth vectors of the subformulas.
    """
    best = INF
    succ = {q: sorted(ts.successors(q)) for q in ts.states}
    verdicts: dict = {}

    def accepted(anchor, labels):
        key = (anchor, labels)
        if key not in verdicts:
            vec = cycle_truth(f, labels)[0]
            vkey = (anchor, _vector_key(f, vec))
            if vkey not in verdicts:
                verdicts[vkey] = _reachable_satisfying(ts, f, anchor, vec)
            verdicts[key] = verdicts[vkey]
        return verdicts[key]

    for anchor in ts.states:
        walk = [anchor]

        def dfs(t, first, maxgap, last):
            # first: time of first pi instant; last: time of latest one
            nonlocal best
            q = walk[-1]
            for r in succ[q]:
                t2 = t + ts.weights[(q, r)]
                if r == anchor:
                    if first is not None:
                        cost = max(maxgap, t2 - last + first)
                        if cost < best:
                            labels = tuple(ts.labels[x] for x in walk)
                            if accepted(anchor, labels):
                                best = cost
                if len(walk) >= max_suffix:
                    continue
                if pi in ts.labels[r]:
                    if first is None:
                        nf, nm, nl = t2, 0, t2
                    else:
                        nf, nm, nl = first, max(maxgap, t2 - last), t2
                else:
                    nf, nm, nl = first, maxgap, last
                lower = t2 if nf is None else max(nm, t2 - nl + nf)
                if lower >= best:
                    continue
                walk.append(r)
                dfs(t2, nf, nm, nl)
                walk.pop()

        if pi in ts.labels[anchor]:
            dfs(0, 0, 0, 0)
        else:
            dfs(0, None, 0, None)
    return best
