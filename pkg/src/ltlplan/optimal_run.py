"""Optimal prefix-suffix runs: the end-to-end planning pipeline.

``optimal_run`` translates the mission formula, builds and prunes the
product with the transition system, finds the accepting cycle with the
smallest worst-case gap between visits to the optimizing proposition,
reaches it by a shortest prefix, and projects everything back onto the
transition system.
"""

from __future__ import annotations

import heapq
import logging
import math
import time
from dataclasses import dataclass, field

from .buchi import DEFAULT_MAX_STATES, translate
from .graph import CycleResult, min_bottleneck_cycle
from .ltl import Always, And, Atom, Eventually, Formula, atoms_of, conjuncts
from .product import ProductAutomaton, build_product, project_run, reachable_part
from .ts import TransitionSystem, run_times

logger = logging.getLogger(__name__)

INF = math.inf


class Unsatisfiable(Exception):
    """No run of the system satisfies the formula with finite cost."""


@dataclass(frozen=True)
class RunLasso:
    """The infinite run ``prefix . suffix^omega``.

    ``suffix`` starts at the accepting anchor and does not repeat it at the
    end; ``prefix`` may be empty when the anchor is an initial state.
    """

    prefix: tuple
    suffix: tuple
    cost: object = None
    anchor: object = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "suffix", tuple(self.suffix))
        if not self.suffix:
            raise ValueError("suffix must be nonempty")
        if self.anchor is None:
            object.__setattr__(self, "anchor", self.suffix[0])

    def states(self, periods: int = 1) -> list:
        """Prefix, ``periods`` copies of the suffix, then the anchor again."""
        return [*self.prefix, *(self.suffix * periods), self.suffix[0]]

    def times(self, ts: TransitionSystem, periods: int = 1) -> list:
        return run_times(ts, self.states(periods))


def _check_lasso(step_ok, prefix, suffix):
    seq = list(prefix) + list(suffix) + [suffix[0]]
    for i, (a, b) in enumerate(zip(seq, seq[1:])):
        if not step_ok(a, b):
            raise ValueError(f"invalid lasso transition at index {i}: {a!r} -> {b!r}")


def _steady_max_gap(weights, hits, start, n) -> object:
    """Largest gap between consecutive hit instants whose earlier instant
    lies in the period starting at index ``start`` (``n`` states long).

    Gaps are summed edge by edge from the earlier instant, so float
    results match the path sums of the cycle search exactly.
    """
    best = None
    for i in range(start, start + n):
        if not hits[i]:
            continue
        gap = weights[i]
        j = i + 1
        while not hits[j]:
            gap = gap + weights[j]
            j += 1
        if best is None or gap > best:
            best = gap
    return INF if best is None else best


def run_cost(ts: TransitionSystem, lasso: RunLasso, pi: str):
    """``limsup`` of the time between successive visits to ``pi``.

    Unrolls the run over two suffix periods; every gap that recurs forever
    starts inside the first period and ends before the second one does
    (the next hit is at most one period later).
    """
    _check_lasso(ts.has_transition, lasso.prefix, lasso.suffix)
    seq = lasso.states(periods=2)
    weights = [ts.weight(a, b) for a, b in zip(seq, seq[1:])]
    hits = [pi in ts.labels[q] for q in seq]
    return _steady_max_gap(weights, hits, len(lasso.prefix), len(lasso.suffix))


def suffix_cost(ts: TransitionSystem, suffix, pi: str):
    """Maximum gap between ``pi`` instants over the repeated suffix:
    the gaps inside one period plus the gap across the period boundary."""
    suffix = list(suffix)
    _check_lasso(ts.has_transition, [], suffix)
    offsets = [0]
    for a, b in zip(suffix, suffix[1:] + suffix[:1]):
        offsets.append(offsets[-1] + ts.weight(a, b))
    period = offsets.pop()
    marks = [offsets[i] for i, q in enumerate(suffix) if pi in ts.labels[q]]
    if not marks:
        return INF
    gaps = [b - a for a, b in zip(marks, marks[1:])]
    gaps.append(period - marks[-1] + marks[0])
    return max(gaps)


def product_run_cost(p: ProductAutomaton, prefix, suffix):
    """Cost of a product lasso from product weights and ``S_{P,pi}``."""
    _check_lasso(lambda a, b: p.weight(a, b) is not None, prefix, suffix)
    seq = [*prefix, *suffix, *suffix, suffix[0]]
    weights = [p.weight(a, b) for a, b in zip(seq, seq[1:])]
    hits = [s in p.pi_states for s in seq]
    return _steady_max_gap(weights, hits, len(prefix), len(suffix))


def primitive_period(seq) -> list:
    """Shortest block ``u`` with ``seq == u * k``."""
    seq = list(seq)
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and seq == seq[:p] * (n // p):
            return seq[:p]
    return seq


def prefix_to_cycle(p: ProductAutomaton, cycle) -> list:
    """Minimum-weight path from an initial state to ``cycle[0]``, excluding
    ``cycle[0]`` itself (empty when the anchor is initial)."""
    anchor = cycle[0]
    if anchor in p.initial:
        return []
    dist = {s: 0 for s in p.initial}
    pred: dict = {}
    heap = [(0, s) for s in sorted(p.initial)]
    heapq.heapify(heap)
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        if u == anchor:
            break
        done.add(u)
        for v, w in p.succ[u]:
            nd = d + w
            if nd < dist.get(v, INF):
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    if anchor not in dist:
        raise RuntimeError(f"anchor {anchor!r} unreachable from the initial states")
    path = [anchor]
    while path[-1] not in p.initial:
        path.append(pred[path[-1]])
    path.reverse()
    return path[:-1]


def ensure_recurrence(phi: Formula, pi: str) -> tuple[Formula, bool]:
    """Conjoin ``G F pi`` unless already a top-level conjunct."""
    gf = Always(Eventually(Atom(pi)))
    if gf in conjuncts(phi):
        return phi, False
    return And(phi, gf), True


@dataclass
class Plan:
    """Everything the pipeline produced for one mission."""

    lasso: RunLasso
    formula: Formula
    pi: str
    ts: TransitionSystem
    product_prefix: list
    product_suffix: list
    cycle: CycleResult
    stats: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def pi_visits(self) -> list:
        """``(state, time)`` of every ``pi`` instant in one suffix period,
        times measured from the start of the period."""
        times = run_times(self.ts, list(self.lasso.suffix))
        return [
            (q, t)
            for q, t in zip(self.lasso.suffix, times)
            if self.pi in self.ts.labels[q]
        ]


def plan(
    ts: TransitionSystem,
    phi: Formula,
    pi: str,
    max_buchi_states: int = DEFAULT_MAX_STATES,
) -> Plan:
    """Run the full pipeline; raises :class:`Unsatisfiable` if no run of
    finite cost satisfies ``phi``."""
    if pi not in ts.props:
        raise ValueError(f"optimizing proposition {pi!r} is not declared")
    unknown = atoms_of(phi) - ts.props
    if unknown:
        raise ValueError(f"formula uses undeclared propositions: {sorted(unknown)}")
    phi, added = ensure_recurrence(phi, pi)
    if added:
        logger.warning("formula lacks 'G F %s'; conjoining it", pi)

    timings = {}
    clock = time.perf_counter()
    b = translate(phi, ts.props, max_states=max_buchi_states)
    timings["translate"] = time.perf_counter() - clock

    clock = time.perf_counter()
    full = build_product(ts, b, pi)
    prod = reachable_part(full)
    timings["product"] = time.perf_counter() - clock

    stats = {
        "ts_states": len(ts.states),
        "ts_transitions": len(ts.weights),
        "buchi_states": len(b),
        "buchi_transitions": len(b.transitions),
        "product_states": len(full),
        "product_accepting": len(full.accepting),
        "product_pi_states": len(full.pi_states),
        "reachable_states": len(prod),
        "reachable_transitions": prod.num_transitions,
        "reachable_accepting": len(prod.accepting),
        "reachable_pi_states": len(prod.pi_states),
    }

    clock = time.perf_counter()
    res = min_bottleneck_cycle(prod.graph(), prod.pi_states, prod.accepting)
    timings["cycle"] = time.perf_counter() - clock
    if res is None:
        raise Unsatisfiable("no accepting cycle visits the optimizing proposition")

    clock = time.perf_counter()
    suffix = res.cycle[:-1]
    prefix = prefix_to_cycle(prod, res.cycle)
    timings["prefix"] = time.perf_counter() - clock

    projected = project_run(prod, prefix + suffix + [suffix[0]])
    # distinct automaton states may project onto a repeated block
    lasso = RunLasso(
        prefix=projected[: len(prefix)],
        suffix=primitive_period(projected[len(prefix) : len(prefix) + len(suffix)]),
        cost=res.length,
        anchor=suffix[0][0],
    )
    return Plan(lasso, phi, pi, ts, prefix, suffix, res, stats, timings)


def optimal_run(
    ts: TransitionSystem,
    phi: Formula,
    pi: str,
    max_buchi_states: int = DEFAULT_MAX_STATES,
) -> RunLasso:
    """A run of ``ts`` satisfying ``phi`` that minimizes the longest time
    between visits to ``pi`` in steady state."""
    return plan(ts, phi, pi, max_buchi_states).lasso
