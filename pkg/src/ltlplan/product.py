"""Product of a weighted transition system with a Büchi automaton."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .buchi import BuchiAutomaton
from .graph import WeightedDigraph
from .ts import TransitionSystem


@dataclass(frozen=True)
class ProductAutomaton:
    """States are pairs ``(q, s)``.

    A transition ``(q, s) -> (q2, s2)`` exists iff ``q -> q2`` is a
    transition of the system and the automaton moves ``s -> s2`` reading
    the label of the *source* state ``q``; it inherits the weight of
    ``q -> q2``.
    """

    states: tuple
    initial: frozenset
    succ: dict  # state -> tuple of (state, weight)
    accepting: frozenset
    pi_states: frozenset
    pi: str

    def __len__(self):
        return len(self.states)

    @property
    def num_transitions(self) -> int:
        return sum(len(v) for v in self.succ.values())

    def weight(self, src, dst):
        for t, w in self.succ.get(src, ()):
            if t == dst:
                return w
        return None

    def graph(self) -> WeightedDigraph:
        return WeightedDigraph(
            ((p, t, w) for p in self.states for t, w in self.succ[p]), self.states
        )

    def to_dot(self, name="product") -> str:
        lines = [f"digraph {name} {{", "  __init [shape=point];"]
        for p in self.states:
            attrs = ["shape=doublecircle" if p in self.accepting else "shape=circle"]
            if p in self.pi_states:
                attrs.append("style=filled")
            lines.append(f'  "{state_id(p)}" [{", ".join(attrs)}];')
        for p in sorted(self.initial):
            lines.append(f'  __init -> "{state_id(p)}";')
        for p in self.states:
            for t, w in self.succ[p]:
                lines.append(f'  "{state_id(p)}" -> "{state_id(t)}" [label="{w}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def state_id(p) -> str:
    """Composite text id ``(q,s)`` of a product state."""
    return f"({p[0]},{p[1]})"


def build_product(ts: TransitionSystem, b: BuchiAutomaton, pi: str) -> ProductAutomaton:
    """The full product ``ts x b`` with optimizing proposition ``pi``."""
    if pi not in ts.props:
        raise ValueError(f"optimizing proposition {pi!r} is not declared")
    extra = b.props - ts.props
    if extra:
        raise ValueError(
            f"automaton alphabet uses propositions unknown to the system: {sorted(extra)}"
        )
    b_states = sorted(b.states, key=_state_key)
    states = tuple((q, s) for q in ts.states for s in b_states)
    succ = {}
    for q in ts.states:
        label = ts.labels[q]
        moves = [(q2, ts.weight(q, q2)) for q2 in ts.successors(q)]
        for s in b_states:
            nxt = sorted(b.successors(s, label), key=_state_key)
            succ[(q, s)] = tuple(((q2, s2), w) for q2, w in moves for s2 in nxt)
    return ProductAutomaton(
        states=states,
        initial=frozenset((ts.init, s) for s in b.initial),
        succ=succ,
        accepting=frozenset((q, s) for q in ts.states for s in b.accepting),
        pi_states=frozenset((q, s) for q in ts.states if pi in ts.labels[q] for s in b.states),
        pi=pi,
    )


def _state_key(s):
    # "s12" sorts after "s2"
    if isinstance(s, str) and s[1:].isdigit():
        return (s[0], int(s[1:]))
    return (str(s), 0)


def reachable_part(p: ProductAutomaton) -> ProductAutomaton:
    """Restrict ``p`` to the states reachable from its initial states."""
    seen = set(p.initial)
    queue = deque(sorted(p.initial))
    while queue:
        for t, _ in p.succ[queue.popleft()]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return ProductAutomaton(
        states=tuple(s for s in p.states if s in seen),
        initial=p.initial,
        succ={s: p.succ[s] for s in p.states if s in seen},
        accepting=p.accepting & seen,
        pi_states=p.pi_states & seen,
        pi=p.pi,
    )


def project_run(p: ProductAutomaton, run, check: bool = True) -> list:
    """First components of a product run."""
    run = list(run)
    if check:
        if not run:
            raise ValueError("empty product run")
        if run[0] not in p.initial:
            raise ValueError(f"run starts at non-initial state {run[0]!r}")
        for i, (a, b) in enumerate(zip(run, run[1:])):
            if p.weight(a, b) is None:
                raise ValueError(f"invalid product transition at index {i}: {a!r} -> {b!r}")
    return [q for q, _ in run]
