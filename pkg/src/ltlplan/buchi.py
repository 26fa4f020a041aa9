"""Büchi automata with symbolic guards, and LTL-to-Büchi translation.

The translation is a tableau construction: sets of pending obligations
are split into covers (literal guard plus next-step obligations), giving
a generalized Büchi automaton with one acceptance set per ``Until``
subformula, which a level counter then degeneralizes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .ltl import (
    And,
    Atom,
    Formula,
    Next,
    Not,
    Or,
    Release,
    TrueConst,
    Until,
    atoms_of,
    is_false,
    subformulas,
    to_nnf,
)

DEFAULT_MAX_STATES = 10_000


class TranslationLimitError(RuntimeError):
    """The automaton grew past the configured state cap."""


@dataclass(frozen=True, order=True)
class Guard:
    """Conjunction of literals: ``pos`` must hold, ``neg`` must not."""

    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    def __post_init__(self):
        if self.pos & self.neg:
            raise ValueError(f"unsatisfiable guard: {sorted(self.pos & self.neg)}")

    def satisfied_by(self, label) -> bool:
        return self.pos <= label and self.neg.isdisjoint(label)

    @property
    def props(self) -> frozenset:
        return self.pos | self.neg

    def __str__(self):
        lits = [p for p in sorted(self.pos)] + [f"!{p}" for p in sorted(self.neg)]
        return " && ".join(lits) if lits else "true"


@dataclass(frozen=True)
class BuchiAutomaton:
    states: tuple
    initial: frozenset
    transitions: tuple  # (src, Guard, dst) triples
    accepting: frozenset
    props: frozenset
    _out: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        known = set(self.states)
        if not self.initial <= known or not self.accepting <= known:
            raise ValueError("initial/accepting states must be automaton states")
        out = {s: [] for s in self.states}
        for src, guard, dst in self.transitions:
            if src not in known or dst not in known:
                raise ValueError(f"dangling transition {src!r} -> {dst!r}")
            if not guard.props <= self.props:
                raise ValueError(f"guard {guard} mentions undeclared propositions")
            out[src].append((guard, dst))
        object.__setattr__(self, "_out", out)

    def __len__(self):
        return len(self.states)

    def edges_from(self, state):
        """List of ``(guard, dst)`` pairs leaving ``state``."""
        return self._out[state]

    def successors(self, state, label) -> list:
        """Destinations reachable from ``state`` reading the letter ``label``."""
        seen = []
        for guard, dst in self._out[state]:
            if guard.satisfied_by(label) and dst not in seen:
                seen.append(dst)
        return seen

    def to_dot(self, name="buchi") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", '  __init [shape=point];']
        for s in self.states:
            shape = "doublecircle" if s in self.accepting else "circle"
            lines.append(f'  "{s}" [shape={shape}];')
        for s in sorted(self.initial):
            lines.append(f'  __init -> "{s}";')
        for src, guard, dst in self.transitions:
            lines.append(f'  "{src}" -> "{dst}" [label="{guard}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# tableau construction


def _negate_literal(f: Formula) -> Formula:
    if isinstance(f, Not):
        return f.operand
    return Not(f)


@dataclass(frozen=True)
class _Cover:
    """One way of discharging a set of obligations in the current step."""

    pos: frozenset
    neg: frozenset
    nxt: frozenset
    pending: frozenset  # Until formulas postponed to the next step

    def subsumes(self, other: "_Cover") -> bool:
        return (
            self.pos <= other.pos
            and self.neg <= other.neg
            and self.nxt <= other.nxt
            and self.pending <= other.pending
        )


class _Tableau:
    """Splits obligation sets of an NNF formula into covers."""

    def __init__(self, phi: Formula):
        subs = subformulas(phi)
        # non-branching obligations first, so contradictions prune early
        self.rank = {
            g: (isinstance(g, (Or, Until, Release)), i) for i, g in enumerate(subs)
        }
        self.untils = [g for g in subs if isinstance(g, Until)]
        self._cache: dict = {}

    def key(self, formulas) -> tuple:
        return tuple(sorted(self.rank[g][1] for g in formulas))

    def covers(self, obligations: frozenset) -> list[_Cover]:
        if obligations in self._cache:
            return self._cache[obligations]
        found: list[_Cover] = []
        empty = frozenset()
        stack = [(obligations, empty, empty, empty, empty, empty)]
        while stack:
            todo, done, pos, neg, nxt, pending = stack.pop()
            if not todo:
                found.append(_Cover(pos, neg, nxt, pending))
                continue
            eta = min(todo, key=self.rank.__getitem__)
            todo = todo - {eta}
            if eta in done:
                stack.append((todo, done, pos, neg, nxt, pending))
                continue
            done = done | {eta}
            if isinstance(eta, TrueConst):
                stack.append((todo, done, pos, neg, nxt, pending))
            elif is_false(eta):
                continue
            elif isinstance(eta, Atom):
                if eta.name not in neg:
                    stack.append((todo, done, pos | {eta.name}, neg, nxt, pending))
            elif isinstance(eta, Not):
                name = eta.operand.name
                if name not in pos:
                    stack.append((todo, done, pos, neg | {name}, nxt, pending))
            elif isinstance(eta, And):
                stack.append((todo | {eta.left, eta.right}, done, pos, neg, nxt, pending))
            elif isinstance(eta, Next):
                later = nxt if isinstance(eta.operand, TrueConst) else nxt | {eta.operand}
                stack.append((todo, done, pos, neg, later, pending))
            elif isinstance(eta, Or):
                stack.append((todo | {eta.right}, done, pos, neg, nxt, pending))
                stack.append((todo | {eta.left}, done, pos, neg, nxt, pending))
            elif isinstance(eta, Until):
                stack.append((todo | {eta.right}, done, pos, neg, nxt, pending))
                stack.append(
                    (todo | {eta.left}, done, pos, neg, nxt | {eta}, pending | {eta})
                )
            elif isinstance(eta, Release):
                stack.append((todo | {eta.left, eta.right}, done, pos, neg, nxt, pending))
                stack.append((todo | {eta.right}, done, pos, neg, nxt | {eta}, pending))
            else:
                raise TypeError(f"formula not in negation normal form: {eta!r}")

        # drop duplicates and covers implied by a weaker one
        unique = list(dict.fromkeys(found))
        kept = [
            c
            for c in unique
            if not any(d != c and d.subsumes(c) for d in unique)
        ]
        kept.sort(
            key=lambda c: (
                sorted(c.pos),
                sorted(c.neg),
                self.key(c.nxt),
                self.key(c.pending),
            )
        )
        self._cache[obligations] = kept
        return kept


def translate(
    f: Formula,
    props: Iterable[str] | None = None,
    max_states: int = DEFAULT_MAX_STATES,
) -> BuchiAutomaton:
    """Build a Büchi automaton accepting exactly the words satisfying ``f``.

    ``props`` is the proposition universe of the alphabet; it defaults to
    the atoms of ``f`` and must contain them.  Raises
    :class:`TranslationLimitError` when more than ``max_states`` states
    would be produced.
    """
    universe = frozenset(atoms_of(f) if props is None else props)
    missing = atoms_of(f) - universe
    if missing:
        raise ValueError(f"formula uses undeclared propositions: {sorted(missing)}")

    phi = to_nnf(f)
    tableau = _Tableau(phi)
    untils = tableau.untils
    k = len(untils)

    # Generalized automaton: states are obligation sets, and a transition is
    # in the acceptance set of ``u`` unless it postpones ``u``.  Degeneralized
    # with a level counter; level ``k`` marks accepting states.
    start = (frozenset() if isinstance(phi, TrueConst) else frozenset({phi}), 0)
    names = {start: "s0"}
    order = [start]
    queue = deque([start])
    edges = []
    while queue:
        state = queue.popleft()
        obligations, level = state
        base = 0 if level == k else level
        for cover in tableau.covers(obligations):
            j = base
            while j < k and untils[j] not in cover.pending:
                j += 1
            target = (cover.nxt, j)
            if target not in names:
                if len(names) >= max_states:
                    raise TranslationLimitError(
                        f"automaton exceeded {max_states} states"
                    )
                names[target] = f"s{len(names)}"
                order.append(target)
                queue.append(target)
            edges.append((names[state], Guard(cover.pos, cover.neg), names[target]))

    return BuchiAutomaton(
        states=tuple(names[s] for s in order),
        initial=frozenset({"s0"}),
        transitions=tuple(dict.fromkeys(edges)),
        accepting=frozenset(names[s] for s in order if s[1] == k),
        props=universe,
    )


# ---------------------------------------------------------------------------
# acceptance of ultimately periodic words


def accepts_lasso(b: BuchiAutomaton, prefix, cycle) -> bool:
    """Does ``b`` accept the infinite word ``prefix . cycle^omega``?

    Searches the finite graph of (state, word position) pairs for a
    reachable cycle through an accepting pair.
    """
    prefix = [frozenset(x) for x in prefix]
    cycle = [frozenset(x) for x in cycle]
    if not cycle:
        raise ValueError("cycle must be nonempty")
    word = prefix + cycle
    n = len(word)

    def nxt(i):
        return i + 1 if i + 1 < n else len(prefix)

    def succ(node):
        s, i = node
        j = nxt(i)
        return [(t, j) for t in b.successors(s, word[i])]

    reach = set()
    stack = [(s, 0) for s in b.initial]
    reach.update(stack)
    while stack:
        for m in succ(stack.pop()):
            if m not in reach:
                reach.add(m)
                stack.append(m)

    for node in reach:
        if node[0] not in b.accepting or node[1] < len(prefix):
            continue
        # does node lie on a cycle?
        seen = set()
        stack = succ(node)
        while stack:
            m = stack.pop()
            if m == node:
                return True
            if m not in seen:
                seen.add(m)
                stack.extend(succ(m))
    return False
