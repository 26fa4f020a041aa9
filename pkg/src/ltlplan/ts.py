"""Weighted transition systems: the robot/environment model.

Text format, one directive per line (``#`` starts a comment)::

    props gather upload recharge
    state q0
    state q1 upload
    init q0
    trans q0 q1 3.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping


class TSFormatError(ValueError):
    """Invalid transition-system text or an invariant violation."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class InvalidRunError(ValueError):
    """A state sequence uses a transition that is not in the system."""

    def __init__(self, index: int, src, dst):
        super().__init__(f"no transition {src!r} -> {dst!r} at index {index}")
        self.index = index


@dataclass(frozen=True)
class TransitionSystem:
    """``(Q, q0, R, Pi, L, w)`` with positive weights and no blocking state.

    ``weights`` maps ``(src, dst)`` pairs to the transition weight; the
    transition relation is its key set.
    """

    states: tuple
    init: str
    props: frozenset
    labels: Mapping[str, frozenset]
    weights: Mapping[tuple, object]
    _succ: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(sorted(self.states))
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "props", frozenset(self.props))
        known = set(states)
        if len(known) != len(states):
            raise TSFormatError("duplicate state id")
        if self.init not in known:
            raise TSFormatError(f"initial state {self.init!r} is not a state")
        labels = {q: frozenset(self.labels.get(q, ())) for q in states}
        for q in self.labels:
            if q not in known:
                raise TSFormatError(f"label for unknown state {q!r}")
        for q, lab in labels.items():
            extra = lab - self.props
            if extra:
                raise TSFormatError(
                    f"state {q!r} uses undeclared propositions {sorted(extra)}"
                )
        succ: dict = {q: [] for q in states}
        for (src, dst), w in self.weights.items():
            if src not in known or dst not in known:
                raise TSFormatError(f"transition {src!r} -> {dst!r} uses unknown state")
            if not (w > 0) or (isinstance(w, float) and not math.isfinite(w)):
                raise TSFormatError(f"weight of {src!r} -> {dst!r} must be positive and finite")
            succ[src].append(dst)
        for q in states:
            if not succ[q]:
                raise TSFormatError(f"blocking state {q!r} has no outgoing transition")
            succ[q].sort()
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", dict(self.weights))
        object.__setattr__(self, "_succ", succ)

    def successors(self, q) -> list:
        return self._succ[q]

    def weight(self, src, dst):
        return self.weights[(src, dst)]

    def has_transition(self, src, dst) -> bool:
        return (src, dst) in self.weights

    def with_proposition(self, name: str, holds: Callable[[frozenset], bool]):
        """Copy with a new proposition added to every label where ``holds``."""
        if name in self.props:
            raise ValueError(f"proposition {name!r} already declared")
        labels = {
            q: lab | {name} if holds(lab) else lab for q, lab in self.labels.items()
        }
        return TransitionSystem(
            self.states, self.init, self.props | {name}, labels, self.weights
        )

    def to_text(self) -> str:
        lines = ["props " + " ".join(sorted(self.props))]
        for q in self.states:
            lines.append(" ".join(["state", q, *sorted(self.labels[q])]))
        lines.append(f"init {self.init}")
        for (src, dst), w in sorted(self.weights.items()):
            lines.append(f"trans {src} {dst} {w}")
        return "\n".join(lines) + "\n"


def load_ts(text: str, number: Callable[[str], object] = float) -> TransitionSystem:
    """Parse and validate a transition system.

    ``number`` converts weight literals; pass ``fractions.Fraction`` for
    exact arithmetic.
    """
    props = None
    states: list = []
    labels: dict = {}
    init = None
    weights: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *args = line.split()
        if head == "props":
            if props is not None:
                raise TSFormatError("duplicate 'props' line", lineno)
            props = frozenset(args)
        elif head == "state":
            if not args:
                raise TSFormatError("'state' needs an id", lineno)
            q, *lab = args
            if q in labels:
                raise TSFormatError(f"duplicate state id {q!r}", lineno)
            if props is None:
                raise TSFormatError("'props' must precede states", lineno)
            unknown = set(lab) - props
            if unknown:
                raise TSFormatError(
                    f"proposition {sorted(unknown)[0]!r} used but not declared", lineno
                )
            states.append(q)
            labels[q] = frozenset(lab)
        elif head == "init":
            if len(args) != 1:
                raise TSFormatError("'init' takes exactly one state", lineno)
            if init is not None:
                raise TSFormatError("more than one 'init' line", lineno)
            init = args[0]
        elif head == "trans":
            if len(args) != 3:
                raise TSFormatError("'trans' takes <src> <dst> <weight>", lineno)
            src, dst, lit = args
            for q in (src, dst):
                if q not in labels:
                    raise TSFormatError(f"unknown state {q!r} in transition", lineno)
            if (src, dst) in weights:
                raise TSFormatError(f"duplicate transition {src} -> {dst}", lineno)
            try:
                w = number(lit)
            except (ValueError, ZeroDivisionError):
                raise TSFormatError(f"bad weight {lit!r}", lineno) from None
            if not (w > 0) or not math.isfinite(w):
                raise TSFormatError(
                    f"weight {lit} of {src} -> {dst} must be positive and finite", lineno
                )
            weights[(src, dst)] = w
        else:
            raise TSFormatError(f"unknown directive {head!r}", lineno)
    if props is None:
        props = frozenset()
    if init is None:
        raise TSFormatError("missing initial state ('init' line)")
    if init not in labels:
        raise TSFormatError(f"initial state {init!r} is not declared")
    return TransitionSystem(tuple(states), init, props, labels, weights)


def load_ts_file(path, number=float) -> TransitionSystem:
    with open(path, encoding="utf-8") as fh:
        return load_ts(fh.read(), number)


def _check_run(ts: TransitionSystem, run):
    if not run:
        raise ValueError("empty run")
    for q in run:
        if q not in ts.labels:
            raise ValueError(f"unknown state {q!r}")
    for i in range(len(run) - 1):
        if not ts.has_transition(run[i], run[i + 1]):
            raise InvalidRunError(i, run[i], run[i + 1])


def run_word(ts: TransitionSystem, run, from_init: bool = False) -> list[frozenset]:
    """The labels ``L(q_0) L(q_1) ...`` along a finite run."""
    _check_run(ts, run)
    if from_init and run[0] != ts.init:
        raise ValueError(f"run starts at {run[0]!r}, not the initial state")
    return [ts.labels[q] for q in run]


def run_times(ts: TransitionSystem, run) -> list:
    """Arrival times along a run: ``t_0 = 0``, ``t_{i+1} = t_i + w(q_i, q_{i+1})``."""
    _check_run(ts, run)
    times = [0]
    for a, b in zip(run, run[1:]):
        times.append(times[-1] + ts.weight(a, b))
    return times

