"""Optimal LTL mission planning on weighted transition systems.

Given a transition system, an LTL formula and an optimizing proposition
``pi``, :func:`optimal_run` returns a run ``prefix . suffix^omega``
satisfying the formula that minimizes the longest time between
successive ``pi`` states in steady state.
"""

from .buchi import BuchiAutomaton, Guard, accepts_lasso, translate
from .graph import WeightedDigraph, min_bottleneck_cycle
from .ltl import parse_ltl, to_nnf, to_text
from .optimal_run import RunLasso, Unsatisfiable, optimal_run, plan, run_cost
from .product import ProductAutomaton, build_product
from .ts import TransitionSystem, load_ts, load_ts_file

__version__ = "0.1.0"

__all__ = [
    "BuchiAutomaton",
    "Guard",
    "ProductAutomaton",
    "RunLasso",
    "TransitionSystem",
    "Unsatisfiable",
    "WeightedDigraph",
    "accepts_lasso",
    "build_product",
    "load_ts",
    "load_ts_file",
    "min_bottleneck_cycle",
    "optimal_run",
    "parse_ltl",
    "plan",
    "run_cost",
    "to_nnf",
    "to_text",
    "translate",
]
