"""Command-line interface: ``ltlplan plan|verify|cycle|export-dot``.

Mission files are ``key: value`` lines::

    # comment
    ts: road-network.ts        # relative to the mission file
    formula: G F P1 && G F P4
    optimize: P2 | P3          # one proposition, or a disjunction

Exit codes: 0 success, 1 input error, 2 unsatisfiable / no cycle,
3 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .buchi import DEFAULT_MAX_STATES, TranslationLimitError, translate
from .graph import load_graph, min_bottleneck_cycle
from .ltl import LTLSyntaxError, Formula, parse_ltl, to_text
from .optimal_run import RunLasso, Unsatisfiable, ensure_recurrence, plan, run_cost
from .oracle import brute_optimal_cost, lasso_satisfies
from .product import build_product, reachable_part
from .ts import TransitionSystem, TSFormatError, load_ts_file

EXIT_OK, EXIT_INPUT, EXIT_UNSAT, EXIT_DISAGREE = 0, 1, 2, 3

OPT_PROP = "__opt"

log = logging.getLogger("ltlplan")


class MissionError(ValueError):
    """Malformed mission file or unresolved reference."""


@dataclass(frozen=True)
class Mission:
    path: Path
    ts_path: Path
    formula_text: str
    optimize: tuple  # one or more proposition names

    @property
    def pi(self) -> str:
        return self.optimize[0] if len(self.optimize) == 1 else OPT_PROP


def parse_mission(text: str, base: Path = Path("."), path: Path | None = None) -> Mission:
    fields: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition(":")
        key, value = key.strip(), value.strip()
        if not sep or key not in ("ts", "formula", "optimize"):
            raise MissionError(f"line {lineno}: expected 'ts:', 'formula:' or 'optimize:'")
        if key in fields:
            raise MissionError(f"line {lineno}: duplicate '{key}:'")
        if not value:
            raise MissionError(f"line {lineno}: empty '{key}:'")
        fields[key] = value
    for key in ("ts", "formula", "optimize"):
        if key not in fields:
            raise MissionError(f"missing '{key}:' field")
    names = tuple(p.strip() for p in fields["optimize"].split("|"))
    if any(not p or not p.replace("_", "a").isalnum() for p in names):
        raise MissionError(f"bad optimize target {fields['optimize']!r}")
    if OPT_PROP in names:
        raise MissionError(f"'{OPT_PROP}' is reserved")
    return Mission(path or base, base / fields["ts"], fields["formula"], names)


def load_mission(path) -> Mission:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise MissionError(f"cannot read mission file: {exc.strerror}") from None
    return parse_mission(text, path.parent, path)


def resolve(mission: Mission) -> tuple[TransitionSystem, Formula, str]:
    """Load the system, parse the formula, and set up the optimizing
    proposition (adding the fresh one for a disjunction)."""
    if not mission.ts_path.is_file():
        raise MissionError(f"transition system file not found: {mission.ts_path}")
    ts = load_ts_file(mission.ts_path)
    phi = parse_ltl(mission.formula_text)
    for p in mission.optimize:
        if p not in ts.props:
            raise MissionError(f"optimize target {p!r} is not a declared proposition")
    if len(mission.optimize) > 1:
        if OPT_PROP in ts.props:
            raise MissionError(f"'{OPT_PROP}' is reserved")
        wanted = frozenset(mission.optimize)
        ts = ts.with_proposition(OPT_PROP, lambda lab: bool(lab & wanted))
        # the formula cannot mention the fresh name, so add its recurrence here
        phi, _ = ensure_recurrence(phi, OPT_PROP)
    return ts, phi, mission.pi


def result_document(pl, with_timings: bool = False) -> dict:
    ts, lasso = pl.ts, pl.lasso
    doc = {
        "formula": to_text(pl.formula),
        "optimize": pl.pi,
        "prefix": list(lasso.prefix),
        "suffix": list(lasso.suffix),
        "anchor": lasso.anchor,
        "cost": float(run_cost(ts, lasso, pl.pi)),
        "pi_visits": [{"state": q, "time": float(t)} for q, t in pl.pi_visits()],
        "stats": dict(pl.stats),
    }
    if with_timings:
        doc["timings"] = {k: round(v, 6) for k, v in pl.timings.items()}
    return doc


def _write(path, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _fmt(x) -> str:
    return f"{x:.6g}"


# ---------------------------------------------------------------------------
# subcommands


def cmd_plan(args) -> int:
    mission = load_mission(args.mission)
    ts, phi, pi = resolve(mission)
    try:
        pl = plan(ts, phi, pi, max_buchi_states=args.max_buchi_states)
    except Unsatisfiable as exc:
        print(f"unsatisfiable: {exc}", file=sys.stderr)
        return EXIT_UNSAT
    doc = result_document(pl, with_timings=args.timings)
    if args.json:
        _write(args.json, json.dumps(doc, indent=2, sort_keys=True) + "\n")
    if args.dot_buchi:
        _write(args.dot_buchi, translate(pl.formula, ts.props, args.max_buchi_states).to_dot())
    if args.dot_product:
        b = translate(pl.formula, ts.props, args.max_buchi_states)
        _write(args.dot_product, reachable_part(build_product(ts, b, pi)).to_dot())
    if not args.quiet:
        s = doc["stats"]
        print(f"cost: {_fmt(doc['cost'])}")
        print(f"prefix: {' '.join(doc['prefix']) or '(empty)'}")
        print(f"suffix: {' '.join(doc['suffix'])}")
        print(
            f"system {s['ts_states']} states, automaton {s['buchi_states']} states, "
            f"product {s['product_states']} states "
            f"(accepting {s['product_accepting']}, {pi} {s['product_pi_states']}), "
            f"reachable {s['reachable_states']}"
        )
        visits = ", ".join(f"{v['state']}@{_fmt(v['time'])}" for v in doc["pi_visits"])
        print(f"{pi} visits per period: {visits}")
    return EXIT_OK


def _disagree(msg: str) -> int:
    print(f"oracle disagreement: {msg}", file=sys.stderr)
    return EXIT_DISAGREE


def cmd_verify(args) -> int:
    mission = load_mission(args.mission)
    ts, phi, pi = resolve(mission)
    full, _ = ensure_recurrence(phi, pi)
    if args.result:
        try:
            doc = json.loads(Path(args.result).read_text(encoding="utf-8"))
            lasso = RunLasso(doc["prefix"], doc["suffix"])
            cost = doc["cost"]
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise MissionError(f"cannot read result file: {exc}") from None
    else:
        try:
            pl = plan(ts, phi, pi, max_buchi_states=args.max_buchi_states)
        except Unsatisfiable:
            lasso, cost = None, math.inf
        else:
            lasso, cost = pl.lasso, float(run_cost(ts, pl.lasso, pi))

    if lasso is not None:
        seq = list(lasso.prefix) + list(lasso.suffix)
        if not seq or seq[0] != ts.init:
            return _disagree("run does not start at the initial state")
        if any(q not in ts.labels for q in seq):
            return _disagree("run uses unknown states")
        try:
            actual = run_cost(ts, lasso, pi)
        except ValueError as exc:
            return _disagree(str(exc))
        if actual != cost:
            return _disagree(f"stored cost {cost!r} but the run costs {actual!r}")
        word = [ts.labels[q] for q in lasso.prefix], [ts.labels[q] for q in lasso.suffix]
        if not lasso_satisfies(full, *word):
            return _disagree("run does not satisfy the formula")
        print(f"satisfaction: ok (cost {_fmt(cost)})")

    if args.skip_optimality:
        print("optimality: skipped")
        return EXIT_OK
    bound = args.oracle_max_suffix
    if lasso is not None:
        bound = max(bound, len(lasso.suffix))
    best = brute_optimal_cost(ts, full, pi, bound)
    if best != cost:
        return _disagree(f"brute force finds cost {best!r}, pipeline {cost!r}")
    print(f"optimality: ok (suffixes up to {bound} transitions)")
    return EXIT_OK


def cmd_cycle(args) -> int:
    path = Path(args.graph)
    try:
        g = load_graph(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise MissionError(f"cannot read graph file: {exc.strerror}") from None
    S, F = args.s_set.split(","), args.f_set.split(",")
    for v in S + F:
        if v not in g:
            raise MissionError(f"unknown vertex {v!r}")
    res = min_bottleneck_cycle(g, S, F)
    if res is None:
        print("no cycle exists")
        return EXIT_UNSAT
    print(f"cost: {_fmt(res.length)}")
    print("cycle: " + " ".join(map(str, res.cycle)))
    return EXIT_OK


def cmd_export_dot(args) -> int:
    mission = load_mission(args.mission)
    ts, phi, pi = resolve(mission)
    phi, _ = ensure_recurrence(phi, pi)
    b = translate(phi, ts.props, args.max_buchi_states)
    if args.what == "buchi":
        _write(args.output, b.to_dot())
    else:
        p = build_product(ts, b, pi)
        _write(args.output, (p if args.full else reachable_part(p)).to_dot())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltlplan", description="Optimal LTL mission planning on weighted transition systems."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="synthesize an optimal run for a mission")
    p.add_argument("mission")
    p.add_argument("--json", metavar="PATH", help="write the result document ('-' for stdout)")
    p.add_argument("--dot-buchi", metavar="PATH")
    p.add_argument("--dot-product", metavar="PATH")
    p.add_argument("--max-buchi-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--timings", action="store_true", help="include wall times in the JSON")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="cross-check a mission against the brute-force oracle")
    p.add_argument("mission")
    p.add_argument("--result", metavar="JSON", help="check this result instead of re-planning")
    p.add_argument("--skip-optimality", action="store_true")
    p.add_argument("--oracle-max-suffix", type=int, default=8)
    p.add_argument("--max-buchi-states", type=int, default=DEFAULT_MAX_STATES)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("cycle", help="minimum S-bottleneck cycle through F in a graph file")
    p.add_argument("graph")
    p.add_argument("--s-set", required=True, help="comma-separated vertices")
    p.add_argument("--f-set", required=True, help="comma-separated vertices")
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("export-dot", help="write the automaton or product as DOT")
    p.add_argument("mission")
    p.add_argument("what", choices=["buchi", "product"])
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--full", action="store_true", help="product before pruning")
    p.add_argument("--max-buchi-states", type=int, default=DEFAULT_MAX_STATES)
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    started = time.perf_counter()
    try:
        code = args.func(args)
    except (MissionError, TSFormatError, LTLSyntaxError, TranslationLimitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    log.info("done in %.3f s", time.perf_counter() - started)
    return code


if __name__ == "__main__":
    sys.exit(main())
