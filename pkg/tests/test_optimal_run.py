import logging
import math
import random
from fractions import Fraction

import pytest

import randgen
from conftest import assert_cost_identity
from ltlplan.buchi import translate
from ltlplan.ltl import Always, And, Atom, Eventually, parse_ltl
from ltlplan.optimal_run import (
    RunLasso,
    Unsatisfiable,
    ensure_recurrence,
    optimal_run,
    plan,
    prefix_to_cycle,
    primitive_period,
    run_cost,
    suffix_cost,
)
from ltlplan.oracle import bellman_ford, brute_optimal_cost, lasso_satisfies
from ltlplan.product import build_product, reachable_part
from ltlplan.ts import TransitionSystem, load_ts

INF = math.inf

RING = """\
props pi
state a pi
state b
state c
state d pi
init a
trans a b 1
trans b c 1
trans c d 1
trans d a 7
"""


def unit(ts):
    return TransitionSystem(ts.states, ts.init, ts.props, ts.labels, {e: 1 for e in ts.weights})


class TestCosts:
    def test_two_instants_in_period_ten(self):
        # pi at times 0 and 3 of a period of 10: gaps 3 and 7
        ts = load_ts(RING)
        lasso = RunLasso((), ("a", "b", "c", "d"))
        assert run_cost(ts, lasso, "pi") == 7
        assert suffix_cost(ts, lasso.suffix, "pi") == 7
        assert_cost_identity(ts, lasso, "pi")

    def test_single_visit_costs_the_period(self):
        ts = load_ts(RING.replace("state d pi", "state d"))
        assert suffix_cost(ts, ("a", "b", "c", "d"), "pi") == 10

    def test_all_pi_unit_weights(self):
        ts = load_ts("props pi\nstate a pi\nstate b pi\ninit a\ntrans a b 1\ntrans b a 1\n")
        assert run_cost(ts, RunLasso((), ("a", "b")), "pi") == 1

    def test_no_pi_is_infinite(self):
        ts = load_ts(RING)
        assert run_cost(ts, RunLasso((), ("b", "c", "d", "a")), "nope") == INF

    def test_prefix_does_not_count(self):
        ts = load_ts(
            "props pi\nstate i pi\nstate a pi\ninit i\ntrans i a 100\ntrans a a 2\n"
        )
        assert run_cost(ts, RunLasso(("i",), ("a",)), "pi") == 2

    def test_invalid_lasso(self):
        ts = load_ts(RING)
        with pytest.raises(ValueError, match="invalid lasso transition"):
            run_cost(ts, RunLasso((), ("a", "c")), "pi")
        with pytest.raises(ValueError, match="nonempty"):
            RunLasso(("a",), ())

    def test_identity_on_random_lassos(self):
        rng = random.Random(9)
        for _ in range(200):
            ts = randgen.transition_system(rng, rng.randint(1, 5), ["p"], p_label=0.5)
            walk = [ts.init]
            for _ in range(rng.randint(1, 10)):
                walk.append(rng.choice(ts.successors(walk[-1])))
            # close the walk at its first repeated state
            for j, q in enumerate(walk):
                if q in walk[:j]:
                    i = walk.index(q)
                    lasso = RunLasso(walk[:i], walk[i:j])
                    assert_cost_identity(ts, lasso, "p")
                    break

    def test_primitive_period(self):
        assert primitive_period(["a", "b", "a", "b"]) == ["a", "b"]
        assert primitive_period(["a", "a", "a"]) == ["a"]
        assert primitive_period(["a", "b", "a"]) == ["a", "b", "a"]


class TestPrefix:
    def test_anchor_initial(self, gather_upload_ts):
        p = build_product(gather_upload_ts, translate(parse_ltl("true"), gather_upload_ts.props), "upload")
        anchor = next(iter(p.initial))
        assert prefix_to_cycle(p, [anchor, anchor]) == []

    def test_chain(self):
        ts = load_ts("props f\nstate i\nstate a\nstate f f\ninit i\ntrans i a 1\ntrans a f 1\ntrans f f 1\n")
        p = build_product(ts, translate(parse_ltl("true"), ts.props), "f")
        (s,) = translate(parse_ltl("true"), ts.props).states
        assert prefix_to_cycle(p, [("f", s), ("f", s)]) == [("i", s), ("a", s)]

    def test_random_against_bellman_ford(self):
        rng = random.Random(10)
        for _ in range(60):
            ts = randgen.transition_system(rng, rng.randint(2, 6), ["a", "p"])
            b = translate(randgen.mission_formula(rng, ["a", "p"]), ts.props)
            p = reachable_part(build_product(ts, b, "p"))
            edges = [(u, v, w) for u in p.states for v, w in p.succ[u]]
            dist = bellman_ford(p.states, edges, p.initial)
            for anchor in p.states:
                prefix = prefix_to_cycle(p, [anchor])
                path = prefix + [anchor]
                assert path[0] in p.initial
                assert sum(p.weight(u, v) for u, v in zip(path, path[1:])) == dist[anchor]


class TestPlan:
    def test_single_state(self):
        ts = load_ts("props pi\nstate q0 pi\ninit q0\ntrans q0 q0 2\n")
        lasso = optimal_run(ts, parse_ltl("G F pi"), "pi")
        assert lasso.prefix == ("q0",) and lasso.suffix == ("q0",) and lasso.cost == 2
        assert_cost_identity(ts, lasso, "pi")

    @pytest.mark.parametrize("weights", ["shipped", "unit"])
    def test_gather_upload_against_brute(self, gather_upload_ts, weights):
        ts = gather_upload_ts if weights == "shipped" else unit(gather_upload_ts)
        phi = parse_ltl("G F gather && G F upload")
        pl = plan(ts, phi, "upload")
        labels = lambda qs: [ts.labels[q] for q in qs]
        assert lasso_satisfies(phi, labels(pl.lasso.prefix), labels(pl.lasso.suffix))
        bound = max(len(ts.states) + 2, len(pl.lasso.suffix))
        assert pl.lasso.cost == brute_optimal_cost(ts, pl.formula, "upload", bound)
        assert_cost_identity(ts, pl.lasso, "upload")

    def test_unit_gather_upload_value(self, gather_upload_ts):
        # q0 q2 q1 q0 gathers then uploads every 3 steps; q1 -> q2 shortcut gives 2
        lasso = optimal_run(unit(gather_upload_ts), parse_ltl("G F gather && G F upload"), "upload")
        assert lasso.cost == 2
        assert lasso.suffix in {("q1", "q2"), ("q2", "q1")}

    def test_unsatisfiable(self):
        ts = load_ts("props p\nstate q0\nstate q1 p\ninit q0\ntrans q0 q0 1\ntrans q1 q1 1\n")
        with pytest.raises(Unsatisfiable):
            plan(ts, parse_ltl("G p"), "p")
        with pytest.raises(Unsatisfiable):
            plan(ts, parse_ltl("G F p"), "p")

    def test_undeclared(self, gather_upload_ts):
        with pytest.raises(ValueError, match="not declared"):
            plan(gather_upload_ts, parse_ltl("G F gather"), "nope")
        with pytest.raises(ValueError, match="undeclared"):
            plan(gather_upload_ts, parse_ltl("G F zzz"), "gather")

    def test_recurrence_conjoined_with_warning(self, gather_upload_ts, caplog):
        with caplog.at_level(logging.WARNING):
            pl = plan(gather_upload_ts, parse_ltl("F gather"), "upload")
        assert "G F upload" in caplog.text
        assert pl.formula == And(parse_ltl("F gather"), Always(Eventually(Atom("upload"))))

    def test_ensure_recurrence(self):
        gf = parse_ltl("G F p")
        assert ensure_recurrence(gf, "p") == (gf, False)
        f = parse_ltl("a && G F p")
        assert ensure_recurrence(f, "p") == (f, False)
        g, added = ensure_recurrence(parse_ltl("a"), "p")
        assert added and g == And(Atom("a"), gf)

    def test_plan_report(self, gather_upload_ts):
        pl = plan(gather_upload_ts, parse_ltl("G F gather && G F upload"), "upload")
        s = pl.stats
        assert s["product_states"] == s["ts_states"] * s["buchi_states"]
        assert s["reachable_states"] <= s["product_states"]
        assert set(pl.timings) == {"translate", "product", "cycle", "prefix"}
        assert all(q in gather_upload_ts.labels and "upload" in gather_upload_ts.labels[q] for q, _ in pl.pi_visits())

    def test_fraction_weights_stay_exact(self):
        ts = load_ts(RING.replace("trans d a 7", "trans d a 1/3"), number=Fraction)
        lasso = optimal_run(ts, parse_ltl("G F pi"), "pi")
        # pi at 0 and 3 in a period of 10/3
        assert lasso.cost == 3 and isinstance(lasso.cost, Fraction)
        assert run_cost(ts, lasso, "pi") == 3

    def test_random_against_brute(self):
        rng = random.Random(11)
        props = ["a", "p"]
        for _ in range(40):
            ts = randgen.transition_system(rng, rng.randint(1, 4), props, p_label=0.6)
            phi = randgen.mission_formula(rng, props)
            try:
                pl = plan(ts, phi, "p")
            except Unsatisfiable:
                phi2, _ = ensure_recurrence(phi, "p")
                assert brute_optimal_cost(ts, phi2, "p", len(ts.states) + 2) == INF
                continue
            lasso = pl.lasso
            labels = lambda qs: [ts.labels[q] for q in qs]
            assert lasso_satisfies(pl.formula, labels(lasso.prefix), labels(lasso.suffix))
            bound = max(len(ts.states) + 2, len(lasso.suffix))
            assert lasso.cost == brute_optimal_cost(ts, pl.formula, "p", bound)
            assert_cost_identity(ts, lasso, "p")
