import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import randgen
from ltlplan.ltl import (
    FALSE,
    TRUE,
    Always,
    And,
    Atom,
    Eventually,
    Implies,
    LTLSyntaxError,
    Next,
    Not,
    Or,
    Release,
    Until,
    atoms_of,
    conjuncts,
    depth,
    is_nnf,
    parse_ltl,
    subformulas,
    to_nnf,
    to_text,
)
from ltlplan.oracle import lasso_satisfies

MISSION = (
    "G F P1 && G F P4 && G F P5"
    " && G ((P1 || P4 || P5) -> X (!(P1 || P4 || P5) U (P2 || P3)))"
    " && G ((P2 || P3) -> X (!(P2 || P3) U (P1 || P4 || P5)))"
)


def formulas(props=("a", "b", "c")):
    leaves = st.one_of(st.just(TRUE), st.just(FALSE), st.sampled_from(props).map(Atom))
    unary = [Not, Next, Eventually, Always]
    binary = [And, Or, Implies, Until, Release]

    def extend(children):
        return st.one_of(
            st.tuples(st.sampled_from(unary), children).map(lambda t: t[0](t[1])),
            st.tuples(st.sampled_from(binary), children, children).map(
                lambda t: t[0](t[1], t[2])
            ),
        )

    return st.recursive(leaves, extend, max_leaves=12)


class TestParse:
    def test_gather_upload(self):
        f = parse_ltl("G F gather && G F upload")
        assert f == And(Always(Eventually(Atom("gather"))), Always(Eventually(Atom("upload"))))

    def test_until_is_right_associative(self):
        f = parse_ltl("p1 U p2 U p3")
        assert f == Until(Atom("p1"), Until(Atom("p2"), Atom("p3")))

    def test_release_is_right_associative(self):
        assert parse_ltl("a R b R c") == Release(Atom("a"), Release(Atom("b"), Atom("c")))

    def test_constants(self):
        assert parse_ltl("true") == TRUE
        assert parse_ltl("false") == FALSE

    def test_restriction_formula(self):
        f = parse_ltl("G (P5 -> (!P2 U P3))")
        assert f == Always(Implies(Atom("P5"), Until(Not(Atom("P2")), Atom("P3"))))

    def test_precedence(self):
        f = parse_ltl("!a U b -> c || d && X e")
        assert f == Implies(
            Until(Not(Atom("a")), Atom("b")),
            Or(Atom("c"), And(Atom("d"), Next(Atom("e")))),
        )

    def test_implication_is_right_associative(self):
        assert parse_ltl("a -> b -> c") == Implies(Atom("a"), Implies(Atom("b"), Atom("c")))

    def test_and_or_left_associative(self):
        assert parse_ltl("a && b && c") == And(And(Atom("a"), Atom("b")), Atom("c"))
        assert parse_ltl("a || b || c") == Or(Or(Atom("a"), Atom("b")), Atom("c"))

    def test_unary_binds_tighter_than_until(self):
        assert parse_ltl("F a U G b") == Until(Eventually(Atom("a")), Always(Atom("b")))

    def test_identifiers(self):
        assert parse_ltl("_x1 && Upload_2") == And(Atom("_x1"), Atom("Upload_2"))

    def test_whitespace_and_newlines(self):
        assert parse_ltl("  G\n  ( a\t-> F b )\n") == parse_ltl("G (a -> F b)")

    @pytest.mark.parametrize(
        "text, message, line, column",
        [
            ("", "empty formula", 1, 1),
            ("   \n ", "empty formula", 2, 2),
            ("(a", "unbalanced '('", 1, 1),
            ("a)", "unbalanced ')'", 1, 2),
            ("a &&", "unexpected end", 1, 5),
            ("a & b", "unexpected character '&'", 1, 3),
            ("G\n  (a U)", "unexpected token ')'", 2, 7),
            ("U a", "unexpected token 'U'", 1, 1),
            ("a b", "unexpected token 'b'", 1, 3),
        ],
    )
    def test_errors_carry_position(self, text, message, line, column):
        with pytest.raises(LTLSyntaxError, match=re.escape(message)) as info:
            parse_ltl(text)
        assert (info.value.line, info.value.column) == (line, column)

    def test_keyword_is_not_an_identifier(self):
        with pytest.raises(LTLSyntaxError):
            parse_ltl("a && U")


class TestText:
    def test_binary_nodes_are_parenthesized(self):
        assert to_text(parse_ltl("a U b && c")) == "((a U b) && c)"

    def test_false_prints_as_keyword(self):
        assert to_text(Release(FALSE, Atom("a"))) == "(false R a)"

    @settings(max_examples=300, deadline=None)
    @given(formulas())
    def test_round_trip(self, f):
        assert parse_ltl(to_text(f)) == f


class TestNNF:
    def test_negated_until(self):
        f = to_nnf(Not(Until(Atom("a"), Atom("b"))))
        assert f == Release(Not(Atom("a")), Not(Atom("b")))

    def test_always(self):
        assert to_nnf(Always(Atom("a"))) == Release(FALSE, Atom("a"))

    def test_eventually(self):
        assert to_nnf(Eventually(Atom("a"))) == Until(TRUE, Atom("a"))

    def test_double_negation(self):
        assert to_nnf(Not(Not(Atom("a")))) == Atom("a")

    def test_implication(self):
        assert to_nnf(Implies(Atom("a"), Atom("b"))) == Or(Not(Atom("a")), Atom("b"))

    def test_negated_next(self):
        assert to_nnf(Not(Next(Atom("a")))) == Next(Not(Atom("a")))

    def test_negated_constants(self):
        assert to_nnf(Not(TRUE)) == FALSE
        assert to_nnf(Not(FALSE)) == TRUE

    @settings(max_examples=300, deadline=None)
    @given(formulas())
    def test_output_shape(self, f):
        g = to_nnf(f)
        assert is_nnf(g)
        for h in subformulas(g):
            assert not isinstance(h, (Implies, Eventually, Always))
            if isinstance(h, Not):
                assert isinstance(h.operand, Atom) or h == FALSE

    def test_preserves_semantics(self):
        rng = random.Random(11)
        props = ["a", "b", "c"]
        for _ in range(200):
            f = randgen.formula(rng, 4, props)
            g = to_nnf(f)
            for _ in range(200):
                u, v = randgen.lasso(rng, props)
                assert lasso_satisfies(f, u, v) == lasso_satisfies(g, u, v), (f, u, v)


class TestHelpers:
    def test_atoms_of(self):
        assert atoms_of(parse_ltl("G F gather && G F upload")) == {"gather", "upload"}
        assert atoms_of(TRUE) == frozenset()
        assert atoms_of(parse_ltl(MISSION)) == {"P1", "P2", "P3", "P4", "P5"}

    def test_depth(self):
        assert depth(Atom("a")) == 0
        assert depth(parse_ltl("G F a && b")) == 3

    def test_conjuncts(self):
        f = parse_ltl("a && (b && G c) || d && e")
        assert conjuncts(parse_ltl("a && (b && G c)")) == [Atom("a"), Atom("b"), Always(Atom("c"))]
        assert conjuncts(f) == [f]

    def test_subformulas_children_first(self):
        subs = subformulas(parse_ltl("a U (a && b)"))
        assert subs.index(Atom("a")) < subs.index(And(Atom("a"), Atom("b")))
        assert len(subs) == len(set(subs)) == 4

    def test_operator_sugar(self):
        a, b = Atom("a"), Atom("b")
        assert (a & b) == And(a, b)
        assert (a | b) == Or(a, b)
        assert ~a == Not(a)
