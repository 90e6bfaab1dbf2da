import unittest

from constraints.classify import classify, is_pattern, orient
from constraints.constraint import ConstraintCategory, LevelConstraint, Substitution, UnifConstraint
from constraints.errors import LevelMismatch, UnificationFailure
from constraints.justification import (
    Assumption,
    Span,
    asserted,
    asserted_origins,
    depends_on,
    join,
    join_all,
)
from constraints.simp import Simplifier
from kernel import level as lvl
from kernel.term import (
    App,
    BinderInfo,
    Lambda,
    Sort,
    abstract_lambda,
    get_app_fn,
    mk_app_n,
    mk_arrow,
    mk_local,
    mk_meta,
)
from kernel.type_checker import TypeChecker
from tests.helpers import NAT, SUCC, ZERO, const, numeral, prelude_env

INT = const("int")


class TestJustification(unittest.TestCase):
    def test_join_collects_assumptions(self):
        a, b = Assumption(), Assumption()
        j = join(join(asserted("x"), a), b)
        self.assertEqual(j.assumptions(), frozenset({a.uid, b.uid}))
        self.assertTrue(depends_on(j, a))
        self.assertFalse(depends_on(asserted("y"), a))

    def test_join_with_none_is_identity(self):
        j = asserted("x")
        self.assertIs(join(None, j), j)
        self.assertIs(join(j, None), j)
        self.assertIsNone(join_all([]))

    def test_asserted_origins_reported_once_left_to_right(self):
        first = asserted("argument", Span(0, 3, 1, 0))
        second = asserted("expected type", Span(5, 9, 1, 5))
        j = join(join(first, Assumption()), join(second, first))
        descriptions = [o.description for o in asserted_origins(j)]
        self.assertEqual(descriptions, ["argument", "expected type"])

    def test_long_join_chain(self):
        j = asserted("start")
        assumptions = [Assumption() for _ in range(5000)]
        for a in assumptions:
            j = join(j, a)
        self.assertEqual(len(j.assumptions()), 5000)

    def test_span_contains(self):
        self.assertTrue(Span(0, 10).contains(Span(2, 4)))
        self.assertFalse(Span(2, 4).contains(Span(0, 10)))


class TestSimplifier(unittest.TestCase):
    def setUp(self):
        self.tc = TypeChecker(prelude_env())
        self.simp = Simplifier(self.tc)
        self.j = asserted("test")

    def test_constructor_arguments_decomposed(self):
        hole = mk_meta([], NAT)
        out = self.simp.simp(UnifConstraint(App(SUCC, hole), numeral(1), self.j))
        self.assertEqual(len(out), 1)
        self.assertEqual(out[0].lhs, hole)
        self.assertEqual(out[0].rhs, ZERO)
        self.assertIs(out[0].j, self.j)

    def test_closed_convertible_terms_leave_nothing(self):
        t = mk_app_n(const("nat.add"), [numeral(2), numeral(2)])
        self.assertEqual(self.simp.simp(UnifConstraint(t, numeral(4), self.j)), [])

    def test_rigid_mismatch_raises_with_justification(self):
        with self.assertRaises(UnificationFailure) as ctx:
            self.simp.simp(UnifConstraint(ZERO, numeral(1), self.j))
        self.assertIs(ctx.exception.j, self.j)

    def test_level_mismatch(self):
        with self.assertRaises(LevelMismatch):
            self.simp.simp(UnifConstraint(Sort(lvl.ONE), Sort(lvl.ZERO), self.j))

    def test_level_meta_left_as_level_constraint(self):
        meta = lvl.mk_level_meta()
        out = self.simp.simp(UnifConstraint(Sort(meta), Sort(lvl.ONE), self.j))
        self.assertEqual(len(out), 1)
        self.assertIsInstance(out[0], LevelConstraint)

    def test_binders_compared_under_shared_local(self):
        x = mk_local(NAT, "x")
        hole = mk_meta([x], NAT)
        lhs = abstract_lambda([x], App(SUCC, hole))
        rhs = abstract_lambda([x], App(SUCC, x))
        out = self.simp.simp(UnifConstraint(lhs, rhs, self.j))
        self.assertEqual(len(out), 1)
        self.assertTrue(is_pattern(out[0].lhs, out[0].rhs))


class TestClassify(unittest.TestCase):
    def setUp(self):
        self.tc = TypeChecker(prelude_env())
        self.j = asserted("test")
        self.x = mk_local(NAT, "x")
        self.y = mk_local(NAT, "y")

    def category(self, lhs, rhs):
        return classify(UnifConstraint(lhs, rhs, self.j), self.tc)

    def test_pattern(self):
        hole = mk_meta([self.x], NAT)
        self.assertTrue(is_pattern(hole, App(SUCC, self.x)))
        self.assertEqual(self.category(hole, App(SUCC, self.x)), ConstraintCategory.PATTERN)

    def test_pattern_rejects_escaping_local(self):
        hole = mk_meta([self.x], NAT)
        self.assertFalse(is_pattern(hole, App(SUCC, self.y)))

    def test_repeated_locals_make_a_quasi_pattern(self):
        hole = mk_meta([], mk_arrow2(NAT))
        lhs = mk_app_n(hole, [self.x, self.x])
        self.assertEqual(self.category(lhs, App(SUCC, self.x)), ConstraintCategory.QUASI_PATTERN)

    def test_non_local_argument_is_flex_rigid(self):
        hole = mk_meta([], mk_arrow2(NAT))
        lhs = mk_app_n(hole, [ZERO, self.x])
        self.assertEqual(self.category(lhs, App(SUCC, self.x)), ConstraintCategory.FLEX_RIGID)

    def test_flex_flex(self):
        f = mk_meta([], mk_arrow2(NAT))
        g = mk_meta([], mk_arrow2(NAT))
        lhs = mk_app_n(f, [ZERO, ZERO])
        rhs = mk_app_n(g, [ZERO, ZERO])
        self.assertEqual(self.category(lhs, rhs), ConstraintCategory.FLEX_FLEX)

    def test_stuck_recursor(self):
        hole = mk_meta([], NAT)
        motive = Lambda(BinderInfo.EXPLICIT, "n", NAT, NAT)
        n = mk_local(NAT, "n")
        r = mk_local(NAT, "r")
        rec = mk_app_n(const("nat.rec", lvl.ONE), [motive, ZERO, abstract_lambda([n, r], r), hole])
        self.assertEqual(self.category(rec, ZERO), ConstraintCategory.RECURSOR)

    def test_same_reducible_head_is_delta(self):
        a = mk_local(INT, "a")
        b = mk_local(INT, "b")
        hole = mk_meta([], INT)
        lhs = mk_app_n(const("int.sub"), [hole, b])
        rhs = mk_app_n(const("int.sub"), [a, b])
        self.assertEqual(self.category(lhs, rhs), ConstraintCategory.DELTA)

    def test_orient_puts_flex_side_first(self):
        hole = mk_meta([], mk_arrow2(NAT))
        flex = mk_app_n(hole, [ZERO, ZERO])
        c = orient(UnifConstraint(ZERO, flex, self.j))
        self.assertIs(get_app_fn(c.lhs), hole)


class TestSubstitution(unittest.TestCase):
    def test_instantiate_reports_justification_of_used_assignment(self):
        hole = mk_meta([], NAT)
        j = asserted("assignment")
        subst = Substitution().assign(hole.uid, ZERO, j)
        term, used = subst.instantiate(App(SUCC, hole))
        self.assertEqual(term, numeral(1))
        self.assertEqual(asserted_origins(used), [j.origin])

    def test_untouched_term_has_no_justification(self):
        subst = Substitution()
        term, used = subst.instantiate(numeral(2))
        self.assertEqual(term, numeral(2))
        self.assertIsNone(used)


def mk_arrow2(t):
    return mk_arrow(t, mk_arrow(t, t))


if __name__ == "__main__":
    unittest.main()
