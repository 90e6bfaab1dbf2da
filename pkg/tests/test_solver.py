import random
import unittest

import config
from constraints.constraint import Alternative, ChoiceConstraint, UnifConstraint
from constraints.errors import StepBudgetExceeded
from constraints.justification import asserted
from kernel.environment import ReducibilityHint
from kernel.name import name
from kernel.term import (
    App,
    Lambda,
    abstract_lambda,
    get_app_fn,
    mk_app_n,
    mk_arrow,
    mk_local,
    mk_meta,
)
from kernel.type_checker import TypeChecker
from solver.solver import Solver
from solver.trace import TraceRecorder
from tests.helpers import NAT, SUCC, TYPE, ZERO, const, numeral, prelude_env

INT = const("int")
BOOL = const("bool")
TT = const("bool.tt")
FF = const("bool.ff")


def eq(lhs, rhs, description="test"):
    return UnifConstraint(lhs, rhs, asserted(description))


class TestHigherOrderUnification(unittest.TestCase):
    def setUp(self):
        self.env = prelude_env()

    def sub_problem(self):
        a = mk_local(INT, "a")
        b = mk_local(INT, "b")
        hole = mk_meta([b], mk_arrow(INT, INT))
        lhs = App(hole, App(const("int.uminus"), a))
        rhs = mk_app_n(const("int.sub"), [b, a])
        return lhs, rhs

    def test_imitation_after_unfolding_reducible_head(self):
        lhs, rhs = self.sub_problem()
        result = Solver(self.env).solve([eq(lhs, rhs)])
        self.assertTrue(result.ok)
        solved = result.substitution.instantiate_term(lhs)
        self.assertEqual(get_app_fn(solved), const("int.add"))
        self.assertTrue(TypeChecker(self.env).is_def_eq(solved, rhs))

    def test_irreducible_head_has_no_solution(self):
        lhs, rhs = self.sub_problem()
        env = self.env.with_hint(name("int.sub"), ReducibilityHint.IRREDUCIBLE)
        result = Solver(env).solve([eq(lhs, rhs)])
        self.assertFalse(result.ok)

    def test_constant_function_from_two_equations(self):
        family = mk_meta([], mk_arrow(BOOL, TYPE))
        result = Solver(self.env).solve([eq(App(family, TT), NAT), eq(App(family, FF), NAT)])
        self.assertTrue(result.ok)
        value = result.substitution.instantiate_term(family)
        self.assertIsInstance(value, Lambda)
        self.assertEqual(value.body, NAT)

    def test_unknown_function_and_argument(self):
        fn = mk_meta([], mk_arrow(NAT, NAT))
        arg = mk_meta([], NAT)
        lhs = App(fn, arg)
        result = Solver(self.env).solve([eq(lhs, numeral(1))])
        self.assertTrue(result.ok)
        self.assertEqual(result.substitution.instantiate_term(lhs), numeral(1))

    def test_conflicting_constant_function_fails(self):
        hole = mk_meta([], mk_arrow(NAT, BOOL))
        result = Solver(self.env).solve([eq(App(hole, ZERO), TT), eq(App(hole, numeral(1)), FF)])
        self.assertFalse(result.ok)
        self.assertIsNotNone(result.error)


class TestPatterns(unittest.TestCase):
    """Pattern constraints are solved by abstracting the right-hand side."""

    def setUp(self):
        self.env = prelude_env()
        self.rng = random.Random(5)

    def first_order(self, locals_, depth):
        rng = self.rng
        if depth == 0 or rng.random() < 0.3:
            return rng.choice(locals_ + [ZERO])
        if rng.random() < 0.5:
            return App(SUCC, self.first_order(locals_, depth - 1))
        return mk_app_n(const("nat.add"), [
            self.first_order(locals_, depth - 1),
            self.first_order(locals_, depth - 1),
        ])

    def test_random_patterns_match_direct_abstraction(self):
        for case in range(100):
            xs = [mk_local(NAT, f"x{i}") for i in range(self.rng.randrange(1, 5))]
            self.rng.shuffle(xs)
            rhs = self.first_order(xs, 4)
            hole = mk_meta(xs, NAT)
            result = Solver(self.env).solve([eq(hole, rhs)])
            self.assertTrue(result.ok, f"case {case}")
            value = result.substitution.instantiate_term(get_app_fn(hole))
            self.assertEqual(value, abstract_lambda(xs, rhs), f"case {case}")


class CountingChooser:
    """Yields ``?m ≐ value`` for each value, recording how many were pulled."""

    def __init__(self, values):
        self.values = values
        self.streams = []

    def __call__(self, meta_app, type, subst):
        pulls = [0]
        self.streams.append(pulls)

        def stream():
            for value in self.values:
                pulls[0] += 1
                yield Alternative([eq(meta_app, value, "choice")], str(value))

        return stream()


class TestCaseSplits(unittest.TestCase):
    def setUp(self):
        self.env = prelude_env()
        self.trace = TraceRecorder()

    def choice(self, chooser, type=NAT):
        hole = mk_meta([], type)
        return hole, ChoiceConstraint(hole, type, chooser, False, asserted("choice"))

    def test_failure_skips_unrelated_splits(self):
        pred = mk_meta([], mk_arrow(NAT, BOOL))
        conflict = [eq(App(pred, ZERO), TT, "pred"), eq(App(pred, ZERO), FF, "pred")]

        def first_choice(meta_app, type, subst):
            yield Alternative(conflict, "conflicting")
            yield Alternative([], "empty")

        middle = CountingChooser([ZERO, numeral(1)])
        last = CountingChooser([ZERO, numeral(1)])
        _, first = self.choice(first_choice)
        _, second = self.choice(middle)
        _, third = self.choice(last)

        result = Solver(self.env, trace=self.trace).solve([first, second, third])
        self.assertTrue(result.ok)
        self.assertEqual(len(self.trace.of_kind(config.TRACE_RESOLVE_SKIP)), 2)
        # the streams opened under the failed branch were never pulled again
        self.assertEqual(middle.streams[0], [1])
        self.assertEqual(last.streams[0], [1])

    def test_solve_all_enumerates_each_alternative(self):
        hole, c = self.choice(CountingChooser([ZERO, numeral(1)]))
        values = [s.substitution.instantiate_term(hole) for s in Solver(self.env).solve_all([c])]
        self.assertEqual(values, [ZERO, numeral(1)])

    def test_exhausted_choice_fails(self):
        hole, c = self.choice(CountingChooser([ZERO]))
        result = Solver(self.env).solve([c, eq(App(SUCC, hole), numeral(2))])
        self.assertFalse(result.ok)

    def test_split_push_events_carry_meta(self):
        hole, c = self.choice(CountingChooser([ZERO]))
        Solver(self.env, trace=self.trace).solve([c])
        pushes = self.trace.of_kind(config.TRACE_SPLIT_PUSH)
        self.assertEqual([e.meta for e in pushes], [hole.uid])


class TestBudget(unittest.TestCase):
    def test_step_budget_exceeded(self):
        fn = mk_meta([], mk_arrow(NAT, NAT))
        arg = mk_meta([], NAT)
        result = Solver(prelude_env(), max_steps=1).solve([eq(App(fn, arg), numeral(1))])
        self.assertFalse(result.ok)
        self.assertIsInstance(result.error, StepBudgetExceeded)


if __name__ == "__main__":
    unittest.main()
