import unittest

from kernel import level as lvl
from kernel.environment import Axiom, Definition, Inductive, ReducibilityHint
from kernel.errors import DeclarationTypeMismatch, KernelTypeError, PositivityError
from kernel.name import name
from kernel.reduction import StuckKind, Transparency
from kernel.term import (
    App,
    BinderInfo,
    Lambda,
    Sort,
    abstract_lambda,
    mk_app_n,
    mk_arrow,
    mk_local,
    mk_meta,
)
from kernel.type_checker import TypeChecker, check_declaration
from tests.helpers import NAT, SUCC, TYPE, ZERO, const, nat_env, numeral, prelude_env

ADD = const("add")
DOUBLE = const("double")


def nat_rec(motive, zero_case, succ_case, major):
    return mk_app_n(const("nat.rec", lvl.ONE), [motive, zero_case, succ_case, major])


def arith_env(hint=ReducibilityHint.SEMIREDUCIBLE):
    """nat with ``add`` by recursion on the second argument and ``double n := add n n``."""
    env = nat_env()
    a = mk_local(NAT, "a")
    b = mk_local(NAT, "b")
    n = mk_local(NAT, "n")
    r = mk_local(NAT, "r")
    motive = Lambda(BinderInfo.EXPLICIT, "n", NAT, NAT)
    step = abstract_lambda([n, r], App(SUCC, r))
    add_value = abstract_lambda([a, b], nat_rec(motive, a, step, b))
    env = check_declaration(env, Definition(name("add"), (), mk_arrow(NAT, mk_arrow(NAT, NAT)), add_value, hint))
    double_value = abstract_lambda([n], mk_app_n(ADD, [n, n]))
    return check_declaration(env, Definition(name("double"), (), mk_arrow(NAT, NAT), double_value))


class TestWhnf(unittest.TestCase):
    def setUp(self):
        self.env = arith_env()
        self.tc = TypeChecker(self.env)

    def test_addition_reduces_to_successor(self):
        result = self.tc.whnf(mk_app_n(ADD, [numeral(2), numeral(2)]), Transparency.ALL)
        self.assertEqual(result.fn, SUCC)

    def test_normalize_computes_numeral(self):
        result = self.tc.normalize(mk_app_n(ADD, [numeral(2), numeral(2)]))
        self.assertEqual(result, numeral(4))

    def test_reducible_only_keeps_semireducible_folded(self):
        t = mk_app_n(ADD, [numeral(1), numeral(1)])
        self.assertEqual(self.tc.whnf(t, Transparency.REDUCIBLE_ONLY), t)

    def test_irreducible_unfolds_only_under_all(self):
        tc = TypeChecker(arith_env(ReducibilityHint.IRREDUCIBLE))
        t = mk_app_n(ADD, [numeral(1), numeral(1)])
        self.assertEqual(tc.whnf(t, Transparency.DEFAULT), t)
        self.assertEqual(tc.normalize(t, Transparency.ALL), numeral(2))

    def test_beta(self):
        x = mk_local(NAT, "x")
        t = App(abstract_lambda([x], App(SUCC, x)), ZERO)
        self.assertEqual(self.tc.whnf(t), numeral(1))

    def test_stuck_recursor(self):
        hole = mk_meta([], NAT)
        motive = Lambda(BinderInfo.EXPLICIT, "n", NAT, NAT)
        n = mk_local(NAT, "n")
        r = mk_local(NAT, "r")
        t = nat_rec(motive, ZERO, abstract_lambda([n, r], r), hole)
        reason = self.tc.is_stuck(t)
        self.assertEqual(reason.kind, StuckKind.RECURSOR)
        self.assertEqual(reason.meta, hole)


class TestUnfoldAndDepth(unittest.TestCase):
    def test_depth_follows_definition_chain(self):
        env = arith_env()
        self.assertEqual(env.depth(name("add")), 1)
        self.assertEqual(env.depth(name("double")), 2)
        self.assertEqual(env.depth(name("nat.succ")), 0)

    def test_unfold_sub(self):
        env = prelude_env()
        tc = TypeChecker(env)
        int_ = const("int")
        a = mk_local(int_, "a")
        b = mk_local(int_, "b")
        unfolded = tc.unfold(mk_app_n(const("int.sub"), [a, b]))
        expected = mk_app_n(const("int.add"), [a, App(const("int.uminus"), b)])
        self.assertEqual(unfolded, expected)


class TestTypeChecker(unittest.TestCase):
    def setUp(self):
        self.env = arith_env()
        self.tc = TypeChecker(self.env)

    def test_infer_application(self):
        self.assertEqual(self.tc.check(mk_app_n(ADD, [ZERO, ZERO])), NAT)

    def test_check_rejects_ill_typed_argument(self):
        with self.assertRaises(KernelTypeError):
            self.tc.check(App(SUCC, NAT))

    def test_definitional_arithmetic(self):
        t = mk_app_n(ADD, [numeral(2), numeral(2)])
        self.assertTrue(self.tc.is_def_eq(t, numeral(4)))
        self.assertFalse(self.tc.is_def_eq(t, numeral(3)))

    def test_eta(self):
        x = mk_local(NAT, "x")
        self.assertTrue(self.tc.is_def_eq(abstract_lambda([x], App(SUCC, x)), SUCC))

    def test_definition_type_mismatch(self):
        with self.assertRaises(DeclarationTypeMismatch):
            check_declaration(self.env, Definition(name("bad"), (), NAT, TYPE))

    def test_axiom_added(self):
        env = check_declaration(self.env, Axiom(name("k"), (), NAT))
        self.assertIn(name("k"), env)


class TestInductive(unittest.TestCase):
    def test_recursor_generated(self):
        env = nat_env()
        rec = env.get(name("nat.rec"))
        self.assertEqual(rec.num_minors, 2)
        self.assertTrue(rec.large_elim)
        self.assertEqual(rec.major_index, 3)

    def test_negative_occurrence_rejected(self):
        bad = const("bad")
        decl = Inductive(name("bad"), (), 0, TYPE, (
            (name("bad.mk"), mk_arrow(mk_arrow(bad, NAT), bad)),
        ))
        with self.assertRaises(PositivityError):
            check_declaration(nat_env(), decl)

    def test_prop_family_with_two_constructors_eliminates_into_prop(self):
        either = const("either")
        decl = Inductive(name("either"), (), 0, Sort(lvl.ZERO), (
            (name("either.left"), either),
            (name("either.right"), either),
        ))
        env = check_declaration(nat_env(), decl)
        self.assertFalse(env.get(name("either.rec")).large_elim)

    def test_single_constructor_prop_eliminates_anywhere(self):
        self.assertTrue(prelude_env().get(name("eq.rec")).large_elim)


if __name__ == "__main__":
    unittest.main()
