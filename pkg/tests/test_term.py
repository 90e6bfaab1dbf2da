import unittest

from kernel import level as lvl
from kernel.term import (
    HAS_FVAR,
    HAS_LMETA,
    HAS_META,
    STATS,
    App,
    BVar,
    BinderInfo,
    Lambda,
    Meta,
    abstract,
    abstract_lambda,
    collect_metas,
    get_app_fn_args,
    instantiate,
    instantiate_metas,
    mk_local,
    mk_meta,
    occurs_meta,
    size,
)
from tests.helpers import (
    NAT,
    SUCC,
    TYPE,
    ZERO,
    NaiveCounter,
    TermGenerator,
    const,
    naive_abstract,
    naive_instantiate,
)


class TestFlags(unittest.TestCase):
    def test_local_sets_fvar_flag(self):
        x = mk_local(NAT, "x")
        t = App(SUCC, x)
        self.assertTrue(t.flags & HAS_FVAR)
        self.assertFalse(t.flags & HAS_META)

    def test_level_meta_flag_on_constant(self):
        c = const("list", lvl.mk_level_meta())
        self.assertTrue(c.flags & HAS_LMETA)

    def test_bound_counts_dangling_indices(self):
        body = App(BVar(0), BVar(2))
        lam = Lambda(BinderInfo.EXPLICIT, "y", NAT, body)
        self.assertEqual(body.bound, 3)
        self.assertEqual(lam.bound, 2)


class TestAbstractInstantiate(unittest.TestCase):
    def test_abstract_then_instantiate_gives_back_term(self):
        x = mk_local(NAT, "x")
        t = App(App(const("nat.add"), x), App(SUCC, x))
        self.assertEqual(instantiate(abstract(x, t), x), t)

    def test_abstract_lambda_binds_last_local_innermost(self):
        x = mk_local(NAT, "x")
        y = mk_local(NAT, "y")
        lam = abstract_lambda([x, y], App(x, y))
        self.assertEqual(lam.body.body, App(BVar(1), BVar(0)))

    def test_instantiate_matches_reference_on_random_terms(self):
        gen = TermGenerator(seed=7)
        value = App(SUCC, ZERO)
        for _ in range(10000):
            t = gen.term(depth=4)
            self.assertEqual(instantiate(t, value), naive_instantiate(t, value))

    def test_abstract_matches_reference_on_random_terms(self):
        gen = TermGenerator(seed=11)
        local = gen.locals[0]
        for _ in range(10000):
            t = gen.term(depth=4)
            self.assertEqual(abstract(local, t), naive_abstract(local, t))

    def test_instantiate_skips_closed_subtrees(self):
        t = TermGenerator().closed_heavy(depth=9)
        self.assertGreaterEqual(size(t), 2000)
        counter = NaiveCounter()
        expected = naive_instantiate(t, ZERO, counter)

        STATS.enabled = True
        STATS.reset()
        try:
            result = instantiate(t, ZERO)
            visits = STATS.visits
        finally:
            STATS.enabled = False
        self.assertEqual(result, expected)
        self.assertLess(visits, 0.2 * counter.visits)


class TestMetavariables(unittest.TestCase):
    def test_mk_meta_applies_to_context(self):
        x = mk_local(NAT, "x")
        hole = mk_meta([x], NAT)
        head, args = get_app_fn_args(hole)
        self.assertIsInstance(head, Meta)
        self.assertEqual(args, [x])
        self.assertTrue(occurs_meta(head.uid, hole))

    def test_instantiate_metas_beta_reduces_assigned_head(self):
        x = mk_local(NAT, "x")
        hole = mk_meta([x], NAT)
        head, _ = get_app_fn_args(hole)
        value = abstract_lambda([x], App(SUCC, x))
        result = instantiate_metas(hole, lambda uid: value if uid == head.uid else None)
        self.assertEqual(result, App(SUCC, x))

    def test_collect_metas_in_order_of_appearance(self):
        a = mk_meta([], NAT)
        b = mk_meta([], TYPE)
        t = App(App(const("f"), b), App(a, b))
        self.assertEqual([m.uid for m in collect_metas(t, [])], [b.uid, a.uid])


if __name__ == "__main__":
    unittest.main()
