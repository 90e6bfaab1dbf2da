import io
import unittest
from unittest import mock

import config
from elaborator.elaborate import Elaborator
from elaborator.errors import ElaborationError, UnknownIdentifier
from elaborator.typeclass import InstanceResolver
from frontend.parser import parse_term
from frontend.runner import run_text
from kernel.name import name
from kernel.term import App, Lambda, get_app_args, get_app_fn, instantiate, mk_app_n
from tests.helpers import NAT, const, prelude_env


def run(text, env=None):
    """(result, printed output) for ``text`` elaborated on top of ``env`` or the prelude."""
    out = io.StringIO()
    result = run_text(text, "test", out=out, env=env if env is not None else prelude_env())
    return result, out.getvalue()


class ElaborationTestCase(unittest.TestCase):
    def assertClean(self, result, output=""):
        self.assertEqual(result.diagnostics, [], output)
        self.assertEqual(result.exit_code, config.EXIT_OK)


class TestImplicitArguments(ElaborationTestCase):
    def test_append_infers_element_type(self):
        result, _ = run("axiom T : Type\naxiom l1 : list T\naxiom l2 : list T\n")
        self.assertClean(result)
        t, ty = Elaborator(result.env).term(parse_term("append l1 l2"))
        self.assertEqual(t, mk_app_n(const("list.append"), [const("T"), const("l1"), const("l2")]))
        self.assertEqual(ty, App(const("list"), const("T")))

    def test_check_hides_implicit_arguments(self):
        result, output = run("axiom T : Type\naxiom l1 : list T\ncheck append l1 l1\n")
        self.assertClean(result, output)
        self.assertEqual(output.strip(), "list.append l1 l1 : list T")

    def test_lambda_binder_type_inferred_from_expected_type(self):
        result, output = run("definition idn : nat -> nat := fun x, x\n")
        self.assertClean(result, output)
        self.assertIn(name("idn"), result.env)


class TestComputation(ElaborationTestCase):
    def test_eval_sum_matches_eval_literal(self):
        result, output = run("eval 2 + 2\neval 4\n")
        self.assertClean(result, output)
        self.assertEqual(output.splitlines(), ["4", "4"])

    def test_rfl_proves_arithmetic_fact(self):
        result, output = run("example : 2 + 2 = 4 := rfl\n")
        self.assertClean(result, output)

    def test_rfl_rejects_false_fact(self):
        result, _ = run("example : 2 + 2 = 5 := rfl\n")
        self.assertEqual(result.exit_code, config.EXIT_DIAGNOSTICS)


class TestHigherOrder(ElaborationTestCase):
    AXIOMS = (
        "axiom T : Type\n"
        "axiom a : T\n"
        "axiom b : T\n"
        "axiom f : T -> T -> T\n"
        "axiom R : T -> T -> Prop\n"
        "axiom e : a = b\n"
        "axiom H : R (f a a) a\n"
    )

    def setUp(self):
        result, output = run(self.AXIOMS)
        self.assertClean(result, output)
        self.env = result.env

    def test_motive_fixed_by_expected_type(self):
        p = parse_term("(@eq.subst _ _ _ _ e H : R (f a b) a)")
        t, ty = Elaborator(self.env).term(p)
        self.assertEqual(get_app_fn(t).name, name("eq.subst"))
        self.assertEqual(ty, mk_app_n(const("R"), [mk_app_n(const("f"), [const("a"), const("b")]), const("a")]))
        motive = get_app_args(t)[3]
        self.assertIsInstance(motive, Lambda)
        z = const("z")
        expected = mk_app_n(const("R"), [mk_app_n(const("f"), [const("a"), z]), const("a")])
        self.assertEqual(instantiate(motive.body, z), expected)

    def test_motive_ambiguous_without_expected_type(self):
        motives = []
        for t in Elaborator(self.env).solutions(parse_term("@eq.subst _ _ _ _ e H")):
            motive = get_app_args(t)[3]
            if motive not in motives:
                motives.append(motive)
        self.assertGreaterEqual(len(motives), 2)

    def test_induction_base_case(self):
        text = (
            "axiom nat.succ_add_step : Π (n k : nat), n + k = k + n -> n + succ k = succ k + n\n"
            "theorem add.comm_base (n m : nat) : n + m = m + n :=\n"
            "  nat.induction_on m (eq.symm (nat.zero_add n))\n"
            "    (fun (k : nat) (ih : n + k = k + n), nat.succ_add_step n k ih)\n"
        )
        result, output = run(text)
        self.assertClean(result, output)
        self.assertIn(name("add.comm_base"), result.env)


class TestTypeClasses(ElaborationTestCase):
    def setUp(self):
        result, output = run("axiom s : nat\naxiom t : nat\n")
        self.assertClean(result, output)
        self.env = result.env

    def test_mul_resolves_through_semigroup_in_two_steps(self):
        created = []
        original = InstanceResolver.choice

        def spy(resolver, meta_app, ty, j, depth=0, span=None):
            c = original(resolver, meta_app, ty, j, depth, span)
            created.append(c.meta.uid)
            return c

        with mock.patch.object(InstanceResolver, "choice", spy):
            result, output = run("check mul s t\n", self.env)
        self.assertClean(result, output)
        pushes = [
            e for e in result.events
            if e.kind == config.TRACE_SPLIT_PUSH and e.meta in created
        ]
        self.assertEqual(len(pushes), 2)

        t, _ = Elaborator(self.env).term(parse_term("mul s t"))
        instance = mk_app_n(const("semigroup.to_has_mul"), [NAT, const("nat.semigroup")])
        self.assertEqual(t, mk_app_n(const("mul"), [NAT, instance, const("s"), const("t")]))

    def test_ite_on_decidable_equality(self):
        result, output = run("eval ite (2 = 2) 1 0\neval ite (2 = 3) 1 0\n")
        self.assertClean(result, output)
        self.assertEqual(output.splitlines(), ["1", "0"])

    def test_missing_instance_reported(self):
        result, output = run("axiom c : bool\ncheck mul c c\n")
        self.assertEqual(result.exit_code, config.EXIT_DIAGNOSTICS)
        self.assertIn("failed to synthesize type class instance", output)

    def test_semireducible_alias_hides_instances(self):
        result, output = run("definition mynat : Type := nat\naxiom a : mynat\ncheck mul a a\n")
        self.assertEqual(result.exit_code, config.EXIT_DIAGNOSTICS)
        self.assertIn("failed to synthesize type class instance", output)

    def test_reducible_alias_sees_instances(self):
        result, output = run("definition mynat [reducible] : Type := nat\naxiom a : mynat\ncheck mul a a\n")
        self.assertClean(result, output)
        self.assertEqual(output.strip(), "mul a a : mynat")


class TestCoercionsAndOverloads(ElaborationTestCase):
    def test_coercion_inserted_in_list(self):
        text = "axiom n : nat\naxiom i : int\ncheck (cons n (cons i nil) : list int)\n"
        result, output = run(text)
        self.assertClean(result, output)
        self.assertIn("int.of_nat n", output)
        self.assertTrue(output.strip().endswith(": list int"))

    def test_overload_picks_type_correct_candidate(self):
        text = (
            "namespace foo\ndefinition f (n : nat) : nat := n\nend foo\n"
            "namespace bar\ndefinition f (b : bool) : bool := b\nend bar\n"
            "open foo bar\n"
            "check f tt\n"
            "check f 2\n"
        )
        result, output = run(text)
        self.assertClean(result, output)
        first, second = output.splitlines()
        self.assertTrue(first.startswith("bar.f"))
        self.assertTrue(second.startswith("foo.f"))

    def test_overload_recovers_from_failed_instance_search(self):
        setup = (
            "namespace p1\n"
            "definition g {A : Type} [s : has_mul A] (a : A) : A := mul a a\n"
            "end p1\n"
            "namespace p2\n"
            "definition g (b : bool) : bool := b\n"
            "end p2\n"
            "open p1 p2\n"
        )
        prepared, output = run(setup)
        self.assertClean(prepared, output)
        result, output = run("check g tt\n", prepared.env)
        self.assertClean(result, output)
        self.assertTrue(output.startswith("p2.g"))

        backtracks = [e for e in result.events if e.kind == config.TRACE_BACKTRACK]
        first_backtrack = result.events.index(backtracks[0])
        restored = set()
        for e in result.events[:first_backtrack]:
            if e.kind == config.TRACE_SPLIT_PUSH:
                restored.update(e.jdeps)
        self.assertEqual(len(backtracks), 2)
        for e in backtracks:
            self.assertEqual(set(e.jdeps), restored)
        self.assertEqual([e for e in result.events if e.kind == config.TRACE_RESOLVE_SKIP], [])


class TestDeclarations(ElaborationTestCase):
    def test_unknown_identifier(self):
        with self.assertRaises(UnknownIdentifier):
            Elaborator(prelude_env()).term(parse_term("frobnicate 1"))

    def test_redeclaration_rejected(self):
        result, output = run("axiom nat.zero : nat\n")
        self.assertEqual(result.exit_code, config.EXIT_DIAGNOSTICS)
        self.assertIn("already been declared", output)

    def test_unsatisfiable_universe_constraint_reported(self):
        result, output = run("definition bad : Prop := Π (A : Type.{_}), Type.{_}\n")
        self.assertEqual(result.exit_code, config.EXIT_DIAGNOSTICS)
        self.assertIn("universe level", output)
        self.assertNotIn("internal error", output)
        self.assertNotIn(name("bad"), result.env)

    def test_structure_projections(self):
        text = "structure point (A : Type) := (x : A) (y : A)\neval point.y (point.mk 1 2)\n"
        result, output = run(text)
        self.assertClean(result, output)
        self.assertEqual(output.strip(), "2")

    def test_failure_keeps_environment(self):
        result, _ = run("definition bad : nat := tt\ndefinition good : nat := 1\n")
        self.assertEqual(len(result.diagnostics), 1)
        self.assertNotIn(name("bad"), result.env)
        self.assertIn(name("good"), result.env)

    def test_elaboration_error_carries_span(self):
        with self.assertRaises(ElaborationError) as ctx:
            Elaborator(prelude_env()).term(parse_term("nat.succ tt"))
        self.assertIsNotNone(ctx.exception.span)


if __name__ == "__main__":
    unittest.main()
