from constraints.constraint import Alternative, ChoiceConstraint, UnifConstraint
from constraints.errors import JustifiedError
from kernel import level as lvl
from kernel.reduction import Transparency
from kernel.term import Const, Pi, App, get_app_fn, instantiate, mk_meta


def family_head(tc, ty):
    """Head constant name of ``ty`` after whnf(default), or None when it is not rigid."""
    head = get_app_fn(tc.whnf(ty, Transparency.DEFAULT))
    return head.name if type(head) is Const else None


def apply_coercion(env, tc, name, arg, ctx, j):
    """(``c ?p₁ … ?pₖ arg``, constraints) for a coercion ``c : Π params, S params → T params``."""
    decl = env.get(name)
    fn = Const(name, tuple(lvl.mk_level_meta() for _ in decl.univ_params))
    ty = decl.type
    binders = 0
    while type(ty) is Pi:
        binders += 1
        ty = ty.body
    fn_type, _ = tc.infer(fn)
    for _ in range(binders - 1):
        fn_type = tc.whnf(fn_type, Transparency.ALL)
        param = mk_meta(ctx, fn_type.domain)
        fn = App(fn, param)
        fn_type = instantiate(fn_type.body, param)
    fn_type = tc.whnf(fn_type, Transparency.ALL)
    arg_type, cs = tc.infer(arg, j)
    return App(fn, arg), cs + [UnifConstraint(arg_type, fn_type.domain, j)]


class Coercer:
    """Inserts registered coercions where an argument's type disagrees with the expected one."""

    def __init__(self, env, tc, simplifier):
        self.env = env
        self.tc = tc
        self.simplifier = simplifier

    def coerce_arg(self, arg, expected, actual, ctx, j):
        """(argument term, constraints) making ``arg : actual`` fit ``expected``."""
        db = self.env.coercion_db
        try:
            residue = self.simplifier.simp_terms(actual, expected, j)
        except JustifiedError:
            source = family_head(self.tc, actual)
            target = family_head(self.tc, expected)
            coercion = db.find(source, target) if source and target else None
            if coercion is None:
                return arg, [UnifConstraint(actual, expected, j)]
            coerced, cs = apply_coercion(self.env, self.tc, coercion, arg, ctx, j)
            coerced_type, more = self.tc.infer(coerced, j)
            return coerced, cs + more + [UnifConstraint(coerced_type, expected, j)]
        if not residue:
            return arg, []

        candidates = ()
        if self.tc.is_stuck(self.tc.whnf(expected)) is not None:
            source = family_head(self.tc, actual)
            candidates = db.from_source(source) if source else ()
        elif self.tc.is_stuck(self.tc.whnf(actual)) is not None:
            target = family_head(self.tc, expected)
            candidates = db.into_target(target) if target else ()
        if not candidates:
            return arg, [UnifConstraint(actual, expected, j)]

        hole = mk_meta(ctx, expected)
        return hole, [self._choice(hole, arg, expected, candidates, ctx, j)]

    def _choice(self, hole, arg, expected, candidates, ctx, j):
        def chooser(meta_app, ty, subst):
            def direct():
                arg_type, cs = self.tc.infer(arg, j)
                return cs + [UnifConstraint(meta_app, arg, j), UnifConstraint(arg_type, ty, j)]

            yield Alternative(direct, "no coercion")
            for name in candidates:
                def coerced(name=name):
                    term, cs = apply_coercion(self.env, self.tc, name, arg, ctx, j)
                    term_type, more = self.tc.infer(term, j)
                    return cs + more + [UnifConstraint(meta_app, term, j), UnifConstraint(term_type, ty, j)]

                yield Alternative(coerced, str(name))

        return ChoiceConstraint(hole, expected, chooser, True, j, "coercion", "coercion")
