"""Translate preterms into terms plus the constraints that justify them."""
import logging

from constraints.constraint import Alternative, ChoiceConstraint, UnifConstraint
from constraints.justification import asserted
from constraints.simp import Simplifier
from elaborator.coercion import Coercer
from elaborator.errors import ElaborationError, UnknownIdentifier
from elaborator.preterm import (
    Annotated,
    Ident,
    LevelAdd,
    LevelMaxSpec,
    LevelName,
    LevelNum,
    Numeral,
    PApp,
    Placeholder,
    PLambda,
    PPi,
    SortLit,
    app_spine,
)
from elaborator.typeclass import InstanceResolver
from kernel import level as lvl
from kernel.name import Name
from kernel.reduction import Transparency
from kernel.term import (
    App,
    BinderInfo,
    Const,
    Pi,
    Sort,
    abstract_lambda,
    abstract_pi,
    get_app_fn,
    instantiate,
    mk_local,
    mk_meta,
    mk_meta_unknown_type,
)
from kernel.type_checker import TypeChecker

logger = logging.getLogger(__name__)

NAT_ZERO = Name(("nat", "zero"))
NAT_SUCC = Name(("nat", "succ"))


def resolve_name(env, name: Name, namespace: Name | None = None) -> list:
    """Declarations ``name`` may refer to: namespace-local first, else exact name plus aliases."""
    prefix = namespace
    while prefix is not None:
        candidate = prefix.join(name)
        if candidate in env:
            return [candidate]
        prefix = prefix.prefix
    found = [name] if name in env else []
    for target in env.aliases.get(name, ()):
        if target not in found:
            found.append(target)
    return found


class Preprocessor:
    """Recursive translation of preterms in a local context.

    Constraints accumulate in ``self.constraints``; every justification is
    asserted at the span of the preterm that caused it. ``holes`` maps the
    uid of each metavariable created for a placeholder or implicit argument
    to its span and a description, for unsolved-hole diagnostics.
    """

    def __init__(self, env, tc=None, namespace: Name | None = None, level_params=()):
        self.env = env
        self.tc = tc or TypeChecker(env)
        self.simplifier = Simplifier(self.tc)
        self.instances = InstanceResolver(env, self.tc)
        self.coercer = Coercer(env, self.tc, self.simplifier)
        self.namespace = namespace
        self.level_params = list(level_params)
        self.constraints = []
        self.holes = {}

    def fork(self) -> "Preprocessor":
        """Same environment and universe parameters, fresh constraint list."""
        child = Preprocessor(self.env, self.tc, self.namespace, self.level_params)
        child.holes = self.holes
        return child

    # entry points

    def preprocess(self, p, ctx, expected=None):
        """(term, constraints) for ``p``; with ``expected`` its type constraint comes first."""
        start = len(self.constraints)
        term = self.elab(p, ctx)
        if expected is not None:
            j = asserted("expected type", p.span)
            ty, cs = self.tc.infer(term, j)
            self.constraints[start:start] = cs + [UnifConstraint(ty, expected, j)]
        return term, self.constraints[start:]

    def elab_type(self, p, ctx):
        """Elaborate ``p`` and require it to be a type."""
        t = self.elab(p, ctx)
        ty = self.type_of(t, asserted("type expected", p.span))
        _, cs = self.tc.ensure_sort(ty, asserted("type expected", p.span))
        self.constraints.extend(cs)
        return t

    def elab_binders(self, binders, ctx=()):
        """Locals for ``binders``, each typed in the context of the previous ones."""
        ctx = list(ctx)
        locals_ = []
        for binder in binders:
            if binder.type is None:
                domain = self.hole_type(ctx, binder.span, f"type of '{binder.name}'")
            else:
                domain = self.elab_type(binder.type, ctx)
            local = mk_local(domain, binder.name, binder.info)
            ctx.append(local)
            locals_.append(local)
        return locals_

    # recursion

    def elab(self, p, ctx):
        if isinstance(p, (Ident, PApp)):
            head, args = app_spine(p)
            return self._elab_app(head, args, ctx, p.span)
        if isinstance(p, Placeholder):
            hole = mk_meta_unknown_type(ctx)
            self._record(hole, p.span, "placeholder")
            return hole
        if isinstance(p, Numeral):
            return self._numeral(p)
        if isinstance(p, SortLit):
            return Sort(self._sort_level(p))
        if isinstance(p, PLambda):
            if p.domain is None:
                domain = self.hole_type(ctx, p.span, f"type of '{p.name}'")
            else:
                domain = self.elab_type(p.domain, ctx)
            local = mk_local(domain, p.name, p.info)
            body = self.elab(p.body, ctx + [local])
            return abstract_lambda([local], body)
        if isinstance(p, PPi):
            domain = self.elab_type(p.domain, ctx)
            local = mk_local(domain, p.name, p.info)
            body = self.elab_type(p.body, ctx + [local])
            return abstract_pi([local], body)
        if isinstance(p, Annotated):
            expected = self.elab_type(p.type, ctx)
            term = self.elab(p.term, ctx)
            j = asserted("type ascription", p.span)
            actual = self.type_of(term, j)
            term, cs = self.coercer.coerce_arg(term, expected, actual, ctx, j)
            self.constraints.extend(cs)
            return term
        raise ElaborationError(getattr(p, "span", None), f"unexpected preterm {p!r}")

    def _record(self, hole, span, description):
        self.holes[get_app_fn(hole).uid] = (span, description)

    def hole_type(self, ctx, span, description):
        hole = mk_meta(ctx, Sort(lvl.mk_level_meta()))
        self._record(hole, span, description)
        return hole

    def type_of(self, t, j):
        ty, cs = self.tc.infer(t, j)
        self.constraints.extend(cs)
        return ty

    def _numeral(self, p):
        if NAT_ZERO not in self.env or NAT_SUCC not in self.env:
            raise UnknownIdentifier(p.span, NAT_ZERO)
        t = Const(NAT_ZERO)
        for _ in range(p.value):
            t = App(Const(NAT_SUCC), t)
        return t

    def _level(self, spec):
        if spec is None:
            return lvl.mk_level_meta()
        if isinstance(spec, LevelNum):
            return lvl.of_int(spec.value)
        if isinstance(spec, LevelName):
            if spec.name not in self.level_params:
                self.level_params.append(spec.name)
            return lvl.LevelParam(spec.name)
        if isinstance(spec, LevelAdd):
            level = self._level(spec.base)
            for _ in range(spec.offset):
                level = lvl.mk_succ(level)
            return level
        if isinstance(spec, LevelMaxSpec):
            return lvl.mk_max(self._level(spec.lhs), self._level(spec.rhs))
        raise ElaborationError(None, f"unexpected universe level {spec!r}")

    def _sort_level(self, p):
        if p.kind == "Prop":
            return lvl.ZERO
        level = self._level(p.level)
        return lvl.mk_succ(level) if p.kind == "Type" else level

    # identifiers and applications

    def _const(self, name: Name):
        decl = self.env.get(name)
        return Const(name, tuple(lvl.mk_level_meta() for _ in decl.univ_params))

    def _elab_head(self, head_p, ctx):
        if not isinstance(head_p, Ident):
            return self.elab(head_p, ctx)
        name = head_p.name
        if len(name.segments) == 1:
            for local in reversed(ctx):
                if local.name == name.last:
                    return local
        candidates = resolve_name(self.env, name, self.namespace)
        if not candidates:
            raise UnknownIdentifier(head_p.span, name)
        if len(candidates) == 1:
            return self._const(candidates[0])
        return self._overload(head_p, candidates, ctx)

    def _overload(self, head_p, candidates, ctx):
        j = asserted(f"overloaded identifier '{head_p.name}'", head_p.span)
        hole = mk_meta_unknown_type(ctx)
        self._record(hole, head_p.span, f"overloaded '{head_p.name}'")
        hole_type = get_app_fn(hole).type
        for local in ctx:
            hole_type = instantiate(hole_type.body, local)

        def chooser(meta_app, ty, subst):
            for name in candidates:
                def build(name=name):
                    sub = self.fork()
                    term = self._const(name)
                    term_type = sub.type_of(term, j)
                    if not head_p.explicit:
                        term, term_type = sub._insert_implicits(term, term_type, ctx, j, head_p.span)
                    return sub.constraints + [
                        UnifConstraint(meta_app, term, j),
                        UnifConstraint(term_type, ty, j),
                    ]

                yield Alternative(build, str(name))

        self.constraints.append(ChoiceConstraint(
            hole, hole_type, chooser, False, j, "overload", str(head_p.name), head_p.span,
        ))
        return hole

    def _insert_implicits(self, fn, fn_type, ctx, j, span):
        while True:
            ty = self.tc.whnf(fn_type, Transparency.DEFAULT)
            if type(ty) is not Pi or ty.info == BinderInfo.EXPLICIT:
                return fn, fn_type
            arg = mk_meta(ctx, ty.domain)
            if ty.info == BinderInfo.INST_IMPLICIT:
                self._record(arg, span, f"instance of {ty.domain}")
                self.constraints.append(self.instances.choice(arg, ty.domain, j, span=span))
            else:
                self._record(arg, span, f"implicit argument '{ty.name}'")
            fn = App(fn, arg)
            fn_type = instantiate(ty.body, arg)

    def _elab_app(self, head_p, args_p, ctx, span):
        explicit = isinstance(head_p, Ident) and head_p.explicit
        j = asserted("application", span)
        fn = self._elab_head(head_p, ctx)
        fn_type = self.type_of(fn, j)
        for arg_p in args_p:
            if not explicit:
                fn, fn_type = self._insert_implicits(fn, fn_type, ctx, j, span)
            pi, cs = self.tc.ensure_pi(fn_type, fn, j)
            self.constraints.extend(cs)
            if isinstance(arg_p, Placeholder):
                arg = mk_meta(ctx, pi.domain)
                self._record(arg, arg_p.span, "placeholder")
            else:
                arg = self.elab(arg_p, ctx)
                j_arg = asserted("argument type mismatch", arg_p.span)
                arg_type = self.type_of(arg, j_arg)
                arg, cs = self.coercer.coerce_arg(arg, pi.domain, arg_type, ctx, j_arg)
                self.constraints.extend(cs)
            fn = App(fn, arg)
            fn_type = instantiate(pi.body, arg)
        if not explicit:
            fn, fn_type = self._insert_implicits(fn, fn_type, ctx, j, span)
        return fn
