"""Declaration elaboration: preprocess, solve, instantiate, generalize, kernel check."""
import logging
from contextlib import contextmanager

from constraints.errors import (
    FunctionExpected,
    InstanceDepthExceeded,
    InstanceNotFound,
    JustifiedError,
    OverloadExhausted,
    UnificationFailure,
)
from constraints.justification import asserted, asserted_origins
from elaborator.errors import ElaborationError, KernelRecheckError, UnsolvedHoles
from elaborator.preprocess import Preprocessor
from kernel import level as lvl
from kernel.environment import Axiom, Definition, Inductive, ReducibilityHint
from kernel.errors import DuplicateDeclaration, KernelError
from kernel.inductive import add_structure_projections
from kernel.name import Name
from kernel.printer import MetaNamer, term_to_str
from kernel.reduction import Transparency
from kernel.term import (
    BinderInfo,
    Const,
    Sort,
    abstract_lambda,
    abstract_pi,
    collect_level_metas,
    collect_metas,
    instantiate,
    instantiate_level_metas,
    mk_app_n,
    mk_local,
)
from kernel.type_checker import TypeChecker, check_declaration
from solver.solver import Solver

logger = logging.getLogger(__name__)

EXAMPLE_NAME = Name(("_example",))
TYPE_ZERO = Sort(lvl.ONE)


class Elaborator:
    """Elaborates declarations and terms against a fixed environment.

    Declaration methods return the extended environment; ``self.env`` is
    never modified.
    """

    def __init__(self, env, namespace: Name | None = None, max_steps: int | None = None, trace=None):
        self.env = env
        self.namespace = namespace
        self.max_steps = max_steps
        self.trace = trace

    def _preprocessor(self, env=None, level_params=()):
        env = env or self.env
        return Preprocessor(env, TypeChecker(env), self.namespace, level_params)

    # declarations

    def definition(self, name: Name, binders, type_p, value_p, span,
                   hint=ReducibilityHint.SEMIREDUCIBLE, level_params=()):
        self._require_fresh(name, span)
        with self._reporting(span):
            decl = self._definition(name, binders, type_p, value_p, span, hint, level_params)
        return self._kernel(decl, span)

    def example(self, binders, type_p, value_p, span):
        """Elaborate and kernel-check a definition without keeping it."""
        with self._reporting(span):
            decl = self._definition(EXAMPLE_NAME, binders, type_p, value_p, span,
                                    ReducibilityHint.SEMIREDUCIBLE, ())
        self._kernel(decl, span)
        return decl

    def axiom(self, name: Name, binders, type_p, span, level_params=()):
        self._require_fresh(name, span)
        with self._reporting(span):
            pre = self._preprocessor(level_params=level_params)
            ctx = pre.elab_binders(binders)
            ty = pre.elab_type(type_p, ctx)
            result = self._solve(pre, span)
            locals_, (ty,) = self._close(result.substitution, ctx, ty)
            full_type = abstract_pi(locals_, ty)
            self._require_solved(pre, span, full_type)
            params, full_type, _ = self._generalize(result, full_type, [], pre.level_params, span)
        return self._kernel(Axiom(name, params, full_type), span)

    def _definition(self, name, binders, type_p, value_p, span, hint, level_params):
        logger.debug("elaborating %s", name)
        pre = self._preprocessor(level_params=level_params)
        ctx = pre.elab_binders(binders)
        if type_p is None:
            ty = pre.hole_type(ctx, span, f"type of '{name}'")
        else:
            ty = pre.elab_type(type_p, ctx)
        value, _ = pre.preprocess(value_p, ctx, expected=ty)
        result = self._solve(pre, span)
        locals_, (ty, value) = self._close(result.substitution, ctx, ty, value)
        full_type = abstract_pi(locals_, ty)
        full_value = abstract_lambda(locals_, value)
        self._require_solved(pre, span, full_type, full_value)
        params, full_type, (full_value,) = self._generalize(
            result, full_type, [full_value], pre.level_params, span,
        )
        logger.debug("elaborated %s", name)
        return Definition(name, params, full_type, full_value, hint)

    def inductive(self, name: Name, param_binders, type_p, constructors, span, level_params=()):
        """``constructors`` holds (name, binders, result type preterm or None, span) tuples."""
        self._require_fresh(name, span)
        with self._reporting(span):
            pre = self._preprocessor(level_params=level_params)
            params = pre.elab_binders(param_binders)
            sort = pre.elab_type(type_p, params) if type_p is not None else TYPE_ZERO
            result = self._solve(pre, span)
            locals_, (sort,) = self._close(result.substitution, params, sort)
            family_type = abstract_pi(locals_, sort)
            self._require_solved(pre, span, family_type)
            univ_params, family_type, _ = self._generalize(result, family_type, [], pre.level_params, span)
            # constructors see the family as an opaque constant
            scratch = self.env.add(Axiom(name, univ_params, family_type))
            family = Const(name, tuple(lvl.LevelParam(u) for u in univ_params))
            ctor_types = tuple(
                (ctor_name, self._constructor_type(
                    scratch, family, family_type, len(params), univ_params, binders, ctor_type_p, ctor_span,
                ))
                for ctor_name, binders, ctor_type_p, ctor_span in constructors
            )
        decl = Inductive(name, univ_params, len(params), family_type, ctor_types)
        return self._kernel(decl, span, internal=False)

    def _constructor_type(self, scratch, family, family_type, num_params, univ_params,
                          binders, type_p, span):
        pre = self._preprocessor(scratch, univ_params)
        params = []
        ty = family_type
        for _ in range(num_params):
            local = mk_local(ty.domain, ty.name, BinderInfo.IMPLICIT)
            params.append(local)
            ty = instantiate(ty.body, local)
        fields = pre.elab_binders(binders, params)
        if type_p is None:
            result_type = mk_app_n(family, params)
        else:
            result_type = pre.elab_type(type_p, params + fields)
        result = self._solve(pre, span, scratch)
        locals_, (result_type,) = self._close(result.substitution, params + fields, result_type)
        ctor_type = abstract_pi(locals_, result_type)
        self._require_solved(pre, span, ctor_type)
        return instantiate_level_metas(ctor_type, lambda uid: lvl.ZERO)

    def structure(self, name: Name, param_binders, type_p, field_binders, span,
                  is_class: bool = False, level_params=()):
        """Single-constructor inductive ``name`` with constructor ``name.mk`` and projections."""
        ctor = (name.append("mk"), field_binders, None, span)
        env = self.inductive(name, param_binders, type_p, [ctor], span, level_params)
        if is_class:
            env = env.add_class(name)
        try:
            return add_structure_projections(env, name, [b.name for b in field_binders], is_class)
        except KernelError as error:
            raise ElaborationError(span, str(error)) from error

    # terms

    def term(self, p, span=None):
        """(term, type) for a closed preterm, kernel-checked."""
        span = span or p.span
        with self._reporting(span):
            pre = self._preprocessor()
            t, _ = pre.preprocess(p, [])
            ty = pre.type_of(t, asserted("type of term", p.span))
            result = self._solve(pre, span)
            _, (t, ty) = self._close(result.substitution, [], t, ty)
            self._require_solved(pre, span, t, ty)
            _, ty, (t,) = self._generalize(result, ty, [t], pre.level_params, span)
        try:
            tc = TypeChecker(self.env)
            if not tc.is_def_eq(tc.check(t), ty):
                raise KernelError(f"elaborated term does not have type {ty}")
        except KernelError as error:
            raise KernelRecheckError(span, error) from error
        return t, ty

    def evaluate(self, p, span=None):
        """Normal form of ``p`` under full transparency, with its type."""
        t, ty = self.term(p, span)
        return TypeChecker(self.env).normalize(t, Transparency.ALL), ty

    def solutions(self, p, limit: int = 10):
        """Distinct elaborations of ``p``, one per solution the solver enumerates."""
        pre = self._preprocessor()
        t, _ = pre.preprocess(p, [])
        pre.type_of(t, asserted("type of term", p.span))
        solver = Solver(self.env, self.max_steps, self.trace, pre.tc)
        seen = []
        for result in solver.solve_all(pre.constraints, limit):
            term = result.substitution.instantiate_term(t)
            if term not in seen:
                seen.append(term)
                yield term

    # helpers

    def _require_fresh(self, name, span):
        if name in self.env:
            raise ElaborationError(span, f"'{name}' has already been declared")

    def _kernel(self, decl, span, internal: bool = True):
        try:
            return check_declaration(self.env, decl)
        except DuplicateDeclaration as error:
            raise ElaborationError(span, str(error)) from error
        except KernelError as error:
            if internal:
                raise KernelRecheckError(span, error) from error
            raise ElaborationError(span, str(error)) from error

    def _solve(self, pre, span, env=None):
        solver = Solver(env or self.env, self.max_steps, self.trace, pre.tc)
        result = solver.solve(pre.constraints)
        if not result.ok:
            raise self.failure(result.error, span)
        if result.residue:
            subst = result.substitution
            terms = []
            for c in result.residue:
                terms.append(subst.instantiate_term(c.lhs))
                terms.append(subst.instantiate_term(c.rhs))
            raise UnsolvedHoles(span, self._holes(pre, terms, span))
        return result

    @staticmethod
    def _close(subst, ctx, *terms):
        """Context locals and ``terms`` with every assigned metavariable replaced."""
        locals_ = [local.with_type(subst.instantiate_term(local.type)) for local in ctx]
        return locals_, [subst.instantiate_term(t) for t in terms]

    @staticmethod
    def _holes(pre, terms, span):
        metas = []
        for t in terms:
            collect_metas(t, metas)
        holes = []
        for meta in metas:
            hole = pre.holes.get(meta.uid, (span, "placeholder"))
            if hole not in holes:
                holes.append(hole)
        return holes

    def _require_solved(self, pre, span, *terms):
        holes = self._holes(pre, terms, span)
        if holes:
            raise UnsolvedHoles(span, holes)

    def _generalize(self, result, ty, values, level_params, span):
        """Turn level metavariables of ``ty`` into universe parameters, zero the rest."""
        params = list(level_params)
        mapping = {}
        k = 0
        for meta in collect_level_metas(ty, []):
            k += 1
            param = Name((f"u_{k}",))
            while param in params:
                k += 1
                param = Name((f"u_{k}",))
            params.append(param)
            mapping[meta.uid] = lvl.LevelParam(param)

        def lookup(uid):
            return mapping.get(uid, lvl.ZERO)

        ty = instantiate_level_metas(ty, lookup)
        values = [instantiate_level_metas(v, lookup) for v in values]
        self._check_pending(result, span, lookup)
        return tuple(params), ty, values

    @staticmethod
    def _check_pending(result, span, lookup):
        """Pending level equations must hold once leftover metas are generalized or zeroed."""
        subst = result.substitution

        def generalized(level):
            level, _ = subst.instantiate_level(level)
            return lvl.replace(level, lambda l: lookup(l.uid) if isinstance(l, lvl.LevelMeta) else None)

        for c in result.pending_levels:
            lhs = generalized(c.lhs)
            rhs = generalized(c.rhs)
            if not lvl.is_equivalent(lhs, rhs):
                raise ElaborationError(
                    span,
                    f"universe level constraint {lvl.level_to_str(lhs)} = {lvl.level_to_str(rhs)} "
                    "cannot be satisfied",
                    trace=asserted_origins(c.j),
                )

    # failures

    @contextmanager
    def _reporting(self, span):
        try:
            yield
        except JustifiedError as error:
            raise self.failure(error, span) from error

    def failure(self, error: JustifiedError, span) -> ElaborationError:
        """Diagnostic-ready error for a justified solver failure."""
        namer = MetaNamer()
        tc = TypeChecker(self.env)

        def show(t):
            return term_to_str(t, self.env, namer)

        failure = ElaborationError(
            span, error.message,
            trace=asserted_origins(error.j),
            details=_explain(error, show, tc),
        )
        failure.splits = len(error.j.assumptions()) if error.j is not None else 0
        return failure


def _explain(error, show, tc) -> list:
    if isinstance(error, UnificationFailure):
        lhs = tc.whnf(error.lhs, Transparency.DEFAULT)
        rhs = tc.whnf(error.rhs, Transparency.DEFAULT)
        return [f"cannot unify {show(lhs)}", f"with {show(rhs)}"]
    if isinstance(error, OverloadExhausted):
        lines = []
        for label, sub in error.failures:
            lines.append(f"{label}: {sub.message}")
            lines.extend("  " + line for line in _explain(sub, show, tc))
        return lines
    if isinstance(error, (InstanceNotFound, InstanceDepthExceeded)):
        return [f"goal: {show(error.goal)}"]
    if isinstance(error, FunctionExpected):
        return [f"{show(error.term)} has type {show(error.type)}"]
    return []
