"""Type-class resolution as a stream of alternatives for an ondemand choice.

Instances are tried depth first: local instances of the choice's context
first, then the instance database in declaration order. Instance-implicit
premises become nested ondemand choices, so the solver performs the
backward chaining and backtracks into them like any other case split.
"""
import logging

import config
from constraints.constraint import Alternative, ChoiceConstraint, UnifConstraint
from constraints.errors import InstanceDepthExceeded, InstanceNotFound, JustifiedError
from constraints.simp import Simplifier
from kernel import level as lvl
from kernel.reduction import Transparency
from kernel.term import (
    BinderInfo,
    Const,
    FVar,
    Pi,
    get_app_args,
    get_app_fn,
    instantiate,
    mk_app_n,
    mk_meta,
)

logger = logging.getLogger(__name__)


def class_of(env, tc, ty):
    """Class head of ``ty`` after reducible unfolding, or None."""
    ty = tc.whnf(ty, Transparency.REDUCIBLE_ONLY)
    while type(ty) is Pi:
        ty = ty.body
    head = get_app_fn(ty)
    if type(head) is Const and env.is_class(head.name):
        return head.name
    return None


class InstanceResolver:
    def __init__(self, env, tc, max_depth: int | None = None):
        self.env = env
        self.tc = tc
        self.filter = Simplifier(tc, Transparency.REDUCIBLE_ONLY)
        self.max_depth = config.INSTANCE_SEARCH_DEPTH if max_depth is None else max_depth

    def choice(self, meta_app, ty, j, depth: int = 0, span=None) -> ChoiceConstraint:
        """Ondemand choice synthesizing ``meta_app : ty``."""
        head = get_app_fn(self.tc.whnf(ty, Transparency.REDUCIBLE_ONLY))
        label = str(head.name) if type(head) is Const else "instance"
        return ChoiceConstraint(
            meta_app, ty, self._chooser(j, depth), True, j, "instance", label, span,
        )

    def _chooser(self, j, depth):
        def chooser(meta_app, ty, subst):
            return self.resolve(meta_app, subst.instantiate_term(ty), j, depth)

        return chooser

    def _candidates(self, cls, ctx):
        for local in reversed(ctx):
            if type(local) is FVar and class_of(self.env, self.tc, local.type) == cls:
                yield local
        for inst in self.env.instance_db.of(cls):
            decl = self.env.get(inst)
            yield Const(inst, tuple(lvl.mk_level_meta() for _ in decl.univ_params))

    def resolve(self, meta_app, goal, j, depth):
        """Lazy stream of alternatives, one per instance whose head matches ``goal``."""
        ctx = get_app_args(meta_app)
        goal = self.tc.whnf(goal, Transparency.REDUCIBLE_ONLY)
        cls = class_of(self.env, self.tc, goal)
        if cls is None:
            raise InstanceNotFound(j, goal)
        if depth >= self.max_depth:
            def too_deep():
                raise InstanceDepthExceeded(j, goal, self.max_depth)

            yield Alternative(too_deep, "depth limit")
            return
        logger.debug("instance search for %s at depth %d", goal, depth)
        found = False
        for candidate in self._candidates(cls, ctx):
            applied, result_type, premises = self._instantiate(candidate, ctx, j, depth)
            if not self._may_match(result_type, goal, j):
                continue
            found = True
            cs = [
                UnifConstraint(meta_app, applied, j, Transparency.REDUCIBLE_ONLY),
                UnifConstraint(result_type, goal, j, Transparency.REDUCIBLE_ONLY),
            ]
            yield Alternative(cs + premises, str(candidate))
        if not found:
            raise InstanceNotFound(j, goal)

    def _instantiate(self, candidate, ctx, j, depth):
        """``candidate ?a₁ … ?aₙ`` with nested choices for instance-implicit premises."""
        ty, _ = self.tc.infer(candidate)
        args = []
        premises = []
        while True:
            ty = self.tc.whnf(ty, Transparency.REDUCIBLE_ONLY)
            if type(ty) is not Pi:
                break
            arg = mk_meta(ctx, ty.domain)
            if ty.info == BinderInfo.INST_IMPLICIT:
                premises.append(self.choice(arg, ty.domain, j, depth + 1))
            args.append(arg)
            ty = instantiate(ty.body, arg)
        return mk_app_n(candidate, args), ty, premises

    def _may_match(self, result_type, goal, j) -> bool:
        try:
            self.filter.simp_terms(result_type, goal, j)
        except JustifiedError:
            return False
        return True
