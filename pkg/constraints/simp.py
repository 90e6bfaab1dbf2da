import logging

from constraints.constraint import LevelConstraint, UnifConstraint
from constraints.errors import JustifiedError, LevelMismatch, UnificationFailure
from kernel import level as lvl
from kernel.environment import Definition, Recursor, ReducibilityHint
from kernel.reduction import Transparency, can_unfold
from kernel.term import (
    HAS_LMETA,
    HAS_META,
    App,
    BVar,
    Const,
    FVar,
    Lambda,
    Meta,
    Pi,
    Sort,
    get_app_fn_args,
    instantiate,
    mk_local,
)

logger = logging.getLogger(__name__)

_METAS = HAS_META | HAS_LMETA


def is_meta_free(t) -> bool:
    return not t.flags & _METAS


class Simplifier:
    """Decomposes a unification constraint into residual constraints.

    Residuals are flex, stuck or delta constraints (see ``classify``) plus
    level constraints; a rigid disagreement raises an error carrying the
    input's justification.
    """

    def __init__(self, tc, transparency: Transparency = Transparency.DEFAULT):
        self.tc = tc
        self.env = tc.env
        self.transparency = transparency
        self._siblings = {transparency: self}

    def at(self, transparency: Transparency) -> "Simplifier":
        """Simplifier over the same checker that unfolds only as far as ``transparency``."""
        sibling = self._siblings.get(transparency)
        if sibling is None:
            sibling = self._siblings[transparency] = Simplifier(self.tc, transparency)
        return sibling

    def simp(self, c) -> list:
        out = []
        if isinstance(c, LevelConstraint):
            self._levels(c.lhs, c.rhs, c.j, out)
        elif c.transparency != self.transparency:
            return self.at(c.transparency).simp(c)
        else:
            self._simp(c.lhs, c.rhs, c.j, out)
        return out

    def simp_terms(self, t, s, j) -> list:
        out = []
        self._simp(t, s, j, out)
        return out

    def _levels(self, a, b, j, out):
        if lvl.is_equivalent(a, b):
            return
        if not lvl.has_meta(a) and not lvl.has_meta(b):
            raise LevelMismatch(j, a, b)
        out.append(LevelConstraint(a, b, j))

    def _argwise(self, t_args, s_args, j, out):
        for a, b in zip(t_args, s_args):
            self._simp(a, b, j, out)

    def _try_argwise(self, t_head, t_args, s_head, s_args, j) -> bool:
        """Argwise decomposition that must leave nothing behind."""
        attempt = []
        try:
            for a, b in zip(t_head.levels, s_head.levels):
                self._levels(a, b, j, attempt)
            self._argwise(t_args, s_args, j, attempt)
        except JustifiedError:
            return False
        return not attempt

    def _mode(self, t, s) -> Transparency:
        # closed terms may be compared by full unfolding, but never past reducible-only
        if self.transparency == Transparency.DEFAULT and is_meta_free(t) and is_meta_free(s):
            return Transparency.ALL
        return self.transparency

    def _unfoldable(self, head, mode):
        if type(head) is not Const:
            return None
        decl = self.env.find(head.name)
        return decl if can_unfold(decl, mode) else None

    def _simp(self, t, s, j, out):
        if t == s:
            return
        t = self.tc.reduce_beta_iota(t)
        s = self.tc.reduce_beta_iota(s)
        if t == s:
            return
        t_cls, s_cls = type(t), type(s)

        if t_cls is Sort and s_cls is Sort:
            self._levels(t.level, s.level, j, out)
            return
        if (t_cls is Lambda and s_cls is Lambda) or (t_cls is Pi and s_cls is Pi):
            self._simp(t.domain, s.domain, j, out)
            local = mk_local(t.domain, t.name)
            self._simp(instantiate(t.body, local), instantiate(s.body, local), j, out)
            return

        t_head, t_args = get_app_fn_args(t)
        s_head, s_args = get_app_fn_args(s)
        if type(t_head) is Meta or type(s_head) is Meta:
            out.append(UnifConstraint(t, s, j, self.transparency))
            return

        if t_cls is Lambda:
            self._simp(t, self._eta_expand(s, j, out), j, out)
            return
        if s_cls is Lambda:
            self._simp(self._eta_expand(t, j, out), s, j, out)
            return

        same_arity = len(t_args) == len(s_args)
        if type(t_head) is FVar and type(s_head) is FVar and t_head.uid == s_head.uid and same_arity:
            self._argwise(t_args, s_args, j, out)
            return

        mode = self._mode(t, s)
        if type(t_head) is Const and type(s_head) is Const and t_head.name == s_head.name and same_arity:
            if self._same_constant(t, s, t_head, t_args, s_head, s_args, mode, j, out):
                return
        else:
            t_def = self._unfoldable(t_head, mode)
            s_def = self._unfoldable(s_head, mode)
            if t_def is not None and (s_def is None or t_def.depth > s_def.depth):
                self._simp(self.tc.unfold(t), s, j, out)
                return
            if s_def is not None and (t_def is None or s_def.depth > t_def.depth):
                self._simp(t, self.tc.unfold(s), j, out)
                return
            if t_def is not None and s_def is not None:
                self._simp(self.tc.unfold(t), self.tc.unfold(s), j, out)
                return
        self._fallback(t, s, mode, j, out)

    def _same_constant(self, t, s, t_head, t_args, s_head, s_args, mode, j, out) -> bool:
        """Handle ``f s̄ ≐ f t̄``; False means fall through to the stuck/error check."""
        decl = self.env.find(t_head.name)
        if is_meta_free(t) and is_meta_free(s):
            if not self.env.is_projection(t_head.name):
                if self._try_argwise(t_head, t_args, s_head, s_args, j):
                    return True
            if can_unfold(decl, mode):
                self._simp(self.tc.unfold(t), self.tc.unfold(s), j, out)
                return True
            if isinstance(decl, (Definition, Recursor)):
                return False
        elif isinstance(decl, Recursor):
            if self.tc.is_stuck(t) is not None or self.tc.is_stuck(s) is not None:
                out.append(UnifConstraint(t, s, j, self.transparency))
                return True
            return False
        elif isinstance(decl, Definition) and decl.hint == ReducibilityHint.REDUCIBLE:
            out.append(UnifConstraint(t, s, j, self.transparency))
            return True
        for a, b in zip(t_head.levels, s_head.levels):
            self._levels(a, b, j, out)
        self._argwise(t_args, s_args, j, out)
        return True

    def _eta_expand(self, s, j, out):
        """``λ x : A, s x`` where ``A`` comes from ``ensurefun``."""
        pi, cs = self.tc.ensure_fun(s, j)
        for c in cs:
            self._simp(c.lhs, c.rhs, c.j, out)
        return Lambda(pi.info, pi.name, pi.domain, App(s, BVar(0)))

    def _fallback(self, t, s, mode, j, out):
        t_whnf = self.tc.whnf(t, mode)
        s_whnf = self.tc.whnf(s, mode)
        if t_whnf != t or s_whnf != s:
            self._simp(t_whnf, s_whnf, j, out)
            return
        if self.tc.is_stuck(t) is not None or self.tc.is_stuck(s) is not None:
            out.append(UnifConstraint(t, s, j, self.transparency))
            return
        raise UnificationFailure(j, t, s)
