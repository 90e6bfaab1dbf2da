import logging

from constraints.constraint import UnifConstraint
from constraints.errors import FunctionExpected
from constraints.justification import asserted
from kernel import level as lvl
from kernel.environment import Axiom, Definition
from kernel.errors import DeclarationTypeMismatch, DuplicateDeclaration, KernelError, KernelTypeError
from kernel.reduction import Reducer, Transparency
from kernel.term import (
    App,
    BinderInfo,
    BVar,
    Const,
    FVar,
    Lambda,
    Meta,
    Pi,
    Sort,
    abstract,
    collect_consts,
    get_app_fn,
    get_app_fn_args,
    instantiate,
    instantiate_level_params,
    mk_app_n,
    mk_local,
    mk_meta,
)

logger = logging.getLogger(__name__)

_INFERENCE = asserted("type inference")


class TypeChecker(Reducer):
    """Type inference, ``ensurefun`` and kernel conversion over one environment.

    ``infer`` works on terms with metavariables and reports the constraints it
    needs; ``check`` is the metavariable-free kernel path that also verifies
    argument types.
    """

    def __init__(self, env):
        super().__init__(env)
        self._defeq_cache = set()

    # inference

    def infer(self, t, j=None):
        """(type, constraints) for ``t``."""
        cs = []
        ty = self._infer(t, j or _INFERENCE, cs, False)
        return ty, cs

    def check(self, t):
        """Type of a metavariable-free term, verifying it along the way."""
        cs = []
        ty = self._infer(t, None, cs, True)
        if cs:
            raise KernelTypeError(f"term contains unsolved metavariables: {t}")
        return ty

    def _infer(self, t, j, cs, check):
        cls = type(t)
        if cls is FVar or cls is Meta:
            return t.type
        if cls is Sort:
            return Sort(lvl.mk_succ(t.level))
        if cls is Const:
            decl = self.env.find(t.name)
            if decl is None:
                raise KernelTypeError(f"unknown constant '{t.name}'")
            if len(decl.univ_params) != len(t.levels):
                raise KernelTypeError(f"wrong number of universe levels for '{t.name}'")
            return instantiate_level_params(decl.type, decl.univ_params, t.levels)
        if cls is App:
            head, args = get_app_fn_args(t)
            fn_type = self._infer(head, j, cs, check)
            for arg in args:
                pi = self._ensure_pi_type(fn_type, head, j, cs, check)
                if check:
                    arg_type = self._infer(arg, j, cs, True)
                    if not self.is_def_eq(pi.domain, arg_type):
                        raise KernelTypeError(
                            f"application type mismatch: argument {arg} has type {arg_type} "
                            f"but is expected to have type {pi.domain}"
                        )
                fn_type = instantiate(pi.body, arg)
            return fn_type
        if cls is Lambda:
            if check:
                self._ensure_sort(self._infer(t.domain, j, cs, True), j, cs, True)
            local = mk_local(t.domain, t.name, t.info)
            body_type = self._infer(instantiate(t.body, local), j, cs, check)
            return Pi(t.info, t.name, t.domain, abstract(local, body_type))
        if cls is Pi:
            domain_level = self._ensure_sort(self._infer(t.domain, j, cs, check), j, cs, check)
            local = mk_local(t.domain, t.name, t.info)
            body_level = self._ensure_sort(
                self._infer(instantiate(t.body, local), j, cs, check), j, cs, check
            )
            if lvl.is_zero(body_level):
                return Sort(lvl.ZERO)
            return Sort(lvl.normalize(lvl.mk_max(domain_level, body_level)))
        if cls is BVar:
            raise KernelTypeError(f"unexpected bound variable #{t.idx}")
        raise KernelTypeError(f"cannot infer type of {t!r}")

    def _ensure_sort(self, ty, j, cs, check):
        if type(ty) is Sort:
            return ty.level
        whnf_ty = self.whnf(ty, Transparency.ALL)
        if type(whnf_ty) is Sort:
            return whnf_ty.level
        if not check and self.is_stuck(whnf_ty) is not None:
            level = lvl.mk_level_meta()
            cs.append(UnifConstraint(whnf_ty, Sort(level), j))
            return level
        raise KernelTypeError(f"type expected, got {ty}")

    def ensure_sort(self, ty, j=None):
        """Level of the sort ``ty`` reduces to, plus any constraint needed to make it one."""
        cs = []
        level = self._ensure_sort(ty, j or _INFERENCE, cs, False)
        return level, cs

    def _ensure_pi_type(self, ty, subject, j, cs, check):
        if type(ty) is Pi:
            return ty
        whnf_ty = self.whnf(ty, Transparency.ALL)
        if type(whnf_ty) is Pi:
            return whnf_ty
        reason = None if check else self.is_stuck(whnf_ty)
        if reason is None:
            if check or j is None:
                raise KernelTypeError(f"function expected, {subject} has type {ty}")
            raise FunctionExpected(j, subject, whnf_ty)
        pi = self._fresh_pi_for(reason.term)
        cs.append(UnifConstraint(whnf_ty, pi, j))
        return pi

    def _fresh_pi_for(self, reason_term):
        """``Π x : ?m₁ s̄, ?m₂ s̄ x`` for a stuck ``?m s̄``."""
        meta, args = get_app_fn_args(reason_term)
        telescope = []
        meta_type = meta.type
        for _ in args:
            meta_type = self.whnf(meta_type, Transparency.ALL)
            if type(meta_type) is not Pi:
                break
            local = mk_local(meta_type.domain, meta_type.name)
            telescope.append(local)
            meta_type = instantiate(meta_type.body, local)
        used = args[: len(telescope)]
        domain_hole = mk_meta(telescope, Sort(lvl.mk_level_meta()))
        y = mk_local(domain_hole, "y")
        codomain_hole = mk_meta(telescope + [y], Sort(lvl.mk_level_meta()))
        domain = mk_app_n(get_app_fn(domain_hole), used)
        codomain = App(mk_app_n(get_app_fn(codomain_hole), used), BVar(0))
        return Pi(BinderInfo.EXPLICIT, "x", domain, codomain)

    def ensure_pi(self, ty, subject, j):
        """(Π-type ``ty`` reduces to, constraints) for ``subject : ty``."""
        cs = []
        pi = self._ensure_pi_type(ty, subject, j or _INFERENCE, cs, False)
        return pi, cs

    def ensure_fun(self, s, j):
        """(Π-type of ``s``, constraints); raises FunctionExpected when impossible."""
        ty, cs = self.infer(s, j)
        pi = self._ensure_pi_type(ty, s, j, cs, False)
        return pi, cs

    # conversion

    def is_def_eq(self, t, s) -> bool:
        """Kernel conversion under β, ι, δ (all), η and level normalization."""
        if t is s or t == s:
            return True
        key = (t, s)
        if key in self._defeq_cache:
            return True
        result = self._is_def_eq(t, s)
        if result:
            self._defeq_cache.add(key)
        return result

    def _is_def_eq(self, t, s) -> bool:
        t = self.whnf_core(t)
        s = self.whnf_core(s)
        if t == s:
            return True
        quick = self._quick_def_eq(t, s)
        if quick is not None:
            return quick
        while True:
            t_def = self._unfoldable_head(t)
            s_def = self._unfoldable_head(s)
            if t_def is None and s_def is None:
                break
            if t_def is not None and s_def is not None and t_def.name == s_def.name:
                if self._same_head_args(t, s):
                    return True
                t = self.whnf_core(self.unfold(t))
                s = self.whnf_core(self.unfold(s))
            elif s_def is None or (t_def is not None and t_def.depth > s_def.depth):
                t = self.whnf_core(self.unfold(t))
            elif t_def is None or s_def.depth > t_def.depth:
                s = self.whnf_core(self.unfold(s))
            else:
                t = self.whnf_core(self.unfold(t))
                s = self.whnf_core(self.unfold(s))
            if t == s:
                return True
            quick = self._quick_def_eq(t, s)
            if quick is not None:
                return quick
        return self._same_head_args(t, s)

    def _unfoldable_head(self, t):
        head = get_app_fn(t)
        if type(head) is not Const:
            return None
        decl = self.env.find(head.name)
        return decl if isinstance(decl, Definition) else None

    def _same_head_args(self, t, s) -> bool:
        t_head, t_args = get_app_fn_args(t)
        s_head, s_args = get_app_fn_args(s)
        if len(t_args) != len(s_args) or type(t_head) is not type(s_head):
            return False
        if type(t_head) is Const:
            if t_head.name != s_head.name or len(t_head.levels) != len(s_head.levels):
                return False
            if not all(lvl.is_equivalent(a, b) for a, b in zip(t_head.levels, s_head.levels)):
                return False
        elif type(t_head) in (FVar, Meta):
            if t_head.uid != s_head.uid:
                return False
        elif not self.is_def_eq(t_head, s_head):
            return False
        return all(self.is_def_eq(a, b) for a, b in zip(t_args, s_args))

    def _quick_def_eq(self, t, s):
        t_cls, s_cls = type(t), type(s)
        if t_cls is Sort and s_cls is Sort:
            return lvl.is_equivalent(t.level, s.level)
        if (t_cls is Lambda and s_cls is Lambda) or (t_cls is Pi and s_cls is Pi):
            if not self.is_def_eq(t.domain, s.domain):
                return False
            local = mk_local(t.domain, t.name)
            return self.is_def_eq(instantiate(t.body, local), instantiate(s.body, local))
        if t_cls is Lambda and s_cls is not Lambda:
            return self.is_def_eq(t, Lambda(t.info, t.name, t.domain, App(s, BVar(0))))
        if s_cls is Lambda and t_cls is not Lambda:
            return self.is_def_eq(Lambda(s.info, s.name, s.domain, App(t, BVar(0))), s)
        return None


def definition_depth(env, value) -> int:
    """1 + the largest depth among constants occurring in ``value``."""
    return 1 + max((env.depth(n) for n in collect_consts(value, set())), default=0)


def _require_closed(name, *terms):
    for t in terms:
        if t.has_meta or t.has_level_meta or t.has_fvar or t.bound:
            raise KernelError(f"declaration '{name}' is not fully elaborated")


def check_declaration(env, decl):
    """Verify an axiom, definition or inductive and return the extended environment."""
    if isinstance(decl, Axiom):
        _require_closed(decl.name, decl.type)
        if decl.name in env:
            raise DuplicateDeclaration(decl.name)
        tc = TypeChecker(env)
        tc._ensure_sort(tc.check(decl.type), None, [], True)
        return env.add(decl)
    if isinstance(decl, Definition):
        _require_closed(decl.name, decl.type, decl.value)
        if decl.name in env:
            raise DuplicateDeclaration(decl.name)
        tc = TypeChecker(env)
        tc._ensure_sort(tc.check(decl.type), None, [], True)
        value_type = tc.check(decl.value)
        if not tc.is_def_eq(value_type, decl.type):
            raise DeclarationTypeMismatch(decl.name, decl.type, value_type)
        depth = definition_depth(env, decl.value)
        logger.debug("checked definition %s (depth %d)", decl.name, depth)
        return env.add(Definition(decl.name, decl.univ_params, decl.type, decl.value, decl.hint, depth))
    from kernel.inductive import add_inductive

    return add_inductive(env, decl)
