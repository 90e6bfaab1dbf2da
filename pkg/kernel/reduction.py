import logging
from dataclasses import dataclass
from enum import Enum

from kernel.environment import Constructor, Definition, Recursor, ReducibilityHint
from kernel.term import (
    Const,
    Lambda,
    Meta,
    Pi,
    abstract,
    abstract_lambda,
    beta,
    get_app_fn,
    get_app_fn_args,
    instantiate,
    instantiate_level_params,
    mk_app_n,
    mk_local,
)

logger = logging.getLogger(__name__)


class Transparency(Enum):
    DEFAULT = "default"  # reducible and semireducible
    REDUCIBLE_ONLY = "reducibleOnly"  # type-class resolution
    ALL = "all"  # kernel conversion, hints ignored


class StuckKind(Enum):
    APPLICATION = "stuckApplication"
    RECURSOR = "stuckRecursor"


@dataclass(frozen=True)
class StuckReason:
    term: object  # ?m s̄
    kind: StuckKind

    @property
    def meta(self) -> Meta:
        return get_app_fn(self.term)


def can_unfold(decl, mode: Transparency) -> bool:
    if not isinstance(decl, Definition):
        return False
    if mode == Transparency.ALL:
        return True
    if decl.hint == ReducibilityHint.IRREDUCIBLE:
        return False
    if mode == Transparency.REDUCIBLE_ONLY:
        return decl.hint == ReducibilityHint.REDUCIBLE
    return True


class Reducer:
    """Head reduction over a fixed environment."""

    def __init__(self, env):
        self.env = env
        self._whnf_cache = {}
        self._value_cache = {}

    # δ

    def definition_value(self, const: Const):
        cached = self._value_cache.get(const)
        if cached is not None:
            return cached
        decl = self.env.find(const.name)
        if not isinstance(decl, Definition):
            return None
        value = instantiate_level_params(decl.value, decl.univ_params, const.levels)
        self._value_cache[const] = value
        return value

    def unfold(self, t):
        """Unfold the head definition of ``f t₁ … tₙ`` and β-reduce; None otherwise."""
        head, args = get_app_fn_args(t)
        if type(head) is not Const:
            return None
        value = self.definition_value(head)
        if value is None:
            return None
        return beta(value, args)

    def depth(self, name) -> int:
        return self.env.depth(name)

    # ι

    def _iota(self, head: Const, args: list, reduce_major):
        rec = self.env.find(head.name)
        if not isinstance(rec, Recursor) or len(args) < rec.num_args:
            return None
        major = reduce_major(args[rec.major_index])
        ctor_head, ctor_args = get_app_fn_args(major)
        if type(ctor_head) is not Const:
            return None
        ctor = self.env.find(ctor_head.name)
        if not isinstance(ctor, Constructor) or ctor.inductive != rec.inductive:
            return None
        fields = ctor_args[ctor.num_params:]
        if len(fields) != ctor.num_fields:
            return None
        params = args[: rec.num_params]
        motive = args[rec.num_params]
        minors = args[rec.num_params + 1 : rec.num_params + 1 + rec.num_minors]
        ind_levels = head.levels[1:] if rec.large_elim else head.levels
        ihs = self._inductive_hypotheses(head, ctor, ind_levels, params, motive, minors, fields)
        extra = args[rec.num_args:]
        return beta(minors[ctor.index], list(fields) + ihs + list(extra))

    def _inductive_hypotheses(self, rec_const, ctor, ind_levels, params, motive, minors, fields):
        ty = instantiate_level_params(ctor.type, ctor.univ_params, ind_levels)
        for param in params:
            ty = instantiate(ty.body, param)
        ihs = []
        for field in fields:
            domain = ty.domain
            ys = []
            inner = domain
            while type(inner) is Pi:
                y = mk_local(inner.domain, inner.name)
                ys.append(y)
                inner = instantiate(inner.body, y)
            res_head, res_args = get_app_fn_args(inner)
            if type(res_head) is Const and res_head.name == ctor.inductive:
                indices = res_args[ctor.num_params:]
                body = mk_app_n(
                    rec_const,
                    list(params) + [motive] + list(minors) + list(indices) + [mk_app_n(field, ys)],
                )
                ihs.append(abstract_lambda(ys, body))
            ty = instantiate(ty.body, field)
        return ihs

    # β ι

    def reduce_beta_iota(self, t):
        """Head β and ι until neither applies; the major premise is only β/ι-reduced."""
        while True:
            head, args = get_app_fn_args(t)
            if type(head) is Lambda and args:
                t = beta(head, args)
                continue
            if type(head) is Const and args:
                reduced = self._iota(head, args, self.reduce_beta_iota)
                if reduced is not None:
                    t = reduced
                    continue
            return t

    def whnf_core(self, t, mode: Transparency = Transparency.ALL):
        """Head β and ι; the major premise is brought to whnf under ``mode``."""
        while True:
            head, args = get_app_fn_args(t)
            if type(head) is Lambda and args:
                t = beta(head, args)
                continue
            if type(head) is Const and args:
                reduced = self._iota(head, args, lambda m: self.whnf(m, mode))
                if reduced is not None:
                    t = reduced
                    continue
            return t

    def whnf(self, t, mode: Transparency = Transparency.DEFAULT):
        key = (t, mode)
        cached = self._whnf_cache.get(key)
        if cached is not None:
            return cached
        result = t
        while True:
            result = self.whnf_core(result, mode)
            head = get_app_fn(result)
            if type(head) is Const:
                decl = self.env.find(head.name)
                if can_unfold(decl, mode):
                    result = self.unfold(result)
                    continue
            break
        self._whnf_cache[key] = result
        return result

    def is_beta_iota_reducible(self, t) -> bool:
        return self.reduce_beta_iota(t) is not t

    def is_stuck(self, t):
        """Reason computation on ``t`` is blocked by a metavariable, or None."""
        head, args = get_app_fn_args(t)
        if type(head) is Meta:
            return StuckReason(t, StuckKind.APPLICATION)
        if type(head) is Const:
            rec = self.env.find(head.name)
            if isinstance(rec, Recursor) and len(args) >= rec.num_args:
                major = self.whnf(args[rec.major_index], Transparency.DEFAULT)
                reason = self.is_stuck(major)
                if reason is not None:
                    return StuckReason(reason.term, StuckKind.RECURSOR)
        return None

    def is_recursor_app(self, t) -> bool:
        head = get_app_fn(t)
        return type(head) is Const and isinstance(self.env.find(head.name), Recursor)

    def normalize(self, t, mode: Transparency = Transparency.ALL):
        """Full normal form by repeated whnf under heads, arguments and binders."""
        t = self.whnf(t, mode)
        head, args = get_app_fn_args(t)
        if type(head) in (Lambda, Pi):
            local = mk_local(head.domain, head.name, head.info)
            domain = self.normalize(head.domain, mode)
            body = self.normalize(instantiate(head.body, local), mode)
            head = type(head)(head.info, head.name, domain, abstract(local, body))
        return mk_app_n(head, [self.normalize(a, mode) for a in args])
