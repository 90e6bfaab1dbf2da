"""Locally nameless terms.

Bound variables are de Bruijn indices, free variables (local constants) and
metavariables carry a unique id and a closed type. Every node caches an upper
bound on its dangling indices plus bits telling whether free variables,
metavariables, level metavariables or universe parameters occur below it, so
the traversals below can return untouched subtrees without visiting them.
"""
from enum import Enum

from kernel import level as lvl
from kernel.fresh import fresh_id
from kernel.level import Level
from kernel.name import Name

HAS_FVAR = 1
HAS_META = 2
HAS_LMETA = 4
HAS_LPARAM = 8


class BinderInfo(Enum):
    EXPLICIT = "explicit"
    IMPLICIT = "implicit"
    INST_IMPLICIT = "instImplicit"


class TraversalStats:
    """Node-visit counter for instantiate/abstract/subst, off by default."""

    def __init__(self):
        self.enabled = False
        self.visits = 0

    def reset(self):
        self.visits = 0


STATS = TraversalStats()


class Term:
    __slots__ = ("bound", "flags", "_hash")

    @property
    def has_fvar(self) -> bool:
        return bool(self.flags & HAS_FVAR)

    @property
    def has_meta(self) -> bool:
        return bool(self.flags & HAS_META)

    @property
    def has_level_meta(self) -> bool:
        return bool(self.flags & HAS_LMETA)

    @property
    def has_level_param(self) -> bool:
        return bool(self.flags & HAS_LPARAM)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or self._hash != other._hash:
            return False
        return self._same(other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __repr__(self):
        from kernel.printer import term_to_str

        return term_to_str(self)

    __str__ = __repr__


def _level_flags(level: Level) -> int:
    flags = 0
    if lvl.has_meta(level):
        flags |= HAS_LMETA
    params = []
    lvl.collect_params(level, params)
    if params:
        flags |= HAS_LPARAM
    return flags


class BVar(Term):
    __slots__ = ("idx",)

    def __init__(self, idx: int):
        self.idx = idx
        self.bound = idx + 1
        self.flags = 0
        self._hash = hash(("bvar", idx))

    def _same(self, other):
        return self.idx == other.idx


class FVar(Term):
    """Local constant. Its type is closed and not part of the subtree."""

    __slots__ = ("uid", "name", "type", "info")

    def __init__(self, uid: int, name: str, type: Term, info: BinderInfo = BinderInfo.EXPLICIT):
        self.uid = uid
        self.name = name
        self.type = type
        self.info = info
        self.bound = 0
        self.flags = HAS_FVAR
        self._hash = hash(("fvar", uid))

    def _same(self, other):
        return self.uid == other.uid

    def with_type(self, type: Term) -> "FVar":
        return FVar(self.uid, self.name, type, self.info)


class Meta(Term):
    """Metavariable. Its type is closed and not part of the subtree."""

    __slots__ = ("uid", "type")

    def __init__(self, uid: int, type: Term):
        self.uid = uid
        self.type = type
        self.bound = 0
        self.flags = HAS_META
        self._hash = hash(("meta", uid))

    def _same(self, other):
        return self.uid == other.uid


class Const(Term):
    __slots__ = ("name", "levels")

    def __init__(self, name: Name, levels: tuple = ()):
        self.name = name
        self.levels = tuple(levels)
        self.bound = 0
        flags = 0
        for level in self.levels:
            flags |= _level_flags(level)
        self.flags = flags
        self._hash = hash(("const", name, self.levels))

    def _same(self, other):
        return self.name == other.name and self.levels == other.levels


class Sort(Term):
    __slots__ = ("level",)

    def __init__(self, level: Level):
        self.level = level
        self.bound = 0
        self.flags = _level_flags(level)
        self._hash = hash(("sort", level))

    def _same(self, other):
        return self.level == other.level


class App(Term):
    __slots__ = ("fn", "arg")

    def __init__(self, fn: Term, arg: Term):
        self.fn = fn
        self.arg = arg
        self.bound = max(fn.bound, arg.bound)
        self.flags = fn.flags | arg.flags
        self._hash = hash(("app", fn._hash, arg._hash))

    def _same(self, other):
        return self.fn == other.fn and self.arg == other.arg


class Binder(Term):
    """Common shape of lambda and pi; the binder name only matters for printing."""

    __slots__ = ("info", "name", "domain", "body")

    def __init__(self, info: BinderInfo, name: str, domain: Term, body: Term):
        self.info = info
        self.name = name
        self.domain = domain
        self.body = body
        self.bound = max(domain.bound, body.bound - 1 if body.bound > 0 else 0)
        self.flags = domain.flags | body.flags
        self._hash = hash((self._tag, info, domain._hash, body._hash))

    def _same(self, other):
        return self.info == other.info and self.domain == other.domain and self.body == other.body

    def rebuild(self, domain: Term, body: Term) -> "Binder":
        if domain is self.domain and body is self.body:
            return self
        return type(self)(self.info, self.name, domain, body)


class Lambda(Binder):
    __slots__ = ()
    _tag = "lambda"


class Pi(Binder):
    __slots__ = ()
    _tag = "pi"


# Constructors


def mk_bvar(idx: int) -> BVar:
    return BVar(idx)


def mk_const(name: Name, levels=()) -> Const:
    return Const(name, levels)


def mk_sort(level: Level) -> Sort:
    return Sort(level)


PROP = Sort(lvl.ZERO)
TYPE0 = Sort(lvl.ONE)


def mk_app(fn: Term, arg: Term) -> App:
    return App(fn, arg)


def mk_app_n(fn: Term, args) -> Term:
    for arg in args:
        fn = App(fn, arg)
    return fn


def mk_lambda(domain: Term, body: Term, name: str = "x", info: BinderInfo = BinderInfo.EXPLICIT) -> Lambda:
    return Lambda(info, name, domain, body)


def mk_pi(domain: Term, body: Term, name: str = "x", info: BinderInfo = BinderInfo.EXPLICIT) -> Pi:
    return Pi(info, name, domain, body)


def mk_arrow(domain: Term, codomain: Term) -> Pi:
    """Non-dependent function type; ``codomain`` must be closed."""
    return Pi(BinderInfo.EXPLICIT, "a", domain, codomain)


def mk_local(type: Term, name: str = "x", info: BinderInfo = BinderInfo.EXPLICIT) -> FVar:
    return FVar(fresh_id(), name, type, info)


def mk_meta(ctx, type: Term) -> Term:
    """Fresh ``?m ℓ₁ … ℓₙ`` with ``?m : Π ctx, type``."""
    meta = Meta(fresh_id(), abstract_pi(ctx, type))
    return mk_app_n(meta, ctx)


def mk_meta_unknown_type(ctx) -> Term:
    """Hole whose type is itself a hole ``?mₜ ℓ̄ : Sort ?u``."""
    type_hole = mk_meta(ctx, Sort(lvl.mk_level_meta()))
    return mk_meta(ctx, type_hole)


# Spines


def get_app_fn(t: Term) -> Term:
    while type(t) is App:
        t = t.fn
    return t


def get_app_args(t: Term) -> list:
    args = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return args


def get_app_fn_args(t: Term):
    args = []
    while type(t) is App:
        args.append(t.arg)
        t = t.fn
    args.reverse()
    return t, args


def is_meta_app(t: Term) -> bool:
    return type(get_app_fn(t)) is Meta


# Core traversals


def instantiate_rev(t: Term, subst) -> Term:
    """Replace dangling index i by ``subst[n-1-i]`` (i < n), lower the rest by n.

    Every element of ``subst`` must be closed.
    """
    n = len(subst)
    if n == 0 or t.bound == 0:
        return t
    stats = STATS

    def go(e: Term, off: int) -> Term:
        if stats.enabled:
            stats.visits += 1
        if e.bound <= off:
            return e
        cls = type(e)
        if cls is BVar:
            i = e.idx - off
            if i < n:
                return subst[n - 1 - i]
            return BVar(e.idx - n)
        if cls is App:
            fn = go(e.fn, off)
            arg = go(e.arg, off)
            if fn is e.fn and arg is e.arg:
                return e
            return App(fn, arg)
        if cls is Lambda or cls is Pi:
            return e.rebuild(go(e.domain, off), go(e.body, off + 1))
        return e

    return go(t, 0)


def instantiate(t: Term, s: Term) -> Term:
    return instantiate_rev(t, (s,))


def instantiate_many(t: Term, values) -> Term:
    """Index 0 gets ``values[0]``; counterpart of ``instantiate_rev``."""
    return instantiate_rev(t, tuple(reversed(values)))


def abstract_many(locals_, t: Term) -> Term:
    """Replace ``locals_[i]`` by the index that makes the last local index 0."""
    n = len(locals_)
    if n == 0 or (not t.flags & HAS_FVAR and t.bound == 0):
        return t
    positions = {local.uid: i for i, local in enumerate(locals_)}
    stats = STATS

    def go(e: Term, off: int) -> Term:
        if stats.enabled:
            stats.visits += 1
        if not e.flags & HAS_FVAR and e.bound <= off:
            return e
        cls = type(e)
        if cls is FVar:
            i = positions.get(e.uid)
            if i is None:
                return e
            return BVar(off + n - 1 - i)
        if cls is BVar:
            return BVar(e.idx + n)
        if cls is App:
            fn = go(e.fn, off)
            arg = go(e.arg, off)
            if fn is e.fn and arg is e.arg:
                return e
            return App(fn, arg)
        if cls is Lambda or cls is Pi:
            return e.rebuild(go(e.domain, off), go(e.body, off + 1))
        return e

    return go(t, 0)


def abstract(local: FVar, t: Term) -> Term:
    return abstract_many((local,), t)


def _abstract_binders(cls, locals_, t: Term) -> Term:
    locals_ = list(locals_)
    body = abstract_many(locals_, t)
    for i in range(len(locals_) - 1, -1, -1):
        local = locals_[i]
        domain = abstract_many(locals_[:i], local.type)
        body = cls(local.info, local.name, domain, body)
    return body


def abstract_lambda(locals_, t: Term) -> Term:
    return _abstract_binders(Lambda, locals_, t)


def abstract_pi(locals_, t: Term) -> Term:
    return _abstract_binders(Pi, locals_, t)


def subst_fvar(t: Term, local: FVar, s: Term) -> Term:
    """Replace the free variable ``local`` by the closed term ``s``."""
    if not t.flags & HAS_FVAR:
        return t
    uid = local.uid

    def go(e: Term) -> Term:
        if not e.flags & HAS_FVAR:
            return e
        cls = type(e)
        if cls is FVar:
            return s if e.uid == uid else e
        if cls is App:
            fn = go(e.fn)
            arg = go(e.arg)
            if fn is e.fn and arg is e.arg:
                return e
            return App(fn, arg)
        if cls is Lambda or cls is Pi:
            return e.rebuild(go(e.domain), go(e.body))
        return e

    return go(t)


def subst_meta(t: Term, uid: int, s: Term) -> Term:
    """Replace metavariable ``uid`` by the closed term ``s`` (no β)."""
    if not t.flags & HAS_META:
        return t
    stats = STATS

    def go(e: Term) -> Term:
        if stats.enabled:
            stats.visits += 1
        if not e.flags & HAS_META:
            return e
        cls = type(e)
        if cls is Meta:
            return s if e.uid == uid else e
        if cls is App:
            fn = go(e.fn)
            arg = go(e.arg)
            if fn is e.fn and arg is e.arg:
                return e
            return App(fn, arg)
        if cls is Lambda or cls is Pi:
            return e.rebuild(go(e.domain), go(e.body))
        return e

    return go(t)


def head_beta(t: Term) -> Term:
    fn, args = get_app_fn_args(t)
    if type(fn) is not Lambda or not args:
        return t
    return beta(fn, args)


def beta(fn: Term, args) -> Term:
    """Apply ``fn`` to ``args``, contracting as many leading lambdas as possible."""
    consumed = 0
    body = fn
    while type(body) is Lambda and consumed < len(args):
        body = body.body
        consumed += 1
    body = instantiate_rev(body, tuple(args[:consumed]))
    result = mk_app_n(body, args[consumed:])
    if consumed and type(body) is Lambda and consumed < len(args):
        return head_beta(result)
    return result


def instantiate_metas(t: Term, lookup) -> Term:
    """Replace metavariables for which ``lookup(uid)`` returns a value.

    Meta-headed applications are β-reduced after replacement. ``lookup``
    must return fully instantiated closed values.
    """
    if not t.flags & HAS_META:
        return t

    def go(e: Term) -> Term:
        if not e.flags & HAS_META:
            return e
        cls = type(e)
        if cls is Meta:
            value = lookup(e.uid)
            return e if value is None else value
        if cls is App:
            head, args = get_app_fn_args(e)
            if type(head) is Meta:
                value = lookup(head.uid)
                new_args = [go(a) for a in args]
                if value is not None:
                    return beta(value, new_args)
                if all(a is b for a, b in zip(new_args, args)):
                    return e
                return mk_app_n(head, new_args)
            fn = go(e.fn)
            arg = go(e.arg)
            if fn is e.fn and arg is e.arg:
                return e
            return App(fn, arg)
        if cls is Lambda or cls is Pi:
            return e.rebuild(go(e.domain), go(e.body))
        return e

    return go(t)


def replace_levels(t: Term, fn, mask: int) -> Term:
    """Rewrite every level inside sorts and constants whose node has ``mask`` set."""
    if not t.flags & mask:
        return t

    def go(e: Term) -> Term:
        if not e.flags & mask:
            return e
        cls = type(e)
        if cls is Sort:
            new = lvl.replace(e.level, fn)
            return e if new is e.level else Sort(new)
        if cls is Const:
            levels = tuple(lvl.replace(l, fn) for l in e.levels)
            return e if levels == e.levels else Const(e.name, levels)
        if cls is App:
            f = go(e.fn)
            a = go(e.arg)
            if f is e.fn and a is e.arg:
                return e
            return App(f, a)
        if cls is Lambda or cls is Pi:
            return e.rebuild(go(e.domain), go(e.body))
        return e

    return go(t)


def instantiate_level_params(t: Term, params, levels) -> Term:
    if not params:
        return t
    mapping = dict(zip(params, levels))

    def fn(level):
        if isinstance(level, lvl.LevelParam):
            return mapping.get(level.name)
        return None

    return replace_levels(t, fn, HAS_LPARAM)


def instantiate_level_metas(t: Term, lookup) -> Term:
    def fn(level):
        if isinstance(level, lvl.LevelMeta):
            return lookup(level.uid)
        return None

    return replace_levels(t, fn, HAS_LMETA)


# Queries


def occurs_meta(uid: int, t: Term) -> bool:
    if not t.flags & HAS_META:
        return False
    cls = type(t)
    if cls is Meta:
        return t.uid == uid
    if cls is App:
        return occurs_meta(uid, t.fn) or occurs_meta(uid, t.arg)
    if cls is Lambda or cls is Pi:
        return occurs_meta(uid, t.domain) or occurs_meta(uid, t.body)
    return False


def collect_metas(t: Term, out: list) -> list:
    """Metavariables of ``t`` in order of first appearance."""
    if not t.flags & HAS_META:
        return out
    cls = type(t)
    if cls is Meta:
        if all(m.uid != t.uid for m in out):
            out.append(t)
    elif cls is App:
        collect_metas(t.fn, out)
        collect_metas(t.arg, out)
    elif cls is Lambda or cls is Pi:
        collect_metas(t.domain, out)
        collect_metas(t.body, out)
    return out


def collect_level_metas(t: Term, out: list) -> list:
    if not t.flags & HAS_LMETA:
        return out
    cls = type(t)
    if cls is Sort:
        lvl.collect_metas(t.level, out)
    elif cls is Const:
        for level in t.levels:
            lvl.collect_metas(level, out)
    elif cls is App:
        collect_level_metas(t.fn, out)
        collect_level_metas(t.arg, out)
    elif cls is Lambda or cls is Pi:
        collect_level_metas(t.domain, out)
        collect_level_metas(t.body, out)
    return out


def free_vars_within(t: Term, allowed: set) -> bool:
    """True when every free variable of ``t`` has its uid in ``allowed``."""
    if not t.flags & HAS_FVAR:
        return True
    cls = type(t)
    if cls is FVar:
        return t.uid in allowed
    if cls is App:
        return free_vars_within(t.fn, allowed) and free_vars_within(t.arg, allowed)
    if cls is Lambda or cls is Pi:
        return free_vars_within(t.domain, allowed) and free_vars_within(t.body, allowed)
    return True


def occurs_const(name: Name, t: Term) -> bool:
    cls = type(t)
    if cls is Const:
        return t.name == name
    if cls is App:
        return occurs_const(name, t.fn) or occurs_const(name, t.arg)
    if cls is Lambda or cls is Pi:
        return occurs_const(name, t.domain) or occurs_const(name, t.body)
    return False


def collect_consts(t: Term, out: set) -> set:
    cls = type(t)
    if cls is Const:
        out.add(t.name)
    elif cls is App:
        collect_consts(t.fn, out)
        collect_consts(t.arg, out)
    elif cls is Lambda or cls is Pi:
        collect_consts(t.domain, out)
        collect_consts(t.body, out)
    return out


def size(t: Term) -> int:
    cls = type(t)
    if cls is App:
        return 1 + size(t.fn) + size(t.arg)
    if cls is Lambda or cls is Pi:
        return 1 + size(t.domain) + size(t.body)
    return 1
