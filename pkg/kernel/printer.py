from kernel import level as lvl
from kernel.name import Name
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
    get_app_fn_args,
)

PREC_TOP = 0
PREC_ARROW = 1
PREC_EQ = 2
PREC_APP = 3
PREC_ATOM = 4

NAT_ZERO = Name(("nat", "zero"))
NAT_SUCC = Name(("nat", "succ"))
EQ = Name(("eq",))


class MetaNamer:
    """Numbers metavariables by first appearance: ?m_1, ?m_2, ..."""

    def __init__(self):
        self._names = {}

    def __call__(self, meta: Meta) -> str:
        if meta.uid not in self._names:
            self._names[meta.uid] = f"?m_{len(self._names) + 1}"
        return self._names[meta.uid]


def has_loose_bvar(t, idx: int) -> bool:
    if t.bound <= idx:
        return False
    cls = type(t)
    if cls is BVar:
        return t.idx == idx
    if cls is App:
        return has_loose_bvar(t.fn, idx) or has_loose_bvar(t.arg, idx)
    if cls is Lambda or cls is Pi:
        return has_loose_bvar(t.domain, idx) or has_loose_bvar(t.body, idx + 1)
    return False


def as_numeral(t):
    """Return k when ``t`` is ``nat.succ^k nat.zero``."""
    k = 0
    while True:
        if type(t) is Const and t.name == NAT_ZERO:
            return k
        if type(t) is App and type(t.fn) is Const and t.fn.name == NAT_SUCC:
            t = t.arg
            k += 1
            continue
        return None


def sort_to_str(level) -> str:
    level = lvl.normalize(level)
    if isinstance(level, lvl.LevelZero):
        return "Prop"
    if isinstance(level, lvl.LevelSucc):
        inner = level.level
        if isinstance(inner, lvl.LevelZero):
            return "Type"
        return "Type.{" + lvl.level_to_str(inner) + "}"
    return "Sort.{" + lvl.level_to_str(level) + "}"


class TermPrinter:
    def __init__(self, env=None, explicit: bool = False, meta_namer=None):
        self.env = env
        self.explicit = explicit
        self.meta_namer = meta_namer

    def show(self, t) -> str:
        return self._pp(t, [], PREC_TOP)

    def _meta_name(self, meta: Meta) -> str:
        if self.meta_namer is not None:
            return self.meta_namer(meta)
        return f"?m{meta.uid}"

    def _fresh(self, name: str, names: list) -> str:
        name = name or "x"
        while name in names:
            name = name + "'"
        return name

    def _paren(self, text: str, needed: bool) -> str:
        return f"({text})" if needed else text

    def _explicit_mask(self, head, nargs: int):
        """Which argument positions are explicit for a constant head."""
        if self.explicit or self.env is None or type(head) is not Const:
            return None
        decl = self.env.find(head.name)
        if decl is None:
            return None
        mask = []
        ty = decl.type
        while type(ty) is Pi and len(mask) < nargs:
            mask.append(ty.info == BinderInfo.EXPLICIT)
            ty = ty.body
        mask.extend([True] * (nargs - len(mask)))
        return mask

    def _pp(self, t, names: list, prec: int) -> str:
        cls = type(t)
        if cls is BVar:
            if t.idx < len(names):
                return names[len(names) - 1 - t.idx]
            return f"#{t.idx}"
        if cls is FVar:
            return t.name
        if cls is Meta:
            return self._meta_name(t)
        if cls is Sort:
            text = sort_to_str(t.level)
            return self._paren(text, "." in text and prec > PREC_APP)
        if cls is Const:
            k = as_numeral(t)
            if k is not None:
                return str(k)
            if self.explicit and self._has_implicit(t):
                return "@" + str(t.name)
            return str(t.name)
        if cls is App:
            return self._pp_app(t, names, prec)
        if cls is Lambda:
            return self._pp_binders(t, names, prec, "fun")
        if cls is Pi:
            if t.info == BinderInfo.EXPLICIT and not has_loose_bvar(t.body, 0):
                lhs = self._pp(t.domain, names, PREC_EQ)
                rhs = self._pp(t.body, names + ["_"], PREC_ARROW)
                return self._paren(f"{lhs} -> {rhs}", prec > PREC_ARROW)
            return self._pp_binders(t, names, prec, "Π")
        return repr(t)

    def _has_implicit(self, const) -> bool:
        if self.env is None:
            return False
        decl = self.env.find(const.name)
        ty = decl.type if decl is not None else None
        while type(ty) is Pi:
            if ty.info != BinderInfo.EXPLICIT:
                return True
            ty = ty.body
        return False

    def _pp_app(self, t, names, prec) -> str:
        k = as_numeral(t)
        if k is not None:
            return str(k)
        head, args = get_app_fn_args(t)
        mask = self._explicit_mask(head, len(args))
        if (
            mask is not None
            and type(head) is Const
            and head.name == EQ
            and len(args) == 3
        ):
            lhs = self._pp(args[1], names, PREC_APP)
            rhs = self._pp(args[2], names, PREC_APP)
            return self._paren(f"{lhs} = {rhs}", prec > PREC_EQ)
        shown = [a for i, a in enumerate(args) if mask is None or mask[i]]
        parts = [self._pp(head, names, PREC_APP)]
        parts.extend(self._pp(a, names, PREC_ATOM) for a in shown)
        if len(parts) == 1:
            return parts[0]
        return self._paren(" ".join(parts), prec > PREC_APP)

    def _pp_binders(self, t, names, prec, keyword) -> str:
        cls = type(t)
        groups = []
        names = list(names)
        while type(t) is cls:
            if cls is Pi and t.info == BinderInfo.EXPLICIT and not has_loose_bvar(t.body, 0) and groups:
                break
            binder = self._fresh(t.name, names)
            domain = self._pp(t.domain, names, PREC_TOP)
            if t.info == BinderInfo.IMPLICIT:
                groups.append(f"{{{binder} : {domain}}}")
            elif t.info == BinderInfo.INST_IMPLICIT:
                groups.append(f"[{binder} : {domain}]")
            else:
                groups.append(f"({binder} : {domain})")
            names.append(binder)
            t = t.body
        body = self._pp(t, names, PREC_TOP)
        return self._paren(f"{keyword} {' '.join(groups)}, {body}", prec > PREC_TOP)


def term_to_str(t, env=None, meta_namer=None, explicit: bool = False) -> str:
    return TermPrinter(env=env, explicit=explicit, meta_namer=meta_namer).show(t)
