from constraints.constraint import ConstraintCategory
from kernel.environment import ReducibilityHint
from kernel.reduction import StuckKind
from kernel.term import Const, FVar, Meta, free_vars_within, get_app_fn, get_app_fn_args, occurs_meta


def pattern_args(args):
    """Uids of ``args`` when they are pairwise distinct free variables, else None."""
    uids = []
    for a in args:
        if type(a) is not FVar or a.uid in uids:
            return None
        uids.append(a.uid)
    return uids


def is_pattern(lhs, rhs) -> bool:
    """``?m ℓ̄ ≐ t`` with distinct locals ℓ̄ covering t's free variables and ?m not in t."""
    head, args = get_app_fn_args(lhs)
    if type(head) is not Meta:
        return False
    uids = pattern_args(args)
    if uids is None:
        return False
    return free_vars_within(rhs, set(uids)) and not occurs_meta(head.uid, rhs)


def is_flex(t) -> bool:
    return type(get_app_fn(t)) is Meta


def orient(c):
    """Put the pattern or flex side of ``c`` on the left."""
    if is_pattern(c.lhs, c.rhs):
        return c
    if is_pattern(c.rhs, c.lhs):
        return c.swap()
    if not is_flex(c.lhs) and is_flex(c.rhs):
        return c.swap()
    return c


def _stuck_recursor(tc, t) -> bool:
    reason = tc.is_stuck(t)
    return reason is not None and reason.kind == StuckKind.RECURSOR


def classify(c, tc) -> ConstraintCategory:
    """Category of a residual unification constraint produced by ``simp``."""
    lhs, rhs = c.lhs, c.rhs
    if is_pattern(lhs, rhs) or is_pattern(rhs, lhs):
        return ConstraintCategory.PATTERN
    lhs_flex, rhs_flex = is_flex(lhs), is_flex(rhs)
    if lhs_flex and rhs_flex:
        return ConstraintCategory.FLEX_FLEX
    if _stuck_recursor(tc, lhs) or _stuck_recursor(tc, rhs):
        return ConstraintCategory.RECURSOR
    if lhs_flex or rhs_flex:
        _, args = get_app_fn_args(lhs if lhs_flex else rhs)
        if all(type(a) is FVar for a in args):
            return ConstraintCategory.QUASI_PATTERN
        return ConstraintCategory.FLEX_RIGID
    lhs_head, rhs_head = get_app_fn(lhs), get_app_fn(rhs)
    if (
        type(lhs_head) is Const
        and type(rhs_head) is Const
        and lhs_head.name == rhs_head.name
        and tc.env.hint_of(lhs_head.name) == ReducibilityHint.REDUCIBLE
    ):
        return ConstraintCategory.DELTA
    raise ValueError(f"constraint is not a simplification residue: {c!r}")
