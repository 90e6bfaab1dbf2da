from dataclasses import dataclass

from kernel.fresh import fresh_id
from kernel.name import Name


class Level:
    __slots__ = ()

    def __str__(self):
        return level_to_str(self)


@dataclass(frozen=True, slots=True)
class LevelZero(Level):
    pass


@dataclass(frozen=True, slots=True)
class LevelSucc(Level):
    level: Level


@dataclass(frozen=True, slots=True)
class LevelMax(Level):
    lhs: Level
    rhs: Level


@dataclass(frozen=True, slots=True)
class LevelParam(Level):
    name: Name


@dataclass(frozen=True, slots=True)
class LevelMeta(Level):
    uid: int


ZERO = LevelZero()
ONE = LevelSucc(ZERO)


def mk_succ(level: Level) -> Level:
    return LevelSucc(level)


def mk_max(lhs: Level, rhs: Level) -> Level:
    return LevelMax(lhs, rhs)


def mk_level_meta() -> LevelMeta:
    return LevelMeta(fresh_id())


def of_int(n: int) -> Level:
    level = ZERO
    for _ in range(n):
        level = LevelSucc(level)
    return level


def to_offset(level: Level):
    """Split ``succ^k base`` into (base, k)."""
    k = 0
    while isinstance(level, LevelSucc):
        level = level.level
        k += 1
    return level, k


def _with_offset(base: Level, k: int) -> Level:
    for _ in range(k):
        base = LevelSucc(base)
    return base


def _collect(level: Level, k: int, out: dict):
    if isinstance(level, LevelSucc):
        _collect(level.level, k + 1, out)
    elif isinstance(level, LevelMax):
        _collect(level.lhs, k, out)
        _collect(level.rhs, k, out)
    else:
        key = None if isinstance(level, LevelZero) else level
        if out.get(key, -1) < k:
            out[key] = k


def _sort_key(item):
    base = item[0]
    if isinstance(base, LevelParam):
        return (0, str(base.name), 0)
    return (1, "", base.uid)


def normalize(level: Level) -> Level:
    """Canonical form: a right-nested max of offsets over distinct bases.

    The constant offset comes first and is dropped when some other operand
    already dominates it.
    """
    out = {}
    _collect(level, 0, out)
    constant = out.pop(None, None)
    if constant is not None and any(k >= constant for k in out.values()):
        constant = None
    parts = [_with_offset(base, k) for base, k in sorted(out.items(), key=_sort_key)]
    if constant is not None:
        parts.insert(0, of_int(constant))
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = LevelMax(part, result)
    return result


def is_equivalent(lhs: Level, rhs: Level) -> bool:
    return lhs == rhs or normalize(lhs) == normalize(rhs)


def is_zero(level: Level) -> bool:
    return isinstance(normalize(level), LevelZero)


def has_meta(level: Level) -> bool:
    if isinstance(level, LevelMeta):
        return True
    if isinstance(level, LevelSucc):
        return has_meta(level.level)
    if isinstance(level, LevelMax):
        return has_meta(level.lhs) or has_meta(level.rhs)
    return False


def occurs_meta(uid: int, level: Level) -> bool:
    if isinstance(level, LevelMeta):
        return level.uid == uid
    if isinstance(level, LevelSucc):
        return occurs_meta(uid, level.level)
    if isinstance(level, LevelMax):
        return occurs_meta(uid, level.lhs) or occurs_meta(uid, level.rhs)
    return False


def collect_metas(level: Level, out: list):
    if isinstance(level, LevelMeta):
        if level not in out:
            out.append(level)
    elif isinstance(level, LevelSucc):
        collect_metas(level.level, out)
    elif isinstance(level, LevelMax):
        collect_metas(level.lhs, out)
        collect_metas(level.rhs, out)


def collect_params(level: Level, out: list):
    if isinstance(level, LevelParam):
        if level.name not in out:
            out.append(level.name)
    elif isinstance(level, LevelSucc):
        collect_params(level.level, out)
    elif isinstance(level, LevelMax):
        collect_params(level.lhs, out)
        collect_params(level.rhs, out)


def replace(level: Level, fn) -> Level:
    """Rebuild ``level`` bottom-up; ``fn`` returns a replacement or None."""
    new = fn(level)
    if new is not None:
        return new
    if isinstance(level, LevelSucc):
        inner = replace(level.level, fn)
        return level if inner is level.level else LevelSucc(inner)
    if isinstance(level, LevelMax):
        lhs = replace(level.lhs, fn)
        rhs = replace(level.rhs, fn)
        if lhs is level.lhs and rhs is level.rhs:
            return level
        return LevelMax(lhs, rhs)
    return level


def instantiate_params(level: Level, params: tuple, values: tuple) -> Level:
    if not params:
        return level
    mapping = dict(zip(params, values))

    def fn(l):
        if isinstance(l, LevelParam):
            return mapping.get(l.name)
        return None

    return replace(level, fn)


def level_to_str(level: Level) -> str:
    base, k = to_offset(level)
    if isinstance(base, LevelZero):
        return str(k)
    if isinstance(base, LevelParam):
        inner = str(base.name)
    elif isinstance(base, LevelMeta):
        inner = f"?u{base.uid}"
    else:
        inner = f"(max {level_to_str(base.lhs)} {level_to_str(base.rhs)})"
    return inner if k == 0 else f"{inner}+{k}"
