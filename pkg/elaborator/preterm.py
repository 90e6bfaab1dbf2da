"""Parser output: term skeletons with holes, unresolved names and missing implicits."""
from dataclasses import dataclass, field

from constraints.justification import Span
from kernel.name import Name
from kernel.term import BinderInfo


# Universe level syntax inside `.{...}`


@dataclass(frozen=True)
class LevelNum:
    value: int


@dataclass(frozen=True)
class LevelName:
    name: Name


@dataclass(frozen=True)
class LevelAdd:
    base: object
    offset: int


@dataclass(frozen=True)
class LevelMaxSpec:
    lhs: object
    rhs: object


# Terms


@dataclass(frozen=True)
class Preterm:
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class Ident(Preterm):
    name: Name
    explicit: bool = False


@dataclass(frozen=True)
class PApp(Preterm):
    fn: Preterm
    arg: Preterm


@dataclass(frozen=True)
class PLambda(Preterm):
    name: str
    domain: Preterm | None
    body: Preterm
    info: BinderInfo = BinderInfo.EXPLICIT


@dataclass(frozen=True)
class PPi(Preterm):
    name: str
    domain: Preterm
    body: Preterm
    info: BinderInfo = BinderInfo.EXPLICIT


@dataclass(frozen=True)
class Placeholder(Preterm):
    pass


@dataclass(frozen=True)
class SortLit(Preterm):
    kind: str  # "Prop", "Type" or "Sort"
    level: object = None


@dataclass(frozen=True)
class Annotated(Preterm):
    term: Preterm
    type: Preterm


@dataclass(frozen=True)
class Numeral(Preterm):
    value: int


ARROW_BINDER = "_"


def is_arrow(p) -> bool:
    return isinstance(p, PPi) and p.name == ARROW_BINDER


def app_spine(p):
    """Head and arguments of nested applications."""
    args = []
    while isinstance(p, PApp):
        args.append(p.arg)
        p = p.fn
    args.reverse()
    return p, args


@dataclass(frozen=True)
class Binder:
    name: str
    type: Preterm | None
    info: BinderInfo = BinderInfo.EXPLICIT
    span: Span | None = field(default=None, compare=False, kw_only=True)
