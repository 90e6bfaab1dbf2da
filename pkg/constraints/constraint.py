from dataclasses import dataclass, field
from enum import IntEnum

from constraints.justification import Justification, join, join_all
from kernel import level as lvl
from kernel.reduction import Transparency
from kernel.term import (
    HAS_LMETA,
    HAS_META,
    get_app_args,
    get_app_fn,
    instantiate_level_metas,
    instantiate_metas,
)
from solver.persistent import PersistentMap


class ConstraintCategory(IntEnum):
    """Solver priority; lower values are processed first."""

    PATTERN = 0
    READY = 1
    REGULAR = 2
    DELTA = 3
    QUASI_PATTERN = 4
    FLEX_RIGID = 5
    RECURSOR = 6
    POSTPONED = 7
    FLEX_FLEX = 8

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    ConstraintCategory.PATTERN: "pattern",
    ConstraintCategory.READY: "ready",
    ConstraintCategory.REGULAR: "regular",
    ConstraintCategory.DELTA: "delta",
    ConstraintCategory.QUASI_PATTERN: "quasiPattern",
    ConstraintCategory.FLEX_RIGID: "flexRigid",
    ConstraintCategory.RECURSOR: "recursor",
    ConstraintCategory.POSTPONED: "postponed",
    ConstraintCategory.FLEX_FLEX: "flexFlex",
}


@dataclass(frozen=True, eq=False)
class UnifConstraint:
    lhs: object
    rhs: object
    j: Justification
    transparency: Transparency = Transparency.DEFAULT  # how far the simplifier may unfold

    def with_justification(self, j: Justification) -> "UnifConstraint":
        return UnifConstraint(self.lhs, self.rhs, join(self.j, j), self.transparency)

    def with_terms(self, lhs, rhs, j: Justification | None = None) -> "UnifConstraint":
        return UnifConstraint(lhs, rhs, self.j if j is None else j, self.transparency)

    def swap(self) -> "UnifConstraint":
        return UnifConstraint(self.rhs, self.lhs, self.j, self.transparency)

    def __repr__(self):
        return f"<{self.lhs} =?= {self.rhs}>"


@dataclass(frozen=True, eq=False)
class LevelConstraint:
    lhs: lvl.Level
    rhs: lvl.Level
    j: Justification

    def with_justification(self, j: Justification) -> "LevelConstraint":
        return LevelConstraint(self.lhs, self.rhs, join(self.j, j))

    def __repr__(self):
        return f"<{self.lhs} =?= {self.rhs}>"


@dataclass(frozen=True, eq=False)
class Alternative:
    """One way of satisfying a choice.

    ``build`` is either a sequence of constraints or a thunk returning one;
    a thunk may raise a JustifiedError, which the solver treats as the
    failure of this alternative.
    """

    build: object
    label: str = ""

    def materialize(self) -> list:
        if callable(self.build):
            return list(self.build())
        return list(self.build)


@dataclass(frozen=True, eq=False)
class ChoiceConstraint:
    meta_app: object  # ?m ℓ̄
    type: object
    chooser: object  # (meta_app, type, substitution) -> iterator of Alternative
    ondemand: bool
    j: Justification
    kind: str = "choice"
    label: str = ""
    span: object = field(default=None)

    @property
    def meta(self):
        return get_app_fn(self.meta_app)

    @property
    def locals(self) -> list:
        return get_app_args(self.meta_app)

    def with_justification(self, j: Justification) -> "ChoiceConstraint":
        return ChoiceConstraint(
            self.meta_app, self.type, self.chooser, self.ondemand, join(self.j, j),
            self.kind, self.label, self.span,
        )

    def with_type(self, type, j: Justification | None) -> "ChoiceConstraint":
        return ChoiceConstraint(
            self.meta_app, type, self.chooser, self.ondemand, join(self.j, j),
            self.kind, self.label, self.span,
        )

    def __repr__(self):
        return f"<choice {self.kind} {self.meta_app} : {self.type}>"


class Substitution:
    """Assignments of metavariables and level metavariables, each with its justification."""

    __slots__ = ("metas", "levels")

    def __init__(self, metas: PersistentMap | None = None, levels: PersistentMap | None = None):
        self.metas = metas if metas is not None else PersistentMap()
        self.levels = levels if levels is not None else PersistentMap()

    def assign(self, uid: int, value, j: Justification) -> "Substitution":
        return Substitution(self.metas.set(uid, (value, j)), self.levels)

    def assign_level(self, uid: int, level, j: Justification) -> "Substitution":
        return Substitution(self.metas, self.levels.set(uid, (level, j)))

    def is_assigned(self, uid: int) -> bool:
        return uid in self.metas

    def is_level_assigned(self, uid: int) -> bool:
        return uid in self.levels

    def lookup(self, uid: int):
        return self.metas.get(uid)

    def __eq__(self, other):
        if not isinstance(other, Substitution):
            return NotImplemented
        return self.metas == other.metas and self.levels == other.levels

    def __hash__(self):
        return hash((id(self.metas), id(self.levels)))

    def instantiate_level(self, level):
        """Resolve assigned level metavariables; returns (level, justification or None)."""
        used = []

        def fn(l):
            if isinstance(l, lvl.LevelMeta):
                entry = self.levels.get(l.uid)
                if entry is not None:
                    value, j = entry
                    used.append(j)
                    inner, inner_j = self.instantiate_level(value)
                    if inner_j is not None:
                        used.append(inner_j)
                    return inner
            return None

        if not lvl.has_meta(level):
            return level, None
        result = lvl.replace(level, fn)
        return result, join_all(used)

    def instantiate(self, t):
        """Fully instantiate ``t``; returns (term, joined justification of used assignments)."""
        if not t.flags & (HAS_META | HAS_LMETA):
            return t, None
        used = []
        cache = {}

        def lookup(uid):
            if uid in cache:
                return cache[uid]
            entry = self.metas.get(uid)
            if entry is None:
                cache[uid] = None
                return None
            value, j = entry
            used.append(j)
            value = instantiate_metas(value, lookup)
            cache[uid] = value
            return value

        def level_lookup(uid):
            entry = self.levels.get(uid)
            if entry is None:
                return None
            value, j = entry
            used.append(j)
            inner, inner_j = self.instantiate_level(value)
            if inner_j is not None:
                used.append(inner_j)
            return inner

        result = instantiate_metas(t, lookup) if self.metas else t
        if self.levels:
            result = instantiate_level_metas(result, level_lookup)
        return result, join_all(used)

    def instantiate_term(self, t):
        return self.instantiate(t)[0]

    def items(self) -> list:
        return self.metas.items()
