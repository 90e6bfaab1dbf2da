"""Justifications record why a constraint exists.

They form a DAG with shared substructure: ``Asserted`` leaves point back at
source, ``Assumption`` leaves stand for case-split choices, ``Join`` unions
the two.
"""
from dataclasses import dataclass

from kernel.fresh import fresh_id


@dataclass(frozen=True)
class Span:
    start: int
    end: int
    line: int = 0
    column: int = 0

    def contains(self, other: "Span") -> bool:
        return self.start <= other.start and other.end <= self.end

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Origin:
    span: Span | None
    description: str


class Justification:
    __slots__ = ("_assumptions",)

    def assumptions(self) -> frozenset:
        cached = self._assumptions
        if cached is None:
            cached = self._compute()
            self._assumptions = cached
        return cached


class Asserted(Justification):
    __slots__ = ("origin",)

    def __init__(self, origin: Origin):
        self.origin = origin
        self._assumptions = frozenset()

    def _compute(self):
        return frozenset()

    def __repr__(self):
        return f"Asserted({self.origin.description!r})"


class Assumption(Justification):
    __slots__ = ("uid",)

    def __init__(self, uid: int | None = None):
        self.uid = fresh_id() if uid is None else uid
        self._assumptions = frozenset((self.uid,))

    def _compute(self):
        return frozenset((self.uid,))

    def __repr__(self):
        return f"Assumption({self.uid})"


class Join(Justification):
    __slots__ = ("left", "right")

    def __init__(self, left: Justification, right: Justification):
        self.left = left
        self.right = right
        self._assumptions = None

    def _compute(self):
        # iterative walk; join chains can be long
        found = set()
        seen = set()
        stack = [self]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            if type(node) is Join:
                if node._assumptions is not None:
                    found |= node._assumptions
                    continue
                stack.append(node.left)
                stack.append(node.right)
            elif type(node) is Assumption:
                found.add(node.uid)
        return frozenset(found)

    def __repr__(self):
        return f"Join({self.left!r}, {self.right!r})"


def join(left: Justification | None, right: Justification | None) -> Justification | None:
    if left is None or left is right:
        return right
    if right is None:
        return left
    return Join(left, right)


def join_all(justifications) -> Justification | None:
    result = None
    for j in justifications:
        result = join(result, j)
    return result


def depends_on(j: Justification, assumption) -> bool:
    uid = assumption.uid if isinstance(assumption, Assumption) else assumption
    return uid in j.assumptions()


def asserted_origins(j: Justification) -> list:
    """Asserted origins reachable from ``j``, each reported once."""
    origins = []
    seen = set()
    stack = [j]
    while stack:
        node = stack.pop()
        if node is None or id(node) in seen:
            continue
        seen.add(id(node))
        if type(node) is Join:
            stack.append(node.right)
            stack.append(node.left)
        elif type(node) is Asserted and node.origin not in origins:
            origins.append(node.origin)
    return origins


def asserted(description: str, span: Span | None = None) -> Asserted:
    return Asserted(Origin(span, description))
