from dataclasses import dataclass, field, replace
from enum import Enum

from kernel.errors import DuplicateDeclaration, UnknownConstant
from kernel.name import Name


class ReducibilityHint(Enum):
    REDUCIBLE = "reducible"
    SEMIREDUCIBLE = "semireducible"
    IRREDUCIBLE = "irreducible"


@dataclass(frozen=True)
class Axiom:
    name: Name
    univ_params: tuple
    type: object


@dataclass(frozen=True)
class Definition:
    name: Name
    univ_params: tuple
    type: object
    value: object
    hint: ReducibilityHint = ReducibilityHint.SEMIREDUCIBLE
    depth: int = 0


@dataclass(frozen=True)
class Inductive:
    name: Name
    univ_params: tuple
    num_params: int
    type: object
    constructors: tuple  # of (Name, Term)
    num_indices: int = 0


@dataclass(frozen=True)
class Constructor:
    name: Name
    univ_params: tuple
    type: object
    inductive: Name
    index: int
    num_params: int
    num_fields: int


@dataclass(frozen=True)
class Recursor:
    """Generated eliminator ``C.rec``.

    Argument order: params, motive, minor premises, indices, major premise.
    """

    name: Name
    univ_params: tuple
    type: object
    inductive: Name
    num_params: int
    num_indices: int
    num_minors: int
    large_elim: bool

    @property
    def major_index(self) -> int:
        return self.num_params + 1 + self.num_minors + self.num_indices

    @property
    def num_args(self) -> int:
        return self.major_index + 1


@dataclass(frozen=True)
class InstanceDb:
    """Class head → instance constants, in declaration order."""

    instances: dict = field(default_factory=dict)

    def add(self, cls: Name, inst: Name) -> "InstanceDb":
        instances = dict(self.instances)
        instances[cls] = self.instances.get(cls, ()) + (inst,)
        return InstanceDb(instances)

    def of(self, cls: Name) -> tuple:
        return self.instances.get(cls, ())


@dataclass(frozen=True)
class CoercionDb:
    by_pair: dict = field(default_factory=dict)  # (source head, target head) → coercion
    by_source: dict = field(default_factory=dict)  # source head → coercions, in order
    by_target: dict = field(default_factory=dict)  # target head → coercions, in order

    def add(self, source: Name, target: Name, coercion: Name) -> "CoercionDb":
        by_pair = dict(self.by_pair)
        by_pair[(source, target)] = coercion
        by_source = dict(self.by_source)
        by_source[source] = self.by_source.get(source, ()) + (coercion,)
        by_target = dict(self.by_target)
        by_target[target] = self.by_target.get(target, ()) + (coercion,)
        return CoercionDb(by_pair, by_source, by_target)

    def find(self, source: Name, target: Name):
        return self.by_pair.get((source, target))

    def from_source(self, source: Name) -> tuple:
        return self.by_source.get(source, ())

    def into_target(self, target: Name) -> tuple:
        return self.by_target.get(target, ())


@dataclass(frozen=True)
class Environment:
    """Committed declarations plus attribute tables; every update returns a new value."""

    declarations: dict = field(default_factory=dict)
    order: tuple = ()
    classes: frozenset = frozenset()
    instance_db: InstanceDb = field(default_factory=InstanceDb)
    coercion_db: CoercionDb = field(default_factory=CoercionDb)
    aliases: dict = field(default_factory=dict)
    projections: frozenset = frozenset()

    def find(self, name: Name):
        return self.declarations.get(name)

    def get(self, name: Name):
        decl = self.declarations.get(name)
        if decl is None:
            raise UnknownConstant(name)
        return decl

    def __contains__(self, name: Name) -> bool:
        return name in self.declarations

    def add(self, decl) -> "Environment":
        if decl.name in self.declarations:
            raise DuplicateDeclaration(decl.name)
        declarations = dict(self.declarations)
        declarations[decl.name] = decl
        return replace(self, declarations=declarations, order=self.order + (decl.name,))

    def with_hint(self, name: Name, hint: ReducibilityHint) -> "Environment":
        decl = self.get(name)
        if not isinstance(decl, Definition):
            raise UnknownConstant(name)
        declarations = dict(self.declarations)
        declarations[name] = replace(decl, hint=hint)
        return replace(self, declarations=declarations)

    def add_class(self, name: Name) -> "Environment":
        return replace(self, classes=self.classes | {name})

    def add_instance(self, cls: Name, inst: Name) -> "Environment":
        return replace(self, instance_db=self.instance_db.add(cls, inst))

    def add_coercion(self, source: Name, target: Name, coercion: Name) -> "Environment":
        return replace(self, coercion_db=self.coercion_db.add(source, target, coercion))

    def add_alias(self, alias: Name, target: Name) -> "Environment":
        existing = self.aliases.get(alias, ())
        if target in existing:
            return self
        aliases = dict(self.aliases)
        aliases[alias] = existing + (target,)
        return replace(self, aliases=aliases)

    def mark_projection(self, name: Name) -> "Environment":
        return replace(self, projections=self.projections | {name})

    def is_class(self, name: Name) -> bool:
        return name in self.classes

    def is_projection(self, name: Name) -> bool:
        return name in self.projections

    def hint_of(self, name: Name):
        decl = self.declarations.get(name)
        if isinstance(decl, Definition):
            return decl.hint
        return None

    def is_reducible(self, name: Name) -> bool:
        return self.hint_of(name) == ReducibilityHint.REDUCIBLE

    def depth(self, name: Name) -> int:
        decl = self.declarations.get(name)
        if isinstance(decl, Definition):
            return decl.depth
        return 0

    def names_with_prefix(self, prefix: Name) -> list:
        return [n for n in self.order if n.has_prefix(prefix)]
