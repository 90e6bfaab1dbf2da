"""Surface commands produced by the parser, processed in file order."""
from dataclasses import dataclass, field

from constraints.justification import Span
from kernel.name import Name


@dataclass(frozen=True)
class Command:
    span: Span | None = field(default=None, compare=False, kw_only=True)


@dataclass(frozen=True)
class DefinitionCmd(Command):
    name: Name
    binders: tuple
    type: object
    value: object
    attributes: tuple = ()
    keyword: str = "definition"


@dataclass(frozen=True)
class AxiomCmd(Command):
    name: Name
    binders: tuple
    type: object
    keyword: str = "axiom"


@dataclass(frozen=True)
class ConstructorSpec(Command):
    name: str
    binders: tuple
    type: object = None


@dataclass(frozen=True)
class InductiveCmd(Command):
    name: Name
    binders: tuple
    type: object
    constructors: tuple


@dataclass(frozen=True)
class StructureCmd(Command):
    name: Name
    binders: tuple
    type: object
    fields: tuple  # of Binder
    attributes: tuple = ()


@dataclass(frozen=True)
class AttributeCmd(Command):
    name: Name
    attributes: tuple


@dataclass(frozen=True)
class NamespaceCmd(Command):
    name: Name


@dataclass(frozen=True)
class EndCmd(Command):
    name: Name


@dataclass(frozen=True)
class OpenCmd(Command):
    names: tuple


@dataclass(frozen=True)
class CheckCmd(Command):
    term: object


@dataclass(frozen=True)
class EvalCmd(Command):
    term: object


@dataclass(frozen=True)
class ExampleCmd(Command):
    binders: tuple
    type: object
    value: object
