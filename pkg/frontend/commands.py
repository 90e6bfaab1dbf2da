"""Processing of surface commands against a growing environment."""
import logging

import config
from elaborator.attributes import HINTS, apply_attribute
from elaborator.elaborate import Elaborator
from elaborator.errors import ElaborationError, UnknownIdentifier
from elaborator.preprocess import resolve_name
from frontend.syntax import (
    AttributeCmd,
    AxiomCmd,
    CheckCmd,
    DefinitionCmd,
    EndCmd,
    EvalCmd,
    ExampleCmd,
    InductiveCmd,
    NamespaceCmd,
    OpenCmd,
    StructureCmd,
)
from kernel.environment import Environment, ReducibilityHint
from kernel.printer import MetaNamer, term_to_str

logger = logging.getLogger(__name__)


class CommandProcessor:
    """Runs commands one at a time; ``env`` only changes when a command succeeds."""

    def __init__(self, env=None, out=None, max_steps=None, trace=None):
        self.env = env if env is not None else Environment()
        self.out = out
        self.max_steps = max_steps
        self.trace = trace
        self.namespaces = []

    @property
    def namespace(self):
        return self.namespaces[-1] if self.namespaces else None

    def _elaborator(self):
        return Elaborator(self.env, self.namespace, self.max_steps, self.trace)

    def _qualify(self, name):
        return self.namespace.join(name) if self.namespace is not None else name

    def _print(self, text):
        if self.out is not None:
            print(text, file=self.out)

    def _show(self, t):
        return term_to_str(t, self.env, MetaNamer())

    def process(self, cmd):
        handler = getattr(self, "_" + type(cmd).__name__)
        handler(cmd)

    # declarations

    def _DefinitionCmd(self, cmd: DefinitionCmd):
        name = self._qualify(cmd.name)
        hint = ReducibilityHint.SEMIREDUCIBLE
        for attribute in cmd.attributes:
            hint = HINTS.get(attribute, hint)
        env = self._elaborator().definition(name, cmd.binders, cmd.type, cmd.value, cmd.span, hint)
        self.env = self._attributes(env, name, cmd.attributes, cmd.span, skip=HINTS)
        logger.debug("defined %s", name)

    def _AxiomCmd(self, cmd: AxiomCmd):
        name = self._qualify(cmd.name)
        self.env = self._elaborator().axiom(name, cmd.binders, cmd.type, cmd.span)

    def _InductiveCmd(self, cmd: InductiveCmd):
        name = self._qualify(cmd.name)
        constructors = [
            (name.append(c.name), c.binders, c.type, c.span) for c in cmd.constructors
        ]
        self.env = self._elaborator().inductive(name, cmd.binders, cmd.type, constructors, cmd.span)

    def _StructureCmd(self, cmd: StructureCmd):
        name = self._qualify(cmd.name)
        is_class = config.ATTR_CLASS in cmd.attributes
        env = self._elaborator().structure(
            name, cmd.binders, cmd.type, cmd.fields, cmd.span, is_class,
        )
        self.env = self._attributes(env, name, cmd.attributes, cmd.span, skip=(config.ATTR_CLASS,))

    def _attributes(self, env, name, attributes, span, skip=()):
        for attribute in attributes:
            if attribute not in skip:
                env = apply_attribute(env, name, attribute, span)
        return env

    def _AttributeCmd(self, cmd: AttributeCmd):
        candidates = resolve_name(self.env, cmd.name, self.namespace)
        if not candidates:
            raise UnknownIdentifier(cmd.span, cmd.name)
        if len(candidates) > 1:
            raise ElaborationError(cmd.span, f"ambiguous name '{cmd.name}'")
        self.env = self._attributes(self.env, candidates[0], cmd.attributes, cmd.span)

    # namespaces

    def _NamespaceCmd(self, cmd: NamespaceCmd):
        self.namespaces.append(self._qualify(cmd.name))

    def _EndCmd(self, cmd: EndCmd):
        if self.namespace is None or self.namespace != self._closing(cmd.name):
            raise ElaborationError(cmd.span, f"invalid 'end', namespace '{cmd.name}' is not open")
        self.namespaces.pop()

    def _closing(self, name):
        outer = self.namespaces[-2] if len(self.namespaces) > 1 else None
        return outer.join(name) if outer is not None else name

    def _OpenCmd(self, cmd: OpenCmd):
        env = self.env
        for prefix in cmd.names:
            for full in env.names_with_prefix(prefix):
                env = env.add_alias(full.drop_prefix(prefix), full)
        self.env = env

    # queries

    def _CheckCmd(self, cmd: CheckCmd):
        t, ty = self._elaborator().term(cmd.term, cmd.span)
        namer = MetaNamer()
        self._print(f"{term_to_str(t, self.env, namer)} : {term_to_str(ty, self.env, namer)}")

    def _EvalCmd(self, cmd: EvalCmd):
        value, _ = self._elaborator().evaluate(cmd.term, cmd.span)
        self._print(self._show(value))

    def _ExampleCmd(self, cmd: ExampleCmd):
        self._elaborator().example(cmd.binders, cmd.type, cmd.value, cmd.span)
