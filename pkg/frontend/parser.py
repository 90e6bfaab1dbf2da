"""Parse surface text into commands and preterms."""
import logging
from dataclasses import dataclass
from functools import lru_cache

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from constraints.justification import Span
from elaborator.preterm import (
    ARROW_BINDER,
    Annotated,
    Binder,
    Ident,
    LevelAdd,
    LevelMaxSpec,
    LevelName,
    LevelNum,
    Numeral,
    PApp,
    Placeholder,
    PLambda,
    PPi,
    SortLit,
)
from frontend.syntax import (
    AttributeCmd,
    AxiomCmd,
    CheckCmd,
    ConstructorSpec,
    DefinitionCmd,
    EndCmd,
    EvalCmd,
    ExampleCmd,
    InductiveCmd,
    NamespaceCmd,
    OpenCmd,
    StructureCmd,
)
from kernel.name import Name
from kernel.term import BinderInfo

logger = logging.getLogger(__name__)

EQ = Name(("eq",))
ADD = Name(("add",))


class ParseError(Exception):
    def __init__(self, span, message):
        self.span = span
        self.message = message
        super().__init__(message)


@lru_cache(maxsize=None)
def _parser():
    return Lark.open(
        "grammar.lark",
        rel_to=__file__,
        parser="lalr",
        start=["start", "term"],
        propagate_positions=True,
    )


class _Attrs(tuple):
    pass


class _Fields(tuple):
    pass


@dataclass(frozen=True)
class _TypeAnn:
    term: object


@dataclass
class _Header:
    binders: list
    attributes: tuple
    type: object
    rest: list


def _header(children) -> _Header:
    binders, attributes, type_, rest = [], (), None, []
    for child in children:
        if isinstance(child, _Attrs):
            attributes = tuple(child)
        elif isinstance(child, _Fields):
            rest.extend(child)
        elif isinstance(child, list):
            binders.extend(child)
        elif isinstance(child, _TypeAnn):
            type_ = child.term
        else:
            rest.append(child)
    return _Header(binders, attributes, type_, rest)


def _span(meta):
    if getattr(meta, "empty", True):
        return None
    return Span(meta.start_pos, meta.end_pos, meta.line, meta.column)


@v_args(meta=True)
class PretermBuilder(Transformer):
    """Turns the parse tree into commands and preterms carrying source spans."""

    def start(self, meta, children):
        return list(children)

    def ident(self, meta, children):
        return Name.parse(str(children[0]))

    # commands

    def def_kw(self, meta, children):
        return str(children[0])

    axiom_kw = def_kw

    def attrs(self, meta, children):
        return _Attrs(str(c) for c in children)

    def type_ann(self, meta, children):
        return _TypeAnn(children[0])

    def definition(self, meta, children):
        keyword, name, *middle, value = children
        h = _header(middle)
        return DefinitionCmd(
            name, tuple(h.binders), h.type, value, h.attributes, keyword, span=_span(meta),
        )

    def axiom(self, meta, children):
        keyword, name, *middle, type_ = children
        return AxiomCmd(name, tuple(_header(middle).binders), type_, keyword, span=_span(meta))

    def ctor(self, meta, children):
        name, *middle = children
        h = _header(middle)
        return ConstructorSpec(str(name), tuple(h.binders), h.type, span=_span(meta))

    def inductive(self, meta, children):
        name, *middle = children
        h = _header(middle)
        return InductiveCmd(name, tuple(h.binders), h.type, tuple(h.rest), span=_span(meta))

    def field(self, meta, children):
        *names, type_ = children
        span = _span(meta)
        return _Fields(Binder(str(n), type_, span=span) for n in names)

    def structure(self, meta, children):
        name, *middle = children
        h = _header(middle)
        return StructureCmd(
            name, tuple(h.binders), h.type, tuple(h.rest), h.attributes, span=_span(meta),
        )

    def attribute(self, meta, children):
        name, attributes = children
        return AttributeCmd(name, tuple(attributes), span=_span(meta))

    def namespace(self, meta, children):
        return NamespaceCmd(children[0], span=_span(meta))

    def end(self, meta, children):
        return EndCmd(children[0], span=_span(meta))

    def open(self, meta, children):
        return OpenCmd(tuple(children), span=_span(meta))

    def check(self, meta, children):
        return CheckCmd(children[0], span=_span(meta))

    def eval(self, meta, children):
        return EvalCmd(children[0], span=_span(meta))

    def example(self, meta, children):
        *binders, type_, value = children
        return ExampleCmd(tuple(_header(binders).binders), type_, value, span=_span(meta))

    # binders

    def _binders(self, meta, children, info):
        *names, type_ = children
        span = _span(meta)
        return [Binder(str(n), type_, info, span=span) for n in names]

    def explicit_binder(self, meta, children):
        return self._binders(meta, children, BinderInfo.EXPLICIT)

    def implicit_binder(self, meta, children):
        return self._binders(meta, children, BinderInfo.IMPLICIT)

    def inst_binder(self, meta, children):
        return self._binders(meta, children, BinderInfo.INST_IMPLICIT)

    def bracketed_binders(self, meta, children):
        return [b for group in children for b in group]

    def simple_binders(self, meta, children):
        type_ = None
        if children and not isinstance(children[-1], Token):
            type_ = children[-1]
            children = children[:-1]
        span = _span(meta)
        return [Binder(str(n), type_, span=span) for n in children]

    # terms

    def lam(self, meta, children):
        binders, body = children
        span = _span(meta)
        for b in reversed(binders):
            body = PLambda(b.name, b.type, body, b.info, span=span)
        return body

    def pi(self, meta, children):
        binders, body = children
        span = _span(meta)
        for b in reversed(binders):
            domain = b.type if b.type is not None else Placeholder(span=b.span)
            body = PPi(b.name, domain, body, b.info, span=span)
        return body

    def arrow_type(self, meta, children):
        domain, codomain = children
        return PPi(ARROW_BINDER, domain, codomain, span=_span(meta))

    def _binary(self, meta, head, lhs, rhs):
        span = _span(meta)
        return PApp(PApp(Ident(head, span=span), lhs, span=span), rhs, span=span)

    def equation(self, meta, children):
        return self._binary(meta, EQ, *children)

    def addition(self, meta, children):
        return self._binary(meta, ADD, *children)

    def application(self, meta, children):
        fn, arg = children
        return PApp(fn, arg, span=_span(meta))

    def var(self, meta, children):
        return Ident(children[0], span=_span(meta))

    def explicit_var(self, meta, children):
        return Ident(children[0], True, span=_span(meta))

    def placeholder(self, meta, children):
        return Placeholder(span=_span(meta))

    def numeral(self, meta, children):
        return Numeral(int(children[0]), span=_span(meta))

    def annotated(self, meta, children):
        term, type_ = children
        return Annotated(term, type_, span=_span(meta))

    def prop(self, meta, children):
        return SortLit("Prop", span=_span(meta))

    def type_zero(self, meta, children):
        return SortLit("Type", LevelNum(0), span=_span(meta))

    def type_level(self, meta, children):
        return SortLit("Type", children[0], span=_span(meta))

    def sort_level(self, meta, children):
        return SortLit("Sort", children[0], span=_span(meta))

    # levels

    def level_num(self, meta, children):
        return LevelNum(int(children[0]))

    def level_name(self, meta, children):
        return LevelName(Name.parse(str(children[0])))

    def level_hole(self, meta, children):
        return None

    def level_add(self, meta, children):
        base, offset = children
        return LevelAdd(base, int(offset))

    def level_max(self, meta, children):
        return LevelMaxSpec(*children)


def _error_span(error: UnexpectedInput, text: str) -> Span:
    if error.line is None or error.line < 0:
        line = text.count("\n") + 1
        column = len(text) - (text.rfind("\n") + 1) + 1
        return Span(len(text), len(text), line, column)
    pos = error.pos_in_stream if error.pos_in_stream is not None else 0
    return Span(pos, pos + 1, error.line, error.column)


def _error_message(error: UnexpectedInput, text: str) -> str:
    if isinstance(error, UnexpectedEOF):
        return "unexpected end of input"
    if isinstance(error, UnexpectedToken):
        if error.token.type == "$END":
            return "unexpected end of input"
        return f"unexpected token '{error.token}'"
    if isinstance(error, UnexpectedCharacters):
        return f"unexpected character '{text[error.pos_in_stream]}'"
    return "syntax error"


def _parse(text: str, start: str):
    try:
        tree = _parser().parse(text, start=start)
    except UnexpectedInput as error:
        raise ParseError(_error_span(error, text), _error_message(error, text)) from error
    return PretermBuilder().transform(tree)


def parse_file(text: str) -> list:
    """Commands of a source file, in order."""
    commands = _parse(text, "start")
    logger.debug("parsed %d commands", len(commands))
    return commands


def parse_term(text: str):
    return _parse(text, "term")
