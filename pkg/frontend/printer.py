"""Surface printing of preterms and commands; output parses back to equal values."""
from elaborator.preterm import (
    Annotated,
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
    app_spine,
    is_arrow,
)
from frontend.parser import EQ
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
from kernel.term import BinderInfo

PREC_TOP = 0
PREC_ARROW = 1
PREC_EQ = 2
PREC_APP = 3
PREC_ATOM = 4

_BRACKETS = {
    BinderInfo.EXPLICIT: ("(", ")"),
    BinderInfo.IMPLICIT: ("{", "}"),
    BinderInfo.INST_IMPLICIT: ("[", "]"),
}


def show_level(spec) -> str:
    if spec is None:
        return "_"
    if isinstance(spec, LevelNum):
        return str(spec.value)
    if isinstance(spec, LevelName):
        return str(spec.name)
    if isinstance(spec, LevelAdd):
        return f"{show_level(spec.base)}+{spec.offset}"
    if isinstance(spec, LevelMaxSpec):
        return f"max {_level_atom(spec.lhs)} {_level_atom(spec.rhs)}"
    raise ValueError(f"unexpected level {spec!r}")


def _level_atom(spec) -> str:
    text = show_level(spec)
    return f"({text})" if isinstance(spec, (LevelAdd, LevelMaxSpec)) else text


def _paren(text, needed):
    return f"({text})" if needed else text


def show_preterm(p, prec: int = PREC_TOP) -> str:
    if isinstance(p, Ident):
        return ("@" if p.explicit else "") + str(p.name)
    if isinstance(p, Placeholder):
        return "_"
    if isinstance(p, Numeral):
        return str(p.value)
    if isinstance(p, SortLit):
        if p.kind == "Prop":
            return "Prop"
        if p.kind == "Type" and p.level == LevelNum(0):
            return "Type"
        return f"{p.kind}.{{{show_level(p.level)}}}"
    if isinstance(p, Annotated):
        return f"({show_preterm(p.term)} : {show_preterm(p.type)})"
    if isinstance(p, PApp):
        head, args = app_spine(p)
        if isinstance(head, Ident) and not head.explicit and head.name == EQ and len(args) == 2:
            text = f"{show_preterm(args[0], PREC_APP)} = {show_preterm(args[1], PREC_APP)}"
            return _paren(text, prec > PREC_EQ)
        text = " ".join([show_preterm(head, PREC_APP)] + [show_preterm(a, PREC_ATOM) for a in args])
        return _paren(text, prec > PREC_APP)
    if isinstance(p, PPi) and is_arrow(p):
        text = f"{show_preterm(p.domain, PREC_EQ)} -> {show_preterm(p.body, PREC_ARROW)}"
        return _paren(text, prec > PREC_ARROW)
    if isinstance(p, PPi):
        text = f"Π {_binder(p.name, p.domain, p.info)}, {show_preterm(p.body)}"
        return _paren(text, prec > PREC_TOP)
    if isinstance(p, PLambda):
        if p.domain is None:
            binder = p.name
        else:
            binder = _binder(p.name, p.domain, p.info)
        text = f"fun {binder}, {show_preterm(p.body)}"
        return _paren(text, prec > PREC_TOP)
    raise ValueError(f"unexpected preterm {p!r}")


def _binder(name, type_, info) -> str:
    left, right = _BRACKETS[info]
    return f"{left}{name} : {show_preterm(type_)}{right}"


def show_binders(binders) -> str:
    return " ".join(_binder(b.name, b.type, b.info) for b in binders)


def _attrs(attributes) -> str:
    return f" [{', '.join(attributes)}]" if attributes else ""


def _signature(binders, type_) -> str:
    text = ""
    if binders:
        text += " " + show_binders(binders)
    if type_ is not None:
        text += f" : {show_preterm(type_)}"
    return text


def show_command(cmd) -> str:
    if isinstance(cmd, DefinitionCmd):
        return (f"{cmd.keyword} {cmd.name}{_attrs(cmd.attributes)}"
                f"{_signature(cmd.binders, cmd.type)} := {show_preterm(cmd.value)}")
    if isinstance(cmd, AxiomCmd):
        return f"{cmd.keyword} {cmd.name}{_signature(cmd.binders, cmd.type)}"
    if isinstance(cmd, InductiveCmd):
        lines = [f"inductive {cmd.name}{_signature(cmd.binders, cmd.type)}"]
        lines.extend(f"| {c.name}{_signature(c.binders, c.type)}" for c in cmd.constructors)
        return "\n".join(lines)
    if isinstance(cmd, StructureCmd):
        fields = " ".join(f"({f.name} : {show_preterm(f.type)})" for f in cmd.fields)
        return (f"structure {cmd.name}{_attrs(cmd.attributes)}"
                f"{_signature(cmd.binders, cmd.type)} := {fields}").rstrip()
    if isinstance(cmd, AttributeCmd):
        return f"attribute {cmd.name}{_attrs(cmd.attributes)}"
    if isinstance(cmd, NamespaceCmd):
        return f"namespace {cmd.name}"
    if isinstance(cmd, EndCmd):
        return f"end {cmd.name}"
    if isinstance(cmd, OpenCmd):
        return "open " + " ".join(str(n) for n in cmd.names)
    if isinstance(cmd, CheckCmd):
        return f"check {show_preterm(cmd.term)}"
    if isinstance(cmd, EvalCmd):
        return f"eval {show_preterm(cmd.term)}"
    if isinstance(cmd, ExampleCmd):
        return f"example{_signature(cmd.binders, cmd.type)} := {show_preterm(cmd.value)}"
    raise ValueError(f"unexpected command {cmd!r}")
