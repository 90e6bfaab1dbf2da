import logging

import config
from elaborator.errors import ElaborationError
from elaborator.typeclass import class_of
from kernel.environment import Definition, Inductive, ReducibilityHint
from kernel.term import Const, Pi, get_app_fn, instantiate, mk_local
from kernel.type_checker import TypeChecker

logger = logging.getLogger(__name__)

HINTS = {
    config.ATTR_REDUCIBLE: ReducibilityHint.REDUCIBLE,
    config.ATTR_SEMIREDUCIBLE: ReducibilityHint.SEMIREDUCIBLE,
    config.ATTR_IRREDUCIBLE: ReducibilityHint.IRREDUCIBLE,
}


def coercion_heads(decl):
    """(source head, target head) of a coercion ``Π params, S params → T params``."""
    ty = decl.type
    last = None
    while type(ty) is Pi:
        last = mk_local(ty.domain, ty.name, ty.info)
        ty = instantiate(ty.body, last)
    if last is None:
        return None, None
    source = get_app_fn(last.type)
    target = get_app_fn(ty)
    return (
        source.name if type(source) is Const else None,
        target.name if type(target) is Const else None,
    )


def apply_attribute(env, name, attribute: str, span=None):
    """Environment with ``attribute`` attached to the declaration ``name``."""
    if attribute not in config.ALLOWED_ATTRIBUTES:
        raise ElaborationError(span, f"unknown attribute '{attribute}'")
    decl = env.find(name)
    if decl is None:
        raise ElaborationError(span, f"unknown declaration '{name}'")

    if attribute in HINTS:
        if not isinstance(decl, Definition):
            raise ElaborationError(span, f"'{name}' is not a definition")
        return env.with_hint(name, HINTS[attribute])

    if attribute == config.ATTR_CLASS:
        if not isinstance(decl, Inductive):
            raise ElaborationError(span, f"'{name}' is not an inductive type")
        return env.add_class(name)

    if attribute == config.ATTR_INSTANCE:
        cls = class_of(env, TypeChecker(env), decl.type)
        if cls is None:
            raise ElaborationError(span, f"type of '{name}' is not headed by a class")
        logger.debug("instance %s of %s", name, cls)
        return env.add_instance(cls, name)

    source, target = coercion_heads(decl)
    if source is None or target is None:
        raise ElaborationError(
            span, f"'{name}' cannot be a coercion: its type must map one type family to another"
        )
    logger.debug("coercion %s from %s to %s", name, source, target)
    return env.add_coercion(source, target, name)
