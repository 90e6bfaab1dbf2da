"""Inductive families: positivity, recursor generation and structure projections."""
import logging

from kernel import level as lvl
from kernel.environment import Constructor, Definition, Inductive, Recursor, ReducibilityHint
from kernel.errors import DuplicateDeclaration, KernelTypeError, PositivityError, UnsupportedInductive
from kernel.name import Name
from kernel.reduction import Transparency
from kernel.term import (
    BinderInfo,
    Const,
    Lambda,
    Pi,
    Sort,
    abstract_lambda,
    abstract_pi,
    get_app_fn_args,
    instantiate,
    mk_app_n,
    mk_local,
    occurs_const,
    subst_fvar,
)

logger = logging.getLogger(__name__)


def _telescope(ty, count=None, info=None):
    """Open up to ``count`` leading Π binders (all when None) into locals."""
    locals_ = []
    while type(ty) is Pi and (count is None or len(locals_) < count):
        local = mk_local(ty.domain, ty.name, info or ty.info)
        locals_.append(local)
        ty = instantiate(ty.body, local)
    return locals_, ty


def _instantiate_params(ty, params):
    for param in params:
        if type(ty) is not Pi:
            raise KernelTypeError("constructor has fewer parameters than its inductive type")
        ty = instantiate(ty.body, param)
    return ty


def _fresh_level_param(used) -> Name:
    candidate = Name(("l",))
    k = 0
    while candidate in used:
        k += 1
        candidate = Name((f"l_{k}",))
    return candidate


class _Family:
    """Working view of an inductive declaration while it is being added."""

    def __init__(self, decl: Inductive):
        self.decl = decl
        self.name = decl.name
        self.levels = tuple(lvl.LevelParam(p) for p in decl.univ_params)
        self.const = Const(decl.name, self.levels)
        self.params, rest = _telescope(decl.type, decl.num_params, BinderInfo.IMPLICIT)
        if len(self.params) != decl.num_params:
            raise KernelTypeError(f"'{decl.name}' has fewer than {decl.num_params} parameters")
        self.indices, result = _telescope(rest, info=BinderInfo.IMPLICIT)
        if type(result) is not Sort:
            raise KernelTypeError(f"type of '{decl.name}' must end in a sort, got {result}")
        self.sort_level = result.level

    def check_result(self, ctor_name, ty):
        head, args = get_app_fn_args(ty)
        if (
            type(head) is not Const
            or head.name != self.name
            or len(args) != len(self.params) + len(self.indices)
        ):
            raise KernelTypeError(f"constructor '{ctor_name}' must return '{self.name}', got {ty}")
        if list(args[: len(self.params)]) != self.params:
            raise UnsupportedInductive(f"constructor '{ctor_name}' changes the parameters of '{self.name}'")
        indices = args[len(self.params):]
        if any(occurs_const(self.name, a) for a in indices):
            raise PositivityError(f"'{self.name}' occurs in an index of constructor '{ctor_name}'")
        return indices

    def recursive_field(self, ctor_name, position, domain):
        """(ys, indices) when the field is recursive, None otherwise."""
        if not occurs_const(self.name, domain):
            return None
        ys = []
        inner = domain
        while type(inner) is Pi:
            if occurs_const(self.name, inner.domain):
                raise PositivityError(
                    f"arg #{position} of '{ctor_name}' has a non-positive occurrence of '{self.name}'"
                )
            y = mk_local(inner.domain, inner.name)
            ys.append(y)
            inner = instantiate(inner.body, y)
        head, args = get_app_fn_args(inner)
        if type(head) is not Const or head.name != self.name:
            raise UnsupportedInductive(
                f"arg #{position} of '{ctor_name}' contains a nested occurrence of '{self.name}'"
            )
        return ys, self.check_result(ctor_name, inner)


def _is_prop(tc, ty) -> bool:
    sort = tc.whnf(tc.check(ty), Transparency.ALL)
    return type(sort) is Sort and lvl.is_zero(sort.level)


def _allows_large_elim(tc, family, ctor_fields) -> bool:
    if not lvl.is_zero(family.sort_level):
        return True
    if len(ctor_fields) == 0:
        return True
    if len(ctor_fields) > 1:
        return False
    return all(_is_prop(tc, field.type) for field in ctor_fields[0])


def add_inductive(env, decl: Inductive):
    """Check ``decl`` and add it with its constructors and recursor ``C.rec``."""
    from kernel.type_checker import TypeChecker

    names = [decl.name, decl.name.append("rec")] + [n for n, _ in decl.constructors]
    for n in names:
        if n in env:
            raise DuplicateDeclaration(n)
    TypeChecker(env).check(decl.type)
    family = _Family(decl)
    decl = Inductive(
        decl.name, decl.univ_params, decl.num_params, decl.type, decl.constructors,
        len(family.indices),
    )
    env = env.add(decl)
    tc = TypeChecker(env)

    ctor_fields = []
    ctor_infos = []
    for index, (ctor_name, ctor_type) in enumerate(decl.constructors):
        tc.check(ctor_type)
        ty = _instantiate_params(ctor_type, family.params)
        fields = []
        recursive = []
        while type(ty) is Pi:
            field = mk_local(ty.domain, ty.name)
            recursive.append(family.recursive_field(ctor_name, len(fields) + 1, ty.domain))
            fields.append(field)
            ty = instantiate(ty.body, field)
        indices = family.check_result(ctor_name, ty)
        ctor_fields.append(fields)
        ctor_infos.append((ctor_name, fields, recursive, indices))
        env = env.add(Constructor(
            ctor_name, decl.univ_params, ctor_type, decl.name, index, decl.num_params, len(fields),
        ))

    large_elim = _allows_large_elim(tc, family, ctor_fields)
    if large_elim:
        elim_param = _fresh_level_param(decl.univ_params)
        rec_univ_params = (elim_param,) + tuple(decl.univ_params)
        elim_level = lvl.LevelParam(elim_param)
    else:
        rec_univ_params = tuple(decl.univ_params)
        elim_level = lvl.ZERO

    major = mk_local(mk_app_n(family.const, family.params + family.indices), "x")
    motive = mk_local(
        abstract_pi(family.indices + [major], Sort(elim_level)), "C", BinderInfo.IMPLICIT
    )
    minors = []
    for ctor_name, fields, recursive, indices in ctor_infos:
        ihs = []
        for field, rec_info in zip(fields, recursive):
            if rec_info is None:
                continue
            ys, rec_indices = rec_info
            ih_type = abstract_pi(ys, mk_app_n(motive, list(rec_indices) + [mk_app_n(field, ys)]))
            ihs.append(mk_local(ih_type, f"ih_{field.name}"))
        ctor_app = mk_app_n(Const(ctor_name, family.levels), family.params + fields)
        minor_type = abstract_pi(fields + ihs, mk_app_n(motive, list(indices) + [ctor_app]))
        minors.append(mk_local(minor_type, ctor_name.last))

    rec_type = abstract_pi(
        family.params + [motive] + minors + family.indices + [major],
        mk_app_n(motive, family.indices + [major]),
    )
    rec_name = decl.name.append("rec")
    env = env.add(Recursor(
        rec_name, rec_univ_params, rec_type, decl.name, decl.num_params, len(family.indices),
        len(minors), large_elim,
    ))
    TypeChecker(env).check(rec_type)
    logger.debug("added inductive %s with %d constructors (large elimination: %s)",
                 decl.name, len(minors), large_elim)
    return env


def add_structure_projections(env, struct_name: Name, field_names, is_class: bool = False):
    """Define ``S.f`` for every field of the single-constructor inductive ``S``.

    Each projection is ``λ {P̄} (s : S P̄), S.rec (λ s, F) (λ b̄, bᵢ) s`` where
    earlier fields in ``F`` are replaced by their own projections of ``s``.
    Projections are reducible and flagged so unification can recognize them.
    """
    from kernel.type_checker import TypeChecker, check_declaration

    ind = env.get(struct_name)
    if not isinstance(ind, Inductive) or len(ind.constructors) != 1 or ind.num_indices:
        raise UnsupportedInductive(f"'{struct_name}' is not a structure")
    rec = env.get(struct_name.append("rec"))
    family = _Family(ind)
    ctor_name, ctor_type = ind.constructors[0]
    fields, _ = _telescope(_instantiate_params(ctor_type, family.params))
    if len(fields) != len(field_names):
        raise KernelTypeError(f"'{struct_name}' expects {len(fields)} field names")

    info = BinderInfo.INST_IMPLICIT if is_class else BinderInfo.EXPLICIT
    subject = mk_local(mk_app_n(family.const, family.params), "s", info)
    earlier = []
    for position, (field, field_name) in enumerate(zip(fields, field_names)):
        proj_name = struct_name.append(field_name)
        field_type = field.type
        for prev, prev_proj in earlier:
            field_type = subst_fvar(field_type, prev, prev_proj)
        tc = TypeChecker(env)
        sort = tc.whnf(tc.check(field_type), Transparency.ALL)
        if not rec.large_elim and not lvl.is_zero(sort.level):
            raise UnsupportedInductive(
                f"field '{field_name}' of '{struct_name}' cannot be projected out of a proposition"
            )
        rec_levels = ((sort.level,) if rec.large_elim else ()) + family.levels
        motive = Lambda(BinderInfo.EXPLICIT, "s", mk_app_n(family.const, family.params),
                        abstract_lambda([subject], field_type).body)
        minor = abstract_lambda(fields, fields[position])
        body = mk_app_n(Const(rec.name, rec_levels), family.params + [motive, minor, subject])
        value = abstract_lambda(family.params + [subject], body)
        proj_type = abstract_pi(family.params + [subject], field_type)
        env = check_declaration(env, Definition(
            proj_name, ind.univ_params, proj_type, value, ReducibilityHint.REDUCIBLE,
        ))
        env = env.mark_projection(proj_name)
        earlier.append((field, mk_app_n(Const(proj_name, family.levels), family.params + [subject])))
    logger.debug("generated %d projections for %s", len(fields), struct_name)
    return env
