"""Constraint solver with case splits and non-chronological backtracking.

State is the queue Q (category, ticket) → (constraint, metas), the index U
meta uid → queue keys, the substitution S and the pending level equations.
All four are persistent, so a case split snapshots them by reference.
"""
import itertools
import logging
from dataclasses import dataclass, field

import config
from constraints.classify import classify, is_pattern, orient
from constraints.constraint import (
    Alternative,
    ChoiceConstraint,
    ConstraintCategory,
    LevelConstraint,
    Substitution,
    UnifConstraint,
)
from constraints.errors import (
    JustifiedError,
    LevelMismatch,
    OverloadExhausted,
    StepBudgetExceeded,
    StreamExhausted,
    UnificationFailure,
)
from constraints.justification import Assumption, join, join_all
from constraints.simp import Simplifier, is_meta_free
from kernel import level as lvl
from kernel.environment import Recursor
from kernel.reduction import Transparency
from kernel.term import (
    Const,
    FVar,
    Lambda,
    Meta,
    Pi,
    Sort,
    abstract,
    abstract_lambda,
    collect_metas,
    get_app_fn,
    get_app_fn_args,
    instantiate,
    mk_app_n,
    mk_local,
    mk_meta,
    mk_meta_unknown_type,
)
from kernel.type_checker import TypeChecker
from solver.persistent import PersistentMap
from solver.trace import TraceEvent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Solved:
    substitution: Substitution
    residue: tuple = ()
    pending_levels: tuple = ()
    ok = True


@dataclass(frozen=True)
class Failed:
    j: object
    error: JustifiedError
    ok = False


@dataclass
class CaseSplit:
    queue: PersistentMap
    index: PersistentMap
    subst: Substitution
    pending: tuple
    assumption: Assumption
    j: object
    alternatives: object  # iterator of Alternative
    category: ConstraintCategory
    kind: str = ""
    label: str = ""
    current: str = ""
    failures: list = field(default_factory=list)
    failed: object = None  # join of the justifications of failed alternatives


class _Exhausted(Exception):
    """Raised out of the main loop when no case split is left to retry."""

    def __init__(self, error: JustifiedError):
        self.error = error


def priority_of(c, tc) -> ConstraintCategory:
    if isinstance(c, ChoiceConstraint):
        if not c.ondemand:
            return ConstraintCategory.REGULAR
        if is_meta_free(c.type):
            return ConstraintCategory.READY
        return ConstraintCategory.POSTPONED
    return classify(c, tc)


class Solver:
    def __init__(self, env, max_steps: int | None = None, trace=None, tc=None):
        self.env = env
        self.tc = tc or TypeChecker(env)
        self.simplifier = Simplifier(self.tc)
        self.max_steps = config.MAX_STEPS if max_steps is None else max_steps
        self.trace = trace
        self._reset()

    # state

    def _reset(self):
        self.queue = PersistentMap()
        self.index = PersistentMap()
        self.subst = Substitution()
        self.pending = ()
        self.splits = []
        self.steps = 0
        self._tickets = itertools.count()

    def snapshot(self):
        return self.queue, self.index, self.subst, self.pending

    def _emit(self, kind, meta=None, category=None, j=None):
        if self.trace is None:
            return
        deps = tuple(sorted(j.assumptions())) if j is not None else ()
        label = category.label if isinstance(category, ConstraintCategory) else category
        self.trace(TraceEvent(kind, meta, label, deps))

    @staticmethod
    def _head_meta(c):
        if isinstance(c, ChoiceConstraint):
            return c.meta.uid
        if isinstance(c, UnifConstraint):
            for side in (c.lhs, c.rhs):
                head = get_app_fn(side)
                if type(head) is Meta:
                    return head.uid
        return None

    # queue and index

    def _enqueue(self, c, category, metas):
        key = (int(category), next(self._tickets))
        self.queue = self.queue.set(key, (c, metas))
        for uid in metas:
            self.index = self.index.set(uid, self.index.get(uid, ()) + (key,))
        self._emit(config.TRACE_ENQUEUE, self._head_meta(c), category, c.j)

    def _unindex(self, key, metas):
        for uid in metas:
            keys = tuple(k for k in self.index.get(uid, ()) if k != key)
            self.index = self.index.set(uid, keys) if keys else self.index.delete(uid)

    def _pop(self):
        key, (c, metas), self.queue = self.queue.pop_min()
        self._unindex(key, metas)
        category = ConstraintCategory(key[0])
        self._emit(config.TRACE_POP, self._head_meta(c), category, c.j)
        return c, category

    def queued(self) -> list:
        return [(ConstraintCategory(k[0]), c) for k, (c, _) in self.queue.items()]

    # visiting

    def visit_all(self, constraints):
        for c in constraints:
            self.visit(c)

    def visit(self, c):
        if isinstance(c, LevelConstraint):
            self._visit_level(c)
        elif isinstance(c, ChoiceConstraint):
            self._visit_choice(c)
        else:
            self._visit_eq(c)

    def _instantiate_eq(self, c):
        lhs, jl = self.subst.instantiate(c.lhs)
        rhs, jr = self.subst.instantiate(c.rhs)
        if jl is None and jr is None:
            return c, False
        return c.with_terms(lhs, rhs, join(c.j, join(jl, jr))), True

    def _visit_eq(self, c):
        c, _ = self._instantiate_eq(c)
        for residue in self.simplifier.simp(c):
            if isinstance(residue, LevelConstraint):
                self._visit_level(residue)
                continue
            residue = orient(residue)
            if is_pattern(residue.lhs, residue.rhs):
                self._assign(residue)
            else:
                metas = tuple(m.uid for m in collect_metas(residue.rhs, collect_metas(residue.lhs, [])))
                self._enqueue(residue, classify(residue, self.tc), metas)

    def _visit_choice(self, c):
        ty, jt = self.subst.instantiate(c.type)
        if jt is not None:
            c = c.with_type(ty, jt)
        metas = ()
        if c.ondemand:
            metas = tuple(m.uid for m in collect_metas(c.type, []))
        self._enqueue(c, priority_of(c, self.tc), metas)

    def _assign(self, c):
        head, args = get_app_fn_args(c.lhs)
        value = abstract_lambda(args, c.rhs)
        self.subst = self.subst.assign(head.uid, value, c.j)
        self._emit(config.TRACE_ASSIGN, head.uid, ConstraintCategory.PATTERN, c.j)
        meta_type, jt = self.subst.instantiate(head.type)
        if meta_type.has_meta or meta_type.has_level_meta:
            value_type, cs = self.tc.infer(value, c.j)
            self.visit_all(cs)
            self._visit_eq(UnifConstraint(value_type, meta_type, join(c.j, jt), c.transparency))
        self._revisit(head.uid)

    def _revisit(self, uid):
        keys = self.index.get(uid, ())
        if not keys:
            return
        self.index = self.index.delete(uid)
        for key in keys:
            entry = self.queue.get(key)
            if entry is None:
                continue
            c, metas = entry
            self.queue = self.queue.delete(key)
            self._unindex(key, metas)
            self.visit(c)

    def _visit_level(self, c):
        lhs, jl = self.subst.instantiate_level(c.lhs)
        rhs, jr = self.subst.instantiate_level(c.rhs)
        j = join(c.j, join(jl, jr))
        lhs, rhs = lvl.normalize(lhs), lvl.normalize(rhs)
        if lhs == rhs:
            return
        if not lvl.has_meta(lhs) and not lvl.has_meta(rhs):
            raise LevelMismatch(j, lhs, rhs)
        lhs_base, lhs_k = lvl.to_offset(lhs)
        rhs_base, rhs_k = lvl.to_offset(rhs)
        common = min(lhs_k, rhs_k)
        if common:
            lhs = lvl.normalize(_offset(lhs_base, lhs_k - common))
            rhs = lvl.normalize(_offset(rhs_base, rhs_k - common))
        for meta, other in ((lhs, rhs), (rhs, lhs)):
            if isinstance(meta, lvl.LevelMeta) and not lvl.occurs_meta(meta.uid, other):
                self.subst = self.subst.assign_level(meta.uid, other, j)
                self._emit(config.TRACE_ASSIGN, meta.uid, None, j)
                waiting, self.pending = self.pending, ()
                self.visit_all(waiting)
                return
        if not lvl.has_meta(rhs) and isinstance(lhs, lvl.LevelSucc) and lvl.is_zero(rhs):
            raise LevelMismatch(j, lhs, rhs)
        if not lvl.has_meta(lhs) and isinstance(rhs, lvl.LevelSucc) and lvl.is_zero(lhs):
            raise LevelMismatch(j, lhs, rhs)
        self.pending = self.pending + (LevelConstraint(lhs, rhs, j),)

    # case splits

    def process(self, alternatives, j, category, kind="", label="", meta=None):
        """Push a case split over ``alternatives`` and visit the first one."""
        it = iter(alternatives)
        try:
            first = next(it, None)
        except JustifiedError as e:
            raise e.with_justification(join(e.j, j))
        if first is None:
            raise StreamExhausted(j, f"no alternatives left for {kind or 'constraint'}")
        split = CaseSplit(
            self.queue, self.index, self.subst, self.pending, Assumption(), j, it, category, kind, label,
        )
        self.splits.append(split)
        self._emit(config.TRACE_SPLIT_PUSH, meta, category, join(split.assumption, j))
        logger.debug("case split %s (%s) at depth %d", kind, label, len(self.splits))
        self._try_alternative(split, first, join(split.assumption, j))

    def _try_alternative(self, split, alternative: Alternative, j):
        split.current = alternative.label
        try:
            cs = alternative.materialize()
        except JustifiedError as e:
            raise e.with_justification(join(e.j, j))
        self.visit_all([c.with_justification(j) for c in cs])

    def _backtrack(self, error: JustifiedError):
        while self.splits:
            split = self.splits[-1]
            j = error.j
            if split.assumption.uid not in j.assumptions():
                self.splits.pop()
                self._emit(config.TRACE_RESOLVE_SKIP, None, split.category, j)
                continue
            split.failures.append((split.current, error))
            split.failed = join(split.failed, j)
            self.queue, self.index, self.subst, self.pending = (
                split.queue, split.index, split.subst, split.pending,
            )
            self._emit(config.TRACE_BACKTRACK, None, split.category, j)
            logger.debug("backtracking into %s split at depth %d", split.kind, len(self.splits))
            try:
                alternative = next(split.alternatives, None)
            except JustifiedError as e:
                alternative = None
                error = e
                split.failed = join(split.failed, e.j)
            if alternative is None:
                # exhausted: depends on the split itself and on every failed alternative
                self.splits.pop()
                exhausted = join(split.j, split.failed)
                if split.kind == "overload":
                    error = OverloadExhausted(exhausted, split.label, list(split.failures))
                else:
                    error = error.with_justification(exhausted)
                continue
            next_j = join(split.j, j)
            try:
                self._try_alternative(split, alternative, next_j)
                return
            except JustifiedError as e:
                error = e
        raise _Exhausted(error)

    def _run(self, action):
        try:
            action()
        except JustifiedError as e:
            self._backtrack(e)

    # processors

    def _process_choice(self, c, category):
        ty, _ = self.subst.instantiate(c.type)
        alternatives = c.chooser(c.meta_app, ty, self.subst)
        self.process(alternatives, c.j, category, c.kind, c.label, c.meta.uid)

    def _process_delta(self, c, category):
        lhs_head, lhs_args = get_app_fn_args(c.lhs)
        rhs_head, rhs_args = get_app_fn_args(c.rhs)

        def argwise():
            out = [LevelConstraint(a, b, c.j) for a, b in zip(lhs_head.levels, rhs_head.levels)]
            out.extend(c.with_terms(a, b) for a, b in zip(lhs_args, rhs_args))
            return out

        def unfolded():
            return [c.with_terms(self.tc.unfold(c.lhs), self.tc.unfold(c.rhs))]

        self.process(
            [Alternative(argwise, "argwise"), Alternative(unfolded, "unfold")], c.j, category, "delta",
        )

    def _process_recursor(self, c, category):
        lhs_head, lhs_args = get_app_fn_args(c.lhs)
        rhs_head, rhs_args = get_app_fn_args(c.rhs)
        if (
            type(lhs_head) is Const
            and lhs_head == rhs_head
            and len(lhs_args) == len(rhs_args)
            and isinstance(self.env.find(lhs_head.name), Recursor)
        ):
            def argwise():
                return [c.with_terms(a, b) for a, b in zip(lhs_args, rhs_args)]

            self.process([Alternative(argwise, "argwise")], c.j, category, "recursor")
            return
        flex = orient(c)
        if type(get_app_fn(flex.lhs)) is Meta:
            self._process_flex_rigid(flex, category, imitate=False)
            return
        raise UnificationFailure(c.j, c.lhs, c.rhs)

    def _convertible(self, s, t) -> bool:
        if is_meta_free(s) and is_meta_free(t):
            return self.tc.is_def_eq(s, t)
        return self.tc.whnf(s) == self.tc.whnf(t)

    def _binding_locals(self, meta, args):
        """Locals x₁…xₚ typed by ?m's Π-telescope (or by the argument types when it runs out)."""
        ty = self.subst.instantiate_term(meta.type)
        xs = []
        for arg in args:
            ty = self.tc.whnf(ty, Transparency.ALL)
            if type(ty) is Pi:
                x = mk_local(ty.domain, ty.name)
                ty = instantiate(ty.body, x)
            else:
                arg_type, _ = self.tc.infer(arg)
                x = mk_local(self.subst.instantiate_term(arg_type), "x")
            xs.append(x)
        return xs

    def _arity(self, ty) -> int:
        n = 0
        ty = self.tc.whnf(self.subst.instantiate_term(ty), Transparency.ALL)
        while type(ty) is Pi:
            x = mk_local(ty.domain, ty.name)
            ty = self.tc.whnf(instantiate(ty.body, x), Transparency.ALL)
            n += 1
        return n

    def _apply_fresh(self, head, head_type, count, xs):
        """``head (?n₁ x̄) … (?n_count x̄)`` with argument types read off ``head_type``."""
        args = []
        ty = head_type
        for _ in range(count):
            if ty is not None:
                ty = self.tc.whnf(self.subst.instantiate_term(ty), Transparency.ALL)
            if type(ty) is Pi:
                arg = mk_meta(xs, ty.domain)
                ty = instantiate(ty.body, arg)
            else:
                arg = mk_meta_unknown_type(xs)
                ty = None
            args.append(arg)
        return mk_app_n(head, args)

    def _binder_imitation(self, rhs, xs):
        domain = mk_meta(xs, Sort(lvl.mk_level_meta()))
        y = mk_local(domain, rhs.name, rhs.info)
        if type(rhs) is Pi:
            body = mk_meta(xs + [y], Sort(lvl.mk_level_meta()))
        else:
            body = mk_meta_unknown_type(xs + [y])
        return type(rhs)(rhs.info, rhs.name, domain, abstract(y, body))

    def _binding(self, meta, xs, make_body, c):
        def build():
            binding = abstract_lambda(xs, make_body())
            binding_type, cs = self.tc.infer(binding, c.j)
            meta_type = self.subst.instantiate_term(meta.type)
            return [UnifConstraint(meta, binding, c.j)] + cs + [
                UnifConstraint(meta_type, binding_type, c.j),
                c,
            ]

        return build

    def flex_rigid_alternatives(self, c, category, imitate=True):
        """Huet-style bindings for ``?m s̄ ≐ t`` in the order they are tried."""
        meta, s_args = get_app_fn_args(c.lhs)
        rhs = c.rhs
        t_head, t_args = get_app_fn_args(rhs)
        xs = self._binding_locals(meta, s_args)
        alternatives = []
        direct = set()

        for i, s_i in enumerate(s_args):
            if self._convertible(s_i, rhs):
                direct.add(i)
                alternatives.append(Alternative(
                    self._binding(meta, xs, lambda i=i: xs[i], c), f"assign x{i + 1}",
                ))

        quasi = all(type(s) is FVar for s in s_args)
        reducible_head = type(t_head) is Const and self.env.is_reducible(t_head.name)
        for i, s_i in enumerate(s_args):
            if i in direct:
                continue
            if quasi:
                if type(t_head) is FVar:
                    allowed = s_i == t_head
                else:
                    allowed = reducible_head
            else:
                allowed = type(s_i) is FVar
            if not allowed:
                continue

            def projection(i=i):
                rhs_type, _ = self.tc.infer(rhs)
                extra = max(0, self._arity(xs[i].type) - self._arity(rhs_type))
                return self._apply_fresh(xs[i], xs[i].type, extra, xs)

            alternatives.append(Alternative(self._binding(meta, xs, projection, c), f"project x{i + 1}"))

        if imitate and not self._is_recursor(t_head):
            # unfolded imitation precedes plain imitation; ?m b (-a) ≐ int.sub b a
            # is only solved through the unfolded head, int.add b (-a)
            if reducible_head:
                alternatives.append(Alternative(
                    self._binding(meta, xs, lambda: self._imitation(self._unfold_head(rhs), xs, c.j), c),
                    "imitate after unfolding",
                ))
            if _can_imitate(rhs):
                alternatives.append(Alternative(
                    self._binding(meta, xs, lambda: self._imitation(rhs, xs, c.j), c), "imitate",
                ))
        return alternatives

    def _unfold_head(self, t):
        return self.tc.whnf_core(self.tc.unfold(t))

    def _is_recursor(self, head) -> bool:
        return type(head) is Const and isinstance(self.env.find(head.name), Recursor)

    def _imitation(self, t, xs, j):
        if type(t) is Sort:
            return t
        if type(t) in (Pi, Lambda):
            return self._binder_imitation(t, xs)
        head, args = get_app_fn_args(t)
        if not _can_imitate(t) or self._is_recursor(head):
            raise UnificationFailure(j, t, t)
        head_type, _ = self.tc.infer(head)
        return self._apply_fresh(head, head_type, len(args), xs)

    def _process_flex_rigid(self, c, category, imitate=True):
        c = orient(c)
        alternatives = self.flex_rigid_alternatives(c, category, imitate)
        self.process(alternatives, c.j, category, "flexRigid", meta=self._head_meta(c))

    # main loop

    def _step(self):
        """Process one queued constraint; False once only flex-flex constraints remain."""
        if not self.queue:
            return False
        key, _ = self.queue.min_item()
        if key[0] == ConstraintCategory.FLEX_FLEX:
            return not self._flex_flex_settled()
        if self.steps >= self.max_steps:
            c, _ = self.queue.min_item()[1]
            raise _Exhausted(StepBudgetExceeded(c.j, self.max_steps))
        self.steps += 1
        c, category = self._pop()
        if isinstance(c, ChoiceConstraint):
            self._run(lambda: self._process_choice(c, category))
            return True
        instantiated, changed = self._instantiate_eq(c)
        if changed:
            self._run(lambda: self.visit(instantiated))
        elif category == ConstraintCategory.DELTA:
            self._run(lambda: self._process_delta(c, category))
        elif category == ConstraintCategory.RECURSOR:
            self._run(lambda: self._process_recursor(c, category))
        elif category in (ConstraintCategory.QUASI_PATTERN, ConstraintCategory.FLEX_RIGID):
            self._run(lambda: self._process_flex_rigid(c, category))
        else:
            self._run(lambda: self.visit(c))
        return True

    def _flex_flex_settled(self) -> bool:
        """True when no remaining flex-flex constraint is affected by S."""
        for key, (c, metas) in self.queue.items():
            if self._instantiate_eq(c)[1]:
                self.queue = self.queue.delete(key)
                self._unindex(key, metas)
                self._run(lambda: self.visit(c))
                return False
        return True

    def discharge_flex_flex(self) -> tuple:
        """Remaining flex-flex constraints, left unassigned."""
        return tuple(c for _, (c, _) in self.queue.items())

    def _search(self, constraints):
        self._run(lambda: self.visit_all(constraints))
        while self._step():
            pass
        return Solved(self.subst, self.discharge_flex_flex(), self.pending)

    def solve(self, constraints) -> Solved | Failed:
        self._reset()
        try:
            result = self._search(list(constraints))
        except _Exhausted as exhausted:
            logger.debug("solver failed after %d steps: %s", self.steps, exhausted.error.message)
            return Failed(exhausted.error.j, exhausted.error)
        logger.debug("solver finished after %d steps", self.steps)
        return result

    def solve_all(self, constraints, limit: int = 10):
        """Successive solutions, obtained by rejecting each one and backtracking."""
        self._reset()
        try:
            result = self._search(list(constraints))
            yield result
            for _ in range(limit - 1):
                open_splits = join_all(s.assumption for s in self.splits)
                if open_splits is None:
                    return
                self._backtrack(StreamExhausted(open_splits, "solution rejected"))
                while self._step():
                    pass
                yield Solved(self.subst, self.discharge_flex_flex(), self.pending)
        except _Exhausted:
            return


def _offset(base, k):
    for _ in range(k):
        base = lvl.mk_succ(base)
    return base


def _can_imitate(t) -> bool:
    if type(t) in (Sort, Pi, Lambda):
        return True
    head = get_app_fn(t)
    return type(head) is Const
