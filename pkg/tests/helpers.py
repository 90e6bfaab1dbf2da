"""Shared fixtures: small environments, reference oracles and seeded term generators."""
import random
from functools import lru_cache

from frontend.runner import load_prelude
from kernel import level as lvl
from kernel.environment import Environment, Inductive
from kernel.name import name
from kernel.term import (
    App,
    BVar,
    BinderInfo,
    Const,
    FVar,
    Lambda,
    Pi,
    Sort,
    mk_arrow,
    mk_local,
)
from kernel.type_checker import check_declaration

NAT = Const(name("nat"))
ZERO = Const(name("nat.zero"))
SUCC = Const(name("nat.succ"))
TYPE = Sort(lvl.ONE)
PROP = Sort(lvl.ZERO)


def numeral(k):
    t = ZERO
    for _ in range(k):
        t = App(SUCC, t)
    return t


def nat_env() -> Environment:
    """Environment holding only ``nat`` with its constructors and recursor."""
    decl = Inductive(name("nat"), (), 0, TYPE, (
        (name("nat.zero"), NAT),
        (name("nat.succ"), mk_arrow(NAT, NAT)),
    ))
    return check_declaration(Environment(), decl)


@lru_cache(maxsize=None)
def prelude_env() -> Environment:
    """The bundled prelude, elaborated once per test run."""
    return load_prelude()


def const(text, *levels):
    return Const(name(text), tuple(levels))


# Reference implementations of the term traversals, without any of the
# bound/flag shortcuts.

class NaiveCounter:
    def __init__(self):
        self.visits = 0


def naive_instantiate(t, s, counter=None, off=0):
    if counter is not None:
        counter.visits += 1
    cls = type(t)
    if cls is BVar:
        if t.idx == off:
            return s
        if t.idx > off:
            return BVar(t.idx - 1)
        return t
    if cls is App:
        return App(naive_instantiate(t.fn, s, counter, off), naive_instantiate(t.arg, s, counter, off))
    if cls is Lambda or cls is Pi:
        return cls(
            t.info, t.name,
            naive_instantiate(t.domain, s, counter, off),
            naive_instantiate(t.body, s, counter, off + 1),
        )
    return t


def naive_abstract(local, t, off=0):
    cls = type(t)
    if cls is FVar:
        return BVar(off) if t.uid == local.uid else t
    if cls is BVar:
        return BVar(t.idx + 1) if t.idx >= off else t
    if cls is App:
        return App(naive_abstract(local, t.fn, off), naive_abstract(local, t.arg, off))
    if cls is Lambda or cls is Pi:
        return cls(t.info, t.name, naive_abstract(local, t.domain, off), naive_abstract(local, t.body, off + 1))
    return t


class TermGenerator:
    """Random well-scoped terms over a few constants and locals; seeded."""

    def __init__(self, seed=0, locals_=None):
        self.rng = random.Random(seed)
        self.locals = locals_ or [mk_local(NAT, f"x{i}") for i in range(3)]
        self.consts = [NAT, ZERO, SUCC, TYPE]

    def term(self, depth=4, bound=0):
        rng = self.rng
        if depth == 0 or rng.random() < 0.2:
            choice = rng.randrange(3)
            if choice == 0 and bound:
                return BVar(rng.randrange(bound + 1))
            if choice == 1:
                return rng.choice(self.locals)
            return rng.choice(self.consts)
        kind = rng.randrange(3)
        if kind == 0:
            return App(self.term(depth - 1, bound), self.term(depth - 1, bound))
        cls = Lambda if kind == 1 else Pi
        return cls(BinderInfo.EXPLICIT, "y", self.term(depth - 1, bound), self.term(depth - 1, bound + 1))

    def closed_heavy(self, depth=9):
        """About 2**(depth + 2) nodes, all but a handful inside closed subtrees."""
        closed = balanced(depth)
        return App(App(BVar(0), closed), App(SUCC, closed))


def balanced(depth):
    if depth == 0:
        return ZERO
    half = balanced(depth - 1)
    return App(half, balanced(depth - 1))
