"""Linear typechecking: every variable is used exactly once on every path.

Checking also renames bound variables apart (``x`` becomes ``x@3``) so the
denotation never has to think about shadowing.  Each node of the renamed
tree carries ``ty`` (its type) and ``fv`` (the set of variables it uses).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .syntax import (
    BIT,
    GATE_ARITY,
    QUBIT,
    UNIT,
    Case,
    Discard,
    DuplicatedUse,
    Gate,
    Inj,
    Let,
    LetPair,
    LetUnit,
    Loc,
    Measure,
    NewQubit,
    Pair,
    QlcType,
    Sum,
    Tensor,
    Term,
    TypeMismatch,
    UnboundVariable,
    Unit,
    UnitVal,
    UnusedVariable,
    Var,
    _norm,
    types_equal,
)

__all__ = ["TypingContext", "typecheck", "elaborate", "Elaborated"]


@dataclass(frozen=True)
class TypingContext:
    entries: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple((str(n), t) for n, t in self.entries))
        names = [n for n, _ in self.entries]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable in context {names}")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)


@dataclass
class Elaborated:
    term: Term
    ty: QlcType
    ctx: list  # of (unique name, type), in context order


def _expect(ty: QlcType, want: QlcType, loc: Loc | None, what: str):
    if not types_equal(ty, want):
        raise TypeMismatch(f"{what} has type {ty}, expected {want}", loc)


class _Checker:
    def __init__(self):
        self.counter = itertools.count()

    def fresh(self, name: str) -> str:
        return f"{name}@{next(self.counter)}"

    def done(self, node: Term, ty: QlcType, used: dict):
        node.ty = ty
        node.fv = frozenset(used)
        return node, ty, used

    @staticmethod
    def merge(a: dict, b: dict) -> dict:
        for uid, loc in b.items():
            if uid in a:
                raise DuplicatedUse(f"variable {uid.split('@')[0]!r} used more than once", loc)
        return {**a, **b}

    def bind(self, name: str, ty: QlcType, env: dict) -> tuple[str, dict]:
        uid = self.fresh(name)
        return uid, {**env, name: (uid, ty)}

    @staticmethod
    def release(uid: str, used: dict, loc: Loc | None) -> dict:
        if uid not in used:
            raise UnusedVariable(f"variable {uid.split('@')[0]!r} is never used", loc)
        return {k: v for k, v in used.items() if k != uid}

    def check(self, t: Term, env: dict):
        if isinstance(t, Var):
            if t.name not in env:
                raise UnboundVariable(f"unbound variable {t.name!r}", t.loc)
            uid, ty = env[t.name]
            return self.done(Var(uid, loc=t.loc), ty, {uid: t.loc})
        if isinstance(t, UnitVal):
            return self.done(UnitVal(loc=t.loc), UNIT, {})
        if isinstance(t, NewQubit):
            return self.done(NewQubit(t.value, loc=t.loc), QUBIT, {})
        if isinstance(t, Pair):
            a, ta, ua = self.check(t.left, env)
            b, tb, ub = self.check(t.right, env)
            return self.done(Pair(a, b, loc=t.loc), Tensor(ta, tb), self.merge(ua, ub))
        if isinstance(t, Gate):
            arity = GATE_ARITY[t.name]
            if len(t.args) != arity:
                raise TypeMismatch(f"{t.name} takes {arity} argument(s), got {len(t.args)}", t.loc)
            args, used = [], {}
            for arg in t.args:
                a, ta, ua = self.check(arg, env)
                _expect(ta, QUBIT, arg.loc, f"argument of {t.name}")
                args.append(a)
                used = self.merge(used, ua)
            ty = QUBIT if arity == 1 else Tensor(QUBIT, QUBIT)
            return self.done(Gate(t.name, args, loc=t.loc), ty, used)
        if isinstance(t, Measure):
            a, ta, ua = self.check(t.arg, env)
            _expect(ta, QUBIT, t.arg.loc, "argument of measure")
            return self.done(Measure(a, loc=t.loc), BIT, ua)
        if isinstance(t, Discard):
            a, ta, ua = self.check(t.arg, env)
            return self.done(Discard(a, loc=t.loc), UNIT, ua)
        if isinstance(t, Inj):
            a, ta, ua = self.check(t.arg, env)
            ty = Sum(ta, t.other) if t.side == 0 else Sum(t.other, ta)
            return self.done(Inj(t.side, t.other, a, loc=t.loc), ty, ua)
        if isinstance(t, Let):
            b, tb, ub = self.check(t.bound, env)
            uid, inner = self.bind(t.name, tb, env)
            s, ts, us = self.check(t.body, inner)
            us = self.release(uid, us, t.loc)
            return self.done(Let(uid, b, s, loc=t.loc), ts, self.merge(ub, us))
        if isinstance(t, LetPair):
            b, tb, ub = self.check(t.bound, env)
            nb = _norm(tb)
            if not isinstance(nb, Tensor):
                raise TypeMismatch(f"cannot split a value of type {tb}", t.bound.loc)
            if t.left == t.right:
                raise DuplicatedUse(f"pattern binds {t.left!r} twice", t.loc)
            ux, inner = self.bind(t.left, nb.left, env)
            uy, inner = self.bind(t.right, nb.right, inner)
            s, ts, us = self.check(t.body, inner)
            us = self.release(uy, self.release(ux, us, t.loc), t.loc)
            return self.done(LetPair(ux, uy, b, s, loc=t.loc), ts, self.merge(ub, us))
        if isinstance(t, LetUnit):
            b, tb, ub = self.check(t.bound, env)
            if not isinstance(_norm(tb), Unit):
                raise TypeMismatch(f"expected unit, found {tb}", t.bound.loc)
            s, ts, us = self.check(t.body, env)
            return self.done(LetUnit(b, s, loc=t.loc), ts, self.merge(ub, us))
        if isinstance(t, Case):
            e, te, ue = self.check(t.scrutinee, env)
            ne = _norm(te)
            if not isinstance(ne, Sum):
                raise TypeMismatch(f"case on a value of type {te}", t.scrutinee.loc)
            ux, left_env = self.bind(t.left_var, ne.left, env)
            l, tl, ul = self.check(t.left, left_env)
            ul = self.release(ux, ul, t.left.loc)
            uy, right_env = self.bind(t.right_var, ne.right, env)
            r, tr, ur = self.check(t.right, right_env)
            ur = self.release(uy, ur, t.right.loc)
            for uid in ul.keys() - ur.keys():
                raise UnusedVariable(f"variable {uid.split('@')[0]!r} is unused in the inr branch", t.right.loc)
            for uid in ur.keys() - ul.keys():
                raise UnusedVariable(f"variable {uid.split('@')[0]!r} is unused in the inl branch", t.left.loc)
            if not types_equal(tl, tr):
                raise TypeMismatch(f"case branches have types {tl} and {tr}", t.loc)
            node = Case(e, ux, l, uy, r, loc=t.loc)
            return self.done(node, tl, self.merge(ue, ur))
        raise TypeError(f"not a term: {t!r}")


def elaborate(ctx, t: Term) -> Elaborated:
    ctx = ctx if isinstance(ctx, TypingContext) else TypingContext(tuple(ctx))
    checker = _Checker()
    env, order = {}, []
    for name, ty in ctx:
        uid = checker.fresh(name)
        env[name] = (uid, ty)
        order.append((uid, ty))
    term, ty, used = checker.check(t, env)
    for (name, _), (uid, _) in zip(ctx, order):
        if uid not in used:
            raise UnusedVariable(f"input {name!r} is never used", t.loc)
    return Elaborated(term, ty, order)


def typecheck(ctx, t: Term) -> QlcType:
    """The type of ``t`` in ``ctx``; raises a located error if ``t`` is ill-typed."""
    return elaborate(ctx, t).ty
