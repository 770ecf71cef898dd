"""Denotation of well-typed terms as morphisms of ``Q``.

A term in context ``x1:A1, ..., xn:An`` denotes a morphism
``[[A1]] (x) ... (x) [[An]] -> [[B]]``; the context order is fixed by the
caller and preserved by every rule (bound variables go first).
"""

from __future__ import annotations

import numpy as np

from .. import cpm, qcat
from ..cpm import HObject, KrausSet
from ..qcat import QMorphism, QObject
from .syntax import (
    Bit,
    Case,
    Discard,
    Gate,
    Inj,
    Let,
    LetPair,
    LetUnit,
    Measure,
    NewQubit,
    Pair,
    Program,
    QlcType,
    Qubit,
    Sum,
    Tensor,
    Term,
    Unit,
    UnitVal,
    Var,
    _norm,
)
from .typecheck import elaborate

__all__ = ["GATES", "denote_type", "denote", "denote_program", "measurement", "discard_morphism"]

_S2 = 1 / np.sqrt(2)
GATES = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "T": np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex),
    # control is the first argument
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
}

QUBIT_SPACE = HObject("C2", 2)


def denote_type(t: QlcType) -> QObject:
    if isinstance(t, Qubit):
        return QObject((QUBIT_SPACE,))
    if isinstance(t, Unit):
        return qcat.UNIT
    if isinstance(t, Bit):
        return qcat.coproduct_all([qcat.UNIT, qcat.UNIT])
    if isinstance(t, Tensor):
        return qcat.tensor_obj(denote_type(t.left), denote_type(t.right))
    if isinstance(t, Sum):
        return qcat.coproduct_all([denote_type(t.left), denote_type(t.right)])
    raise TypeError(f"not a type: {t!r}")


def _single(src: QObject, dst: QObject, f) -> QMorphism:
    return QMorphism(src, dst, ((f,),))


def measurement() -> QMorphism:
    """``qubit -> bit``: the two outcomes carry ``<0|rho|0>`` and ``<1|rho|1>``."""
    e = np.eye(2)
    rows = tuple((cpm.kraus_to_choi(KrausSet(2, 1, (e[k : k + 1, :],))),) for k in range(2))
    return QMorphism(denote_type(Qubit()), denote_type(Bit()), rows)


def discard_morphism(x: QObject) -> QMorphism:
    return qcat.copair_all([_single(QObject((p,)), qcat.UNIT, cpm.discard(p.dim)) for p in x], qcat.UNIT)


def _prepare(value: int) -> QMorphism:
    ket = np.eye(2)[:, value : value + 1]
    return _single(qcat.UNIT, denote_type(Qubit()), cpm.kraus_to_choi(KrausSet(1, 2, (ket,))))


def _retype(f: QMorphism, src: QObject | None = None, dst: QObject | None = None) -> QMorphism:
    # relabel along an identity-like iso (same part dimensions in the same order)
    src = f.src if src is None else src
    dst = f.dst if dst is None else dst
    if src.dims != f.src.dims or dst.dims != f.dst.dims:
        raise AssertionError(f"cannot retype {f.src.dims}->{f.dst.dims} as {src.dims}->{dst.dims}")
    return QMorphism(src, dst, f.entries)


def _obj(ctx) -> QObject:
    return qcat.tensor_objs([denote_type(t) for _, t in ctx])


def _split(ctx, groups) -> QMorphism:
    """``[[ctx]] -> [[g1]] (x) [[g2]]`` reordering variables into the two groups."""
    order = [uid for g in groups for uid, _ in g]
    names = [uid for uid, _ in ctx]
    perm = [order.index(uid) for uid in names]
    shuffle = qcat.permute_factors([denote_type(t) for _, t in ctx], perm)
    dst = qcat.tensor_obj(_obj(groups[0]), _obj(groups[1]))
    return _retype(shuffle, src=_obj(ctx), dst=dst)


def _restrict(ctx, fv) -> list:
    return [(uid, t) for uid, t in ctx if uid in fv]


def _without(ctx, fv) -> list:
    return [(uid, t) for uid, t in ctx if uid not in fv]


def _then(ctx, first: Term, bound: list, body: Term) -> QMorphism:
    """Run ``first`` on its variables, then ``body`` in context ``bound + rest``."""
    used = _restrict(ctx, first.fv)
    rest = _without(ctx, first.fv)
    step = qcat.tensor_mor(_denote(used, first), qcat.identity(_obj(rest)))
    tail = _retype(_denote(bound + rest, body), src=step.dst)
    return qcat.compose(tail, qcat.compose(step, _split(ctx, [used, rest])))


def _denote(ctx, t: Term) -> QMorphism:
    src, dst = _obj(ctx), denote_type(t.ty)
    if isinstance(t, Var):
        return _retype(qcat.identity(dst), src=src)
    if isinstance(t, UnitVal):
        return qcat.identity(qcat.UNIT)
    if isinstance(t, NewQubit):
        return _prepare(t.value)
    if isinstance(t, Pair):
        left, right = _restrict(ctx, t.left.fv), _restrict(ctx, t.right.fv)
        both = qcat.tensor_mor(_denote(left, t.left), _denote(right, t.right))
        return _retype(qcat.compose(both, _split(ctx, [left, right])), src=src, dst=dst)
    if isinstance(t, Gate):
        if len(t.args) == 1:
            arg = _denote(ctx, t.args[0])
        else:
            arg = _denote(ctx, _pair_of(t.args))
        u = _single(arg.dst, arg.dst, cpm.unitary(GATES[t.name]))
        return _retype(qcat.compose(u, arg), dst=dst)
    if isinstance(t, Measure):
        return qcat.compose(measurement(), _denote(ctx, t.arg))
    if isinstance(t, Discard):
        arg = _denote(ctx, t.arg)
        return qcat.compose(discard_morphism(arg.dst), arg)
    if isinstance(t, Inj):
        arg = _denote(ctx, t.arg)
        ty = _norm(t.ty)
        parts = [denote_type(ty.left), denote_type(ty.right)]
        return _retype(qcat.compose(qcat.injection(parts, t.side), arg), dst=dst)
    if isinstance(t, Let):
        return _then(ctx, t.bound, [(t.name, t.bound.ty)], t.body)
    if isinstance(t, LetPair):
        pair = _norm(t.bound.ty)
        return _then(ctx, t.bound, [(t.left, pair.left), (t.right, pair.right)], t.body)
    if isinstance(t, LetUnit):
        return _then(ctx, t.bound, [], t.body)
    if isinstance(t, Case):
        used = _restrict(ctx, t.scrutinee.fv)
        rest = _without(ctx, t.scrutinee.fv)
        sums = _norm(t.scrutinee.ty)
        step = qcat.tensor_mor(_denote(used, t.scrutinee), qcat.identity(_obj(rest)))
        # (A + B) (x) R is already (A (x) R) + (B (x) R) part by part
        branches = [
            _retype(
                _denote([(var, side)] + rest, body),
                src=qcat.tensor_obj(denote_type(side), _obj(rest)),
                dst=dst,
            )
            for var, side, body in ((t.left_var, sums.left, t.left), (t.right_var, sums.right, t.right))
        ]
        joined = _retype(qcat.copair_all(branches, dst), src=step.dst)
        return qcat.compose(joined, qcat.compose(step, _split(ctx, [used, rest])))
    raise TypeError(f"not a term: {t!r}")


def _pair_of(args: list) -> Term:
    out = args[-1]
    for a in reversed(args[:-1]):
        p = Pair(a, out, loc=a.loc)
        p.ty = Tensor(a.ty, out.ty)
        p.fv = a.fv | out.fv
        out = p
    return out


def denote(ctx, t: Term) -> QMorphism:
    """The morphism ``[[ctx]] -> [[type of t]]`` of a term that typechecks in ``ctx``."""
    el = elaborate(ctx, t)
    return _retype(_denote(el.ctx, el.term), src=_obj(el.ctx))


def denote_program(prog: Program) -> QMorphism:
    return denote(prog.inputs, prog.body)
