"""A first-order linear quantum language: parser, typechecker and denotation into ``Q``."""

from .denote import GATES, denote, denote_program, denote_type, discard_morphism, measurement
from .syntax import (
    BIT,
    QUBIT,
    UNIT,
    Bit,
    DuplicatedUse,
    Program,
    QlcError,
    QlcSyntaxError,
    QlcType,
    Qubit,
    Sum,
    Tensor,
    TypeMismatch,
    UnboundVariable,
    Unit,
    UnusedVariable,
    parse_program,
    parse_term,
    parse_type,
)
from .typecheck import TypingContext, elaborate, typecheck

COIN = "measure(H(new_qubit(0)))"

COIN_OPEN = """\
input q : qubit
measure(H(q))
"""

TELEPORT = """\
# Alice holds psi; a Bell pair is shared between a (Alice) and b (Bob).
input psi : qubit
let a = new_qubit(0) in
let b = new_qubit(0) in
let (a, b) = CNOT(H(a), b) in
let (p, a) = CNOT(psi, a) in
let mx = measure(a) in
let mz = measure(H(p)) in
let b = case mx of inl u -> let () = u in b | inr u -> let () = u in X(b) in
case mz of inl u -> let () = u in b | inr u -> let () = u in Z(b)
"""

__all__ = [
    "GATES",
    "denote",
    "denote_program",
    "denote_type",
    "discard_morphism",
    "measurement",
    "BIT",
    "QUBIT",
    "UNIT",
    "Bit",
    "Qubit",
    "Unit",
    "Sum",
    "Tensor",
    "QlcType",
    "Program",
    "QlcError",
    "QlcSyntaxError",
    "UnboundVariable",
    "UnusedVariable",
    "DuplicatedUse",
    "TypeMismatch",
    "parse_program",
    "parse_term",
    "parse_type",
    "TypingContext",
    "elaborate",
    "typecheck",
    "COIN",
    "COIN_OPEN",
    "TELEPORT",
]
