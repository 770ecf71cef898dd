"""Types, terms and a recursive-descent parser for the first-order language.

Grammar (``#`` starts a line comment)::

    program  ::= ("input" IDENT ":" type)* term
    type     ::= prod ("+" type)?
    prod     ::= atomty ("*" prod)?
    atomty   ::= "qubit" | "bit" | "unit" | "(" type ")"
    term     ::= "let" pat "=" term "in" term
               | "case" term "of" "inl" IDENT "->" term "|" "inr" IDENT "->" term
               | app
    pat      ::= IDENT | "(" IDENT "," IDENT ")" | "(" ")"
    app      ::= "new_qubit" "(" ("0"|"1") ")"
               | GATE "(" term ("," term)* ")"
               | ("measure" | "discard") atom
               | ("inl" | "inr") "[" type "]" atom
               | "pair" "(" term "," term ")"
               | atom
    atom     ::= IDENT | "(" ")" | "(" term ")" | "(" term "," term ")"

``GATE`` is one of X Y Z H S T CNOT.  Several gate arguments are paired.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "Loc",
    "QlcError",
    "QlcSyntaxError",
    "UnboundVariable",
    "UnusedVariable",
    "DuplicatedUse",
    "TypeMismatch",
    "QlcType",
    "Qubit",
    "Bit",
    "Unit",
    "Tensor",
    "Sum",
    "QUBIT",
    "BIT",
    "UNIT",
    "types_equal",
    "Term",
    "Var",
    "UnitVal",
    "Pair",
    "Let",
    "LetPair",
    "LetUnit",
    "NewQubit",
    "Gate",
    "Measure",
    "Discard",
    "Inj",
    "Case",
    "GATE_ARITY",
    "Program",
    "parse_type",
    "parse_term",
    "parse_program",
]


@dataclass(frozen=True)
class Loc:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


class QlcError(Exception):
    def __init__(self, message: str, loc: Loc | None = None):
        self.loc = loc
        super().__init__(f"{loc}: {message}" if loc else message)


class QlcSyntaxError(QlcError):
    pass


class UnboundVariable(QlcError):
    pass


class UnusedVariable(QlcError):
    pass


class DuplicatedUse(QlcError):
    pass


class TypeMismatch(QlcError):
    pass


# Types


class QlcType:
    pass


@dataclass(frozen=True)
class Qubit(QlcType):
    def __str__(self):
        return "qubit"


@dataclass(frozen=True)
class Bit(QlcType):
    def __str__(self):
        return "bit"


@dataclass(frozen=True)
class Unit(QlcType):
    def __str__(self):
        return "unit"


@dataclass(frozen=True)
class Tensor(QlcType):
    left: QlcType
    right: QlcType

    def __str__(self):
        return f"({self.left} * {self.right})"


@dataclass(frozen=True)
class Sum(QlcType):
    left: QlcType
    right: QlcType

    def __str__(self):
        return f"({self.left} + {self.right})"


QUBIT, BIT, UNIT = Qubit(), Bit(), Unit()


def _norm(t: QlcType) -> QlcType:
    # bit is a name for unit + unit
    if isinstance(t, Bit):
        return Sum(UNIT, UNIT)
    if isinstance(t, Tensor):
        return Tensor(_norm(t.left), _norm(t.right))
    if isinstance(t, Sum):
        return Sum(_norm(t.left), _norm(t.right))
    return t


def types_equal(a: QlcType, b: QlcType) -> bool:
    return _norm(a) == _norm(b)


# Terms


@dataclass(eq=False)
class Term:
    loc: Loc | None = field(default=None, kw_only=True)


@dataclass(eq=False)
class Var(Term):
    name: str


@dataclass(eq=False)
class UnitVal(Term):
    pass


@dataclass(eq=False)
class Pair(Term):
    left: Term
    right: Term


@dataclass(eq=False)
class Let(Term):
    name: str
    bound: Term
    body: Term


@dataclass(eq=False)
class LetPair(Term):
    left: str
    right: str
    bound: Term
    body: Term


@dataclass(eq=False)
class LetUnit(Term):
    bound: Term
    body: Term


@dataclass(eq=False)
class NewQubit(Term):
    value: int


GATE_ARITY = {"X": 1, "Y": 1, "Z": 1, "H": 1, "S": 1, "T": 1, "CNOT": 2}


@dataclass(eq=False)
class Gate(Term):
    name: str
    args: list


@dataclass(eq=False)
class Measure(Term):
    arg: Term


@dataclass(eq=False)
class Discard(Term):
    arg: Term


@dataclass(eq=False)
class Inj(Term):
    """``side`` 0 is ``inl`` (``other`` is the right summand), 1 is ``inr``."""

    side: int
    other: QlcType
    arg: Term


@dataclass(eq=False)
class Case(Term):
    scrutinee: Term
    left_var: str
    left: Term
    right_var: str
    right: Term


@dataclass
class Program:
    inputs: list  # of (name, QlcType)
    body: Term


# Lexer

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<arrow>->) | (?P<num>[0-9]+) | (?P<ident>[A-Za-z_][A-Za-z_0-9']*)
  | (?P<sym>[()\[\],=:|*+])
    """,
    re.VERBOSE,
)

KEYWORDS = {
    "let", "in", "case", "of", "inl", "inr", "new_qubit", "measure", "discard", "pair",
    "input", "qubit", "bit", "unit",
} | set(GATE_ARITY)


@dataclass
class _Tok:
    kind: str
    text: str
    loc: Loc


def _lex(text: str) -> list[_Tok]:
    toks, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise QlcSyntaxError(f"unexpected character {text[pos]!r}", Loc(line, pos - start + 1))
        kind = m.lastgroup
        loc = Loc(line, pos - start + 1)
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            word = m.group()
            if kind == "ident" and word in KEYWORDS:
                kind = "kw"
            toks.append(_Tok(kind, word, loc))
        pos = m.end()
    toks.append(_Tok("eof", "", Loc(line, pos - start + 1)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("kw", "sym", "arrow", "num")

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            raise QlcSyntaxError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.loc)
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        if self.tok.kind != "ident":
            raise QlcSyntaxError(f"expected a variable, found {self.tok.text or 'end of input'!r}", self.tok.loc)
        t = self.tok
        self.i += 1
        return t.text

    def eof(self):
        if self.tok.kind != "eof":
            raise QlcSyntaxError(f"unexpected {self.tok.text!r}", self.tok.loc)

    # types

    def type(self) -> QlcType:
        left = self.prod()
        if self.at("+"):
            self.i += 1
            return Sum(left, self.type())
        return left

    def prod(self) -> QlcType:
        left = self.atomty()
        if self.at("*"):
            self.i += 1
            return Tensor(left, self.prod())
        return left

    def atomty(self) -> QlcType:
        t = self.tok
        if t.text in ("qubit", "bit", "unit") and t.kind == "kw":
            self.i += 1
            return {"qubit": QUBIT, "bit": BIT, "unit": UNIT}[t.text]
        if self.at("("):
            self.i += 1
            ty = self.type()
            self.expect(")")
            return ty
        raise QlcSyntaxError(f"expected a type, found {t.text or 'end of input'!r}", t.loc)

    # terms

    def term(self) -> Term:
        t = self.tok
        if self.at("let"):
            self.i += 1
            if self.at("("):
                self.i += 1
                if self.at(")"):
                    self.i += 1
                    self.expect("=")
                    bound = self.term()
                    self.expect("in")
                    return LetUnit(bound, self.term(), loc=t.loc)
                x = self.ident()
                self.expect(",")
                y = self.ident()
                self.expect(")")
                self.expect("=")
                bound = self.term()
                self.expect("in")
                return LetPair(x, y, bound, self.term(), loc=t.loc)
            x = self.ident()
            self.expect("=")
            bound = self.term()
            self.expect("in")
            return Let(x, bound, self.term(), loc=t.loc)
        if self.at("case"):
            self.i += 1
            scrutinee = self.term()
            self.expect("of")
            self.expect("inl")
            x = self.ident()
            self.expect("->")
            left = self.term()
            self.expect("|")
            self.expect("inr")
            y = self.ident()
            self.expect("->")
            right = self.term()
            return Case(scrutinee, x, left, y, right, loc=t.loc)
        return self.app()

    def app(self) -> Term:
        t = self.tok
        if t.kind == "kw" and t.text == "new_qubit":
            self.i += 1
            self.expect("(")
            v = self.tok
            if v.text not in ("0", "1"):
                raise QlcSyntaxError("new_qubit takes 0 or 1", v.loc)
            self.i += 1
            self.expect(")")
            return NewQubit(int(v.text), loc=t.loc)
        if t.kind == "kw" and t.text in GATE_ARITY:
            self.i += 1
            self.expect("(")
            args = [self.term()]
            while self.at(","):
                self.i += 1
                args.append(self.term())
            self.expect(")")
            return Gate(t.text, args, loc=t.loc)
        if t.kind == "kw" and t.text in ("measure", "discard"):
            self.i += 1
            arg = self.atom()
            return Measure(arg, loc=t.loc) if t.text == "measure" else Discard(arg, loc=t.loc)
        if t.kind == "kw" and t.text in ("inl", "inr"):
            self.i += 1
            self.expect("[")
            other = self.type()
            self.expect("]")
            return Inj(0 if t.text == "inl" else 1, other, self.atom(), loc=t.loc)
        if t.kind == "kw" and t.text == "pair":
            self.i += 1
            self.expect("(")
            a = self.term()
            self.expect(",")
            b = self.term()
            self.expect(")")
            return Pair(a, b, loc=t.loc)
        return self.atom()

    def atom(self) -> Term:
        t = self.tok
        if t.kind == "ident":
            self.i += 1
            return Var(t.text, loc=t.loc)
        if self.at("("):
            self.i += 1
            if self.at(")"):
                self.i += 1
                return UnitVal(loc=t.loc)
            a = self.term()
            if self.at(","):
                self.i += 1
                b = self.term()
                self.expect(")")
                return Pair(a, b, loc=t.loc)
            self.expect(")")
            return a
        raise QlcSyntaxError(f"expected a term, found {t.text or 'end of input'!r}", t.loc)


def parse_type(text: str) -> QlcType:
    p = _Parser(text)
    ty = p.type()
    p.eof()
    return ty


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.eof()
    return t


def parse_program(text: str) -> Program:
    p = _Parser(text)
    inputs = []
    while p.at("input"):
        p.i += 1
        name = p.ident()
        p.expect(":")
        inputs.append((name, p.type()))
    body = p.term()
    p.eof()
    return Program(inputs, body)
