import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsem import cpm, qcat
from qsem.qlc import (
    BIT,
    COIN,
    COIN_OPEN,
    QUBIT,
    TELEPORT,
    DuplicatedUse,
    QlcSyntaxError,
    Sum,
    Tensor,
    TypeMismatch,
    UnboundVariable,
    UnusedVariable,
    denote,
    denote_program,
    denote_type,
    parse_program,
    parse_term,
    parse_type,
    typecheck,
)

from oracles import partial_trace_loops, random_density

# independent gate table
S2 = 1 / np.sqrt(2)
MATS = {
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1, -1]).astype(complex),
    "H": np.array([[S2, S2], [S2, -S2]], dtype=complex),
    "S": np.diag([1, 1j]),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
}
CNOT = np.eye(4, dtype=complex)[[0, 1, 3, 2]]


def closed(src):
    return denote_program(parse_program(src))


def run_closed(src):
    f = closed(src)
    return qcat.apply(f, [np.eye(1)])


# parsing


def test_parse_types():
    assert parse_type("qubit * qubit") == Tensor(QUBIT, QUBIT)
    assert parse_type("bit + qubit") == Sum(BIT, QUBIT)
    assert denote_type(parse_type("bit * qubit")).dims == (2, 2)
    assert denote_type(parse_type("(qubit + unit) * qubit")).dims == (4, 2)


def test_parse_program_inputs_and_comments():
    prog = parse_program(TELEPORT)
    assert [n for n, _ in prog.inputs] == ["psi"]
    assert parse_program(COIN_OPEN).inputs == [("q", QUBIT)]


@pytest.mark.parametrize(
    "src,loc",
    [
        ("let x = in x", (1, 9)),
        ("measure(H(q)", (1, 13)),
        ("new_qubit(2)", (1, 11)),
        ("x $ y", (1, 3)),
        ("let x = new_qubit(0) in\n  H(x", (2, 6)),
    ],
)
def test_syntax_errors_report_location(src, loc):
    with pytest.raises(QlcSyntaxError) as e:
        parse_term(src)
    assert (e.value.loc.line, e.value.loc.col) == loc


# typing


def test_duplicated_use():
    with pytest.raises(DuplicatedUse) as e:
        typecheck([], parse_term("let x = new_qubit(0) in pair(x, x)"))
    assert e.value.loc.col == 33


def test_unused_variable():
    with pytest.raises(UnusedVariable):
        typecheck([], parse_term("let x = new_qubit(0) in new_qubit(1)"))
    with pytest.raises(UnusedVariable):
        typecheck([("q", QUBIT)], parse_term("new_qubit(0)"))


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        typecheck([], parse_term("H(q)"))


def test_case_branch_mismatch():
    src = "case measure(new_qubit(0)) of inl u -> let () = u in new_qubit(0) | inr u -> u"
    with pytest.raises(TypeMismatch):
        typecheck([], parse_term(src))


def test_case_branches_must_use_same_variables():
    src = "case measure(new_qubit(0)) of inl u -> let () = u in q | inr u -> let () = u in new_qubit(0)"
    with pytest.raises(UnusedVariable):
        typecheck([("q", QUBIT)], parse_term(src))


def test_gate_argument_types():
    with pytest.raises(TypeMismatch):
        typecheck([], parse_term("H(measure(new_qubit(0)))"))
    with pytest.raises(TypeMismatch):
        typecheck([], parse_term("CNOT(new_qubit(0))"))


def test_measure_has_type_bit():
    assert typecheck([], parse_term("let x = new_qubit(0) in measure x")) == BIT
    assert typecheck([], parse_term("pair(measure(new_qubit(0)), new_qubit(1))")) == Tensor(BIT, QUBIT)


# denotation


def test_coin_is_fair():
    (out0, out1) = run_closed(COIN)
    assert np.isclose(out0[0, 0], 0.5) and np.isclose(out1[0, 0], 0.5)
    assert qcat.is_Q(closed(COIN))


def test_open_coin_reads_the_input():
    f = closed(COIN_OPEN)
    plus = np.full((2, 2), 0.5)
    assert np.allclose([o[0, 0] for o in qcat.apply(f, [plus])], [1.0, 0.0])
    assert np.allclose([o[0, 0] for o in qcat.apply(f, [np.diag([0.0, 1.0])])], [0.5, 0.5])


def test_teleport_is_identity():
    f = closed(TELEPORT)
    assert f.src.dims == (2,) and f.dst.dims == (2,)
    assert cpm.equiv(f[0, 0], cpm.identity(2))
    assert qcat.is_Qprime(f)


def test_discard_of_fresh_qubit_is_unit():
    (out,) = run_closed("discard(new_qubit(0))")
    assert np.isclose(out[0, 0], 1.0)


def test_injection_lands_in_its_part():
    outs = run_closed("inr[qubit] (measure(new_qubit(1)))")
    assert [o.shape for o in outs] == [(2, 2), (1, 1), (1, 1)]
    assert np.allclose(outs[2], [[1.0]]) and np.allclose(outs[0], 0)


def test_let_is_composition():
    m = parse_term("H(new_qubit(0))")
    n = parse_term("S(x)")
    whole = denote([], parse_term("let x = H(new_qubit(0)) in S(x)"))
    parts = qcat.compose(denote([("x", QUBIT)], n), denote([], m))
    assert qcat.equiv(whole, parts)


def test_shadowing_and_context_order():
    # the body may consume the two inputs in either order
    f = denote_program(parse_program("input a : qubit\ninput b : qubit\npair(b, a)"))
    rng = np.random.default_rng(0)
    r1, r2 = random_density(2, rng), random_density(2, rng)
    (out,) = qcat.apply(f, [np.kron(r1, r2)])
    assert np.allclose(out, np.kron(r2, r1))


# random programs against a density-matrix simulator


def embed(op, targets, n):
    """Full 2^n operator acting as ``op`` on ``targets`` (big-endian)."""
    k = len(targets)
    full = np.zeros((2**n, 2**n), dtype=complex)
    for x in itertools.product(range(2), repeat=n):
        for y in itertools.product(range(2), repeat=n):
            if any(x[i] != y[i] for i in range(n) if i not in targets):
                continue
            xi = int("".join(str(x[t]) for t in targets), 2) if k else 0
            yi = int("".join(str(y[t]) for t in targets), 2) if k else 0
            full[int("".join(map(str, x)) or "0", 2), int("".join(map(str, y)) or "0", 2)] = op[xi, yi]
    return full


class Sim:
    def __init__(self):
        self.names, self.rho = [], np.eye(1, dtype=complex)

    def new(self, name, b):
        ket = np.zeros((2, 2))
        ket[b, b] = 1
        self.rho = np.kron(self.rho, ket)
        self.names.append(name)

    def gate(self, op, names):
        u = embed(op, [self.names.index(x) for x in names], len(self.names))
        self.rho = u @ self.rho @ u.conj().T

    def trace_out(self, name):
        i = self.names.index(name)
        n = len(self.names)
        self.rho = partial_trace_loops(self.rho, [2] * n, [k for k in range(n) if k != i])
        self.names.pop(i)

    def measure_correct(self, meas, target):
        n, j = len(self.names), self.names.index(meas)
        total = 0
        for k in range(2):
            p = np.zeros((2, 2))
            p[k, k] = 1
            pk = embed(p, [j], n)
            branch = pk @ self.rho @ pk
            keep = [i for i in range(n) if i != j]
            branch = partial_trace_loops(branch, [2] * n, keep)
            if k:
                x = embed(MATS["X"], [keep.index(self.names.index(target))], n - 1)
                branch = x @ branch @ x.conj().T
            total = total + branch
        self.rho = total
        self.names.remove(meas)


@st.composite
def programs(draw, unitary_only=False):
    """A closed program on up to three qubits and the simulator's output state."""
    n = draw(st.integers(1, 3))
    sim, lines = Sim(), []
    for i in range(n):
        b = draw(st.integers(0, 1))
        lines.append(f"let q{i} = new_qubit({b}) in")
        sim.new(f"q{i}", b)
    for _ in range(draw(st.integers(0, 6))):
        live = sim.names
        kinds = ["gate"] + (["cnot"] if len(live) > 1 else [])
        if not unitary_only and len(live) > 1:
            kinds.append("measure")
        kind = draw(st.sampled_from(kinds))
        if kind == "gate":
            g, q = draw(st.sampled_from(sorted(MATS))), draw(st.sampled_from(live))
            lines.append(f"let {q} = {g}({q}) in")
            sim.gate(MATS[g], [q])
        elif kind == "cnot":
            a, b = draw(st.permutations(live))[:2]
            lines.append(f"let ({a}, {b}) = CNOT({a}, {b}) in")
            sim.gate(CNOT, [a, b])
        else:
            m, t = draw(st.permutations(live))[:2]
            lines.append(
                f"let {t} = case measure({m}) of inl u -> let () = u in {t} | inr u -> let () = u in X({t}) in"
            )
            sim.measure_correct(m, t)
    live = list(sim.names)
    # unitary-only programs return every qubit; the others discard all but two
    keep = live if unitary_only else live[:2]
    for q in live[len(keep):]:
        lines.append(f"let () = discard {q} in")
        sim.trace_out(q)
    out = keep[-1]
    for q in reversed(keep[:-1]):
        out = f"pair({q}, {out})"
    lines.append(out)
    return "\n".join(lines), sim.rho


@settings(max_examples=40, deadline=None)
@given(programs())
def test_random_programs_match_simulator(case):
    src, rho = case
    f = closed(src)
    assert qcat.is_Q(f)
    (out,) = qcat.apply(f, [np.eye(1)])
    assert np.allclose(out, rho, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(programs(unitary_only=True))
def test_unitary_programs_are_pure_channels(case):
    src, rho = case
    f = closed(src)
    assert qcat.is_Qprime(f)
    assert len(cpm.choi_to_kraus(f[0, 0]).ops) == 1
    assert np.isclose(np.trace(rho @ rho).real, 1.0)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.sampled_from(sorted(MATS)), max_size=5), st.integers(0, 2**31))
def test_gate_sequence_is_the_product_unitary(gates, seed):
    src = "input q : qubit\n" + "".join(f"let q = {g}(q) in\n" for g in gates) + "q"
    u = np.eye(2, dtype=complex)
    for g in gates:
        u = MATS[g] @ u
    assert cpm.equiv(closed(src)[0, 0], cpm.unitary(u))


@pytest.mark.parametrize(
    "src",
    [TELEPORT, COIN_OPEN, "input q : qubit\nlet () = discard q in new_qubit(1)"],
    ids=["teleport", "open_coin", "discard_then_prepare"],
)
def test_trace_preserving_programs_keep_total_trace(src):
    f = closed(src)
    rng = np.random.default_rng(11)
    for _ in range(5):
        rho = random_density(2, rng)
        outs = qcat.apply(f, [rho])
        assert np.isclose(sum(np.trace(o).real for o in outs), np.trace(rho).real)
