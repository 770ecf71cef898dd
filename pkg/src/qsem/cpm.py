"""Linear maps between operator spaces, stored as Choi matrices.

The Choi matrix of ``F : L(C^din) -> L(C^dout)`` is

    C = sum_ij |i><j| (x) F(|i><j|)

with the input factor first, so ``C`` has side ``din * dout`` and
``C[(i, a), (j, b)] = F(|i><j|)[a, b]``.  Complete positivity is positivity of
``C``; the trace conditions are conditions on ``tr_out C``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    approx_eq,
    as_matrix,
    is_psd,
    matrix_from_json,
    matrix_to_json,
    maxabs,
    partial_trace,
)

__all__ = [
    "HObject",
    "LinMap",
    "KrausSet",
    "NotCompletelyPositive",
    "apply",
    "kraus_to_choi",
    "choi_to_kraus",
    "is_completely_positive",
    "is_trace_preserving",
    "is_trace_nonincreasing",
    "is_Qs",
    "is_Qs_prime",
    "trace_functional",
    "compose",
    "identity",
    "zero",
    "discard",
    "unitary",
    "add",
    "scale",
    "equiv",
    "phi_iso_index",
    "to_liouville",
    "from_liouville",
    "tensor_map",
    "random_kraus",
    "random_cp_map",
    "random_tp_map",
    "random_tni_map",
    "random_density",
]


class NotCompletelyPositive(ValueError):
    """Raised when a Choi matrix is not positive semidefinite."""


@dataclass(frozen=True)
class HObject:
    """A labelled finite dimensional Hilbert space ``C^dim``."""

    label: str
    dim: int

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")

    def __str__(self):
        return self.label

    def to_json(self) -> dict:
        return {"label": self.label, "dim": self.dim}

    @classmethod
    def from_json(cls, data: dict) -> "HObject":
        return cls(str(data["label"]), int(data["dim"]))


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.array(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class LinMap:
    din: int
    dout: int
    choi: np.ndarray = field(repr=False)

    def __post_init__(self):
        side = self.din * self.dout
        choi = as_matrix(self.choi)
        if choi.shape != (side, side):
            raise ValueError(
                f"Choi matrix of shape {choi.shape} does not fit {self.din}->{self.dout}"
            )
        object.__setattr__(self, "choi", _frozen(choi))

    def __repr__(self):
        return f"LinMap({self.din}->{self.dout})"

    def __call__(self, rho) -> np.ndarray:
        return apply(self, rho)

    def to_json(self) -> dict:
        return {"din": self.din, "dout": self.dout, "choi": matrix_to_json(self.choi)}

    @classmethod
    def from_json(cls, data: dict) -> "LinMap":
        return cls(int(data["din"]), int(data["dout"]), matrix_from_json(data["choi"]))


@dataclass(frozen=True, eq=False)
class KrausSet:
    din: int
    dout: int
    ops: tuple = field(repr=False)

    def __post_init__(self):
        ops = tuple(_frozen(as_matrix(k)) for k in self.ops)
        if not ops:
            raise ValueError("a Kraus set needs at least one operator")
        for k in ops:
            if k.shape != (self.dout, self.din):
                raise ValueError(f"Kraus operator of shape {k.shape}, expected {(self.dout, self.din)}")
        object.__setattr__(self, "ops", ops)

    @classmethod
    def of(cls, ops: Sequence) -> "KrausSet":
        first = as_matrix(ops[0])
        return cls(first.shape[1], first.shape[0], tuple(ops))

    def __repr__(self):
        return f"KrausSet({self.din}->{self.dout}, {len(self.ops)} ops)"

    def to_json(self) -> dict:
        return {"din": self.din, "dout": self.dout, "ops": [matrix_to_json(k) for k in self.ops]}

    @classmethod
    def from_json(cls, data: dict) -> "KrausSet":
        return cls(int(data["din"]), int(data["dout"]), tuple(matrix_from_json(k) for k in data["ops"]))


def _blocks(f: LinMap) -> np.ndarray:
    # axes (i, a, j, b)
    return f.choi.reshape(f.din, f.dout, f.din, f.dout)


def apply(f: LinMap, rho) -> np.ndarray:
    """Image of ``rho`` under the map encoded by ``f.choi``."""
    rho = as_matrix(rho)
    if rho.shape != (f.din, f.din):
        raise ValueError(f"input of shape {rho.shape} for a map with din={f.din}")
    return np.einsum("ij,iajb->ab", rho, _blocks(f))


def kraus_to_choi(k: KrausSet) -> LinMap:
    vecs = np.stack([op.T.reshape(-1) for op in k.ops])
    return LinMap(k.din, k.dout, vecs.T @ vecs.conj())


def choi_to_kraus(f: LinMap, tol: Tolerance = DEFAULT_TOL) -> KrausSet:
    """Kraus decomposition from the spectral decomposition of the Choi matrix.

    Eigenvalues at or below ``eps_psd * (1 + maxabs(choi))`` are dropped.
    """
    if not is_psd(f.choi, tol):
        raise NotCompletelyPositive(f"Choi matrix of {f!r} is not positive semidefinite")
    herm = (f.choi + f.choi.conj().T) / 2
    evals, evecs = np.linalg.eigh(herm)
    cutoff = tol.eps_psd * (1.0 + maxabs(f.choi))
    ops = [
        math.sqrt(lam) * evecs[:, n].reshape(f.din, f.dout).T
        for n, lam in enumerate(evals)
        if lam > cutoff
    ]
    if not ops:
        ops = [np.zeros((f.dout, f.din))]
    return KrausSet(f.din, f.dout, tuple(ops))


def is_completely_positive(f: LinMap, tol: Tolerance = DEFAULT_TOL) -> bool:
    return is_psd(f.choi, tol)


def trace_functional(f: LinMap) -> np.ndarray:
    """The ``din x din`` matrix ``M`` with ``tr F(rho) = tr(rho M^T)``."""
    return partial_trace(f.choi, [f.din, f.dout], keep=[0])


def is_trace_preserving(f: LinMap, tol: Tolerance = DEFAULT_TOL) -> bool:
    return approx_eq(trace_functional(f), np.eye(f.din), tol)


def is_trace_nonincreasing(f: LinMap, tol: Tolerance = DEFAULT_TOL) -> bool:
    m = trace_functional(f)
    return is_psd(np.eye(f.din) - m.T, tol)


def is_Qs(f: LinMap, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Morphism of Q_s: completely positive and trace non-increasing."""
    return is_completely_positive(f, tol) and is_trace_nonincreasing(f, tol)


def is_Qs_prime(f: LinMap, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Morphism of Q'_s: completely positive and trace preserving."""
    return is_completely_positive(f, tol) and is_trace_preserving(f, tol)


def compose(g: LinMap, f: LinMap) -> LinMap:
    """``g o f``; each Choi block of ``f`` is pushed through ``g``."""
    if f.dout != g.din:
        raise ValueError(f"cannot compose {g!r} after {f!r}")
    # contract over (a, b) as one matrix product: (ij, ab) @ (ab, cd)
    n, m, k = f.din, f.dout, g.dout
    fb = _blocks(f).transpose(0, 2, 1, 3).reshape(n * n, m * m)
    gb = _blocks(g).transpose(0, 2, 1, 3).reshape(m * m, k * k)
    blocks = (fb @ gb).reshape(n, n, k, k).transpose(0, 2, 1, 3)
    return LinMap(n, k, blocks.reshape(n * k, n * k))


def identity(d: int) -> LinMap:
    return kraus_to_choi(KrausSet(d, d, (np.eye(d),)))


def zero(din: int, dout: int) -> LinMap:
    side = din * dout
    return LinMap(din, dout, np.zeros((side, side)))


def discard(d: int) -> LinMap:
    """The trace ``rho -> tr(rho)``, the unique trace preserving map to ``C^1``."""
    return LinMap(d, 1, np.eye(d))


def unitary(u) -> LinMap:
    """``rho -> U rho U^dagger``."""
    return kraus_to_choi(KrausSet.of([u]))


def add(f: LinMap, g: LinMap) -> LinMap:
    if (f.din, f.dout) != (g.din, g.dout):
        raise ValueError(f"cannot add {f!r} and {g!r}")
    return LinMap(f.din, f.dout, f.choi + g.choi)


def scale(c: complex, f: LinMap) -> LinMap:
    return LinMap(f.din, f.dout, c * f.choi)


def equiv(f: LinMap, g: LinMap, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Equality of the encoded maps (Choi matrices agree within tolerance)."""
    return (f.din, f.dout) == (g.din, g.dout) and approx_eq(f.choi, g.choi, tol)


def phi_iso_index(dV: int, dW: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinate bijection for ``L(V (x) W) -> L(V) (x) L(W)``.

    Returns ``(fwd, inv)``: entry ``k`` of the row-major flattening of an
    operator on ``V (x) W`` lands at coordinate ``fwd[k]`` of
    ``vec L(V) (x) vec L(W)``; ``inv`` undoes it.
    """
    i, k, j, l = np.unravel_index(np.arange((dV * dW) ** 2), (dV, dW, dV, dW))
    fwd = np.ravel_multi_index((i, j, k, l), (dV, dV, dW, dW))
    inv = np.empty_like(fwd)
    inv[fwd] = np.arange(fwd.size)
    return fwd, inv


def to_liouville(f: LinMap) -> np.ndarray:
    """Matrix ``S`` with ``vec(F(rho)) = S vec(rho)`` (row-major vec)."""
    return _blocks(f).transpose(1, 3, 0, 2).reshape(f.dout**2, f.din**2)


def from_liouville(s, din: int, dout: int) -> LinMap:
    s = as_matrix(s)
    blocks = s.reshape(dout, dout, din, din).transpose(2, 0, 3, 1)
    return LinMap(din, dout, blocks.reshape(din * dout, din * dout))


def tensor_map(f: LinMap, g: LinMap) -> LinMap:
    """``phi^-1 o (f (x) g) o phi`` on ``L(V (x) W)``."""
    fwd_in, _ = phi_iso_index(f.din, g.din)
    fwd_out, _ = phi_iso_index(f.dout, g.dout)
    prod = np.kron(to_liouville(f), to_liouville(g))
    # S[p, q] = prod[phi(p), phi(q)]
    s = prod[np.ix_(fwd_out, fwd_in)]
    return from_liouville(s, f.din * g.din, f.dout * g.dout)


# Random generators for the law suites.


def random_kraus(din: int, dout: int, n_ops: int, rng: np.random.Generator) -> KrausSet:
    shape = (n_ops, dout, din)
    ops = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2)
    return KrausSet(din, dout, tuple(ops))


def random_cp_map(din: int, dout: int, rng: np.random.Generator, n_ops: int | None = None) -> LinMap:
    n_ops = n_ops or int(rng.integers(1, 5))
    return kraus_to_choi(random_kraus(din, dout, n_ops, rng))


def _tp_normalize(k: KrausSet) -> KrausSet:
    s = sum(op.conj().T @ op for op in k.ops)
    evals, evecs = np.linalg.eigh(s)
    inv_sqrt = evecs @ np.diag(evals**-0.5) @ evecs.conj().T
    return KrausSet(k.din, k.dout, tuple(op @ inv_sqrt for op in k.ops))


def random_tp_map(din: int, dout: int, rng: np.random.Generator, n_ops: int | None = None) -> LinMap:
    """Gaussian Kraus operators normalized by ``(sum F_i^dagger F_i)^(-1/2)``."""
    n_ops = n_ops or int(rng.integers(1, 5))
    if dout * n_ops < din:
        n_ops = -(-din // dout)
    return kraus_to_choi(_tp_normalize(random_kraus(din, dout, n_ops, rng)))


def random_tni_map(din: int, dout: int, rng: np.random.Generator, n_ops: int | None = None) -> LinMap:
    return scale(float(rng.uniform(0.0, 1.0)), random_tp_map(din, dout, rng, n_ops))


def random_density(d: int, rng: np.random.Generator) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real
