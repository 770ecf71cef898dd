"""Dense complex linear algebra kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Tensor
products use the big-endian basis convention: the basis vector of
``V (x) W`` at index ``i * dim(W) + j`` is ``e_i (x) e_j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "tensor",
    "tensor_all",
    "partial_trace",
    "permutation_unitary",
    "is_hermitian",
    "is_psd",
    "approx_eq",
    "maxabs",
    "matrix_to_json",
    "matrix_from_json",
]


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerances for equality and positivity tests."""

    eps_eq: float = 1e-9
    eps_psd: float = 1e-9

    def __post_init__(self):
        if not (self.eps_eq > 0 and self.eps_psd > 0):
            raise ValueError(f"tolerances must be positive, got {self}")

    def to_json(self) -> dict:
        return {"eps_eq": self.eps_eq, "eps_psd": self.eps_psd}

    @classmethod
    def from_json(cls, data: dict) -> "Tolerance":
        return cls(float(data.get("eps_eq", 1e-9)), float(data.get("eps_psd", 1e-9)))


DEFAULT_TOL = Tolerance()


def as_matrix(m, copy: bool = False) -> np.ndarray:
    """Coerce ``m`` to a finite 2-d ``complex128`` array."""
    arr = np.array(m, dtype=np.complex128, copy=copy or None)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a nonempty 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix has NaN or infinite entries")
    return arr


def maxabs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def tensor(a, b) -> np.ndarray:
    """Kronecker product in the big-endian convention."""
    return np.kron(as_matrix(a), as_matrix(b))


def tensor_all(ms: Iterable) -> np.ndarray:
    """Left-folded tensor product; the empty product is the 1x1 identity."""
    return reduce(tensor, ms, np.ones((1, 1), dtype=np.complex128))


def partial_trace(m, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out every factor not in ``keep``.

    Kept factors stay in their original relative order.  Keeping nothing
    returns the 1x1 matrix holding the full trace.
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError(f"dimensions must be positive: {dims}")
    total = math.prod(dims)
    if m.shape != (total, total):
        raise ValueError(f"matrix of shape {m.shape} does not match dims {dims}")
    keep = sorted(set(keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep={keep} out of range for {n} factors")
    t = m.reshape(dims + dims)
    rows = list(range(n))
    cols = [i if i not in keep else n + i for i in range(n)]
    out = keep + [n + k for k in keep]
    side = math.prod(dims[k] for k in keep)
    return np.einsum(t, rows + cols, out).reshape(side, side)


def _check_perm(perm: Sequence[int], n: int) -> list[int]:
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} factors")
    return perm


def permutation_unitary(dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Permutation matrix moving tensor factor ``i`` to position ``perm[i]``.

    ``U (v_1 (x) ... (x) v_n) = v_{perm^-1(1)} (x) ... (x) v_{perm^-1(n)}``, so
    the codomain dimensions are ``dims`` permuted the same way.
    """
    dims = [int(d) for d in dims]
    perm = _check_perm(perm, len(dims))
    inv = np.argsort(perm)
    total = math.prod(dims)
    idx = np.arange(total).reshape(dims) if dims else np.arange(1)
    src = idx.transpose(inv).reshape(-1) if dims else idx
    u = np.zeros((total, total), dtype=np.complex128)
    u[np.arange(total), src] = 1.0
    return u


def is_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        return False
    return maxabs(m - m.conj().T) <= tol.eps_eq * (1.0 + maxabs(m))


def is_psd(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Hermitian within tolerance and no eigenvalue below ``-eps_psd * (1 + maxabs)``."""
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"is_psd needs a square matrix, got {m.shape}")
    if not is_hermitian(m, tol):
        return False
    evals = np.linalg.eigvalsh((m + m.conj().T) / 2)
    return bool(evals.min() >= -tol.eps_psd * (1.0 + maxabs(m)))


def approx_eq(a, b, tol: Tolerance = DEFAULT_TOL) -> bool:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    scale = 1.0 + max(maxabs(a), maxabs(b))
    return bool(np.all(np.abs(a - b) <= tol.eps_eq * scale))


def matrix_to_json(m) -> dict:
    m = as_matrix(m)
    rows, cols = m.shape
    entries = [[float(z.real), float(z.imag)] for z in m.reshape(-1)]
    return {"rows": rows, "cols": cols, "entries": entries}


def matrix_from_json(data: dict) -> np.ndarray:
    rows, cols = int(data["rows"]), int(data["cols"])
    entries = data["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return as_matrix(flat.reshape(rows, cols))
