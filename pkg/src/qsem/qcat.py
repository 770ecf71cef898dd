"""Finite families of Hilbert spaces with matrices of linear maps.

A ``QObject`` is a sequence of ``HObject`` parts; a ``QMorphism`` from
``(V_1..V_n)`` to ``(W_1..W_m)`` is an ``m x n`` matrix whose ``(i, j)`` entry
is a ``LinMap`` ``V_j -> W_i``.  Composition is matrix multiplication with
sums of Choi matrices.  The same data serve CPM, Q and Q'; membership is a
predicate.

Labels on parts are descriptive.  Composability only needs the part
dimensions to agree, since the entries only see dimensions.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import cpm
from .cpm import HObject, LinMap
from .linalg import DEFAULT_TOL, Tolerance, approx_eq, is_psd, permutation_unitary

__all__ = [
    "QObject",
    "QMorphism",
    "UNIT",
    "ZERO",
    "unit",
    "obj",
    "identity",
    "zero",
    "compose",
    "add",
    "equiv",
    "apply",
    "is_CPM",
    "is_Q",
    "is_Qprime",
    "column_trace_functionals",
    "trace_violation_witness",
    "reindex",
    "coproduct",
    "coproduct_all",
    "injection",
    "copair",
    "copair_all",
    "tensor_label",
    "tensor_obj",
    "tensor_objs",
    "tensor_mor",
    "permute_factors",
    "symmetry",
    "associator",
    "left_unitor",
    "right_unitor",
    "distributivity_iso",
    "distributivity_inverse",
    "inverse",
    "random_morphism",
]


@dataclass(frozen=True)
class QObject:
    parts: tuple[HObject, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(p.dim for p in self.parts)

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.parts) + ")"

    def to_json(self) -> list:
        return [p.to_json() for p in self.parts]

    @classmethod
    def from_json(cls, data: list) -> "QObject":
        return cls(tuple(HObject.from_json(p) for p in data))


def obj(*dims: int) -> QObject:
    """Shorthand family with parts labelled ``C<dim>``."""
    return QObject(tuple(HObject(f"C{d}", d) for d in dims))


UNIT = QObject((HObject("I", 1),))
ZERO = QObject(())


def unit() -> QObject:
    return UNIT


@dataclass(frozen=True, eq=False)
class QMorphism:
    src: QObject
    dst: QObject
    entries: tuple[tuple[LinMap, ...], ...]

    def __post_init__(self):
        entries = tuple(tuple(row) for row in self.entries)
        if len(entries) != len(self.dst):
            raise ValueError(f"{len(entries)} rows for a codomain with {len(self.dst)} parts")
        for i, row in enumerate(entries):
            if len(row) != len(self.src):
                raise ValueError(f"row {i} has {len(row)} entries, expected {len(self.src)}")
            for j, f in enumerate(row):
                if (f.din, f.dout) != (self.src[j].dim, self.dst[i].dim):
                    raise ValueError(
                        f"entry ({i},{j}) is {f!r}, expected {self.src[j].dim}->{self.dst[i].dim}"
                    )
        object.__setattr__(self, "entries", entries)

    def __getitem__(self, ij) -> LinMap:
        i, j = ij
        return self.entries[i][j]

    def __repr__(self):
        return f"QMorphism({self.src} -> {self.dst})"

    def to_json(self) -> dict:
        return {
            "src": self.src.to_json(),
            "dst": self.dst.to_json(),
            "entries": [[f.to_json() for f in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QMorphism":
        return cls(
            QObject.from_json(data["src"]),
            QObject.from_json(data["dst"]),
            tuple(tuple(LinMap.from_json(f) for f in row) for row in data["entries"]),
        )


def _build(src: QObject, dst: QObject, entry) -> QMorphism:
    return QMorphism(
        src, dst, tuple(tuple(entry(i, j) for j in range(len(src))) for i in range(len(dst)))
    )


def zero(src: QObject, dst: QObject) -> QMorphism:
    return _build(src, dst, lambda i, j: cpm.zero(src[j].dim, dst[i].dim))


def reindex(src: QObject, dst: QObject, mapping: Sequence[int]) -> QMorphism:
    """Identity entries ``src[j] -> dst[mapping[j]]``, zero elsewhere."""
    if len(mapping) != len(src):
        raise ValueError("mapping must have one target per source part")
    for j, i in enumerate(mapping):
        if src[j].dim != dst[i].dim:
            raise ValueError(f"part {j} of {src} cannot be sent to part {i} of {dst}")

    def entry(i, j):
        d_in, d_out = src[j].dim, dst[i].dim
        return cpm.identity(d_in) if mapping[j] == i else cpm.zero(d_in, d_out)

    return _build(src, dst, entry)


def identity(x: QObject) -> QMorphism:
    return reindex(x, x, range(len(x)))


def compose(g: QMorphism, f: QMorphism) -> QMorphism:
    if f.dst.dims != g.src.dims:
        raise ValueError(f"cannot compose {g!r} after {f!r}")

    def entry(i, k):
        acc = cpm.zero(f.src[k].dim, g.dst[i].dim)
        for j in range(len(f.dst)):
            # zero blocks are common (reindexings, injections); skip them
            if g[i, j].choi.any() and f[j, k].choi.any():
                acc = cpm.add(acc, cpm.compose(g[i, j], f[j, k]))
        return acc

    return _build(f.src, g.dst, entry)


def add(f: QMorphism, g: QMorphism) -> QMorphism:
    if (f.src.dims, f.dst.dims) != (g.src.dims, g.dst.dims):
        raise ValueError(f"cannot add {f!r} and {g!r}")
    return _build(f.src, f.dst, lambda i, j: cpm.add(f[i, j], g[i, j]))


def equiv(f: QMorphism, g: QMorphism, tol: Tolerance = DEFAULT_TOL) -> bool:
    if (f.src.dims, f.dst.dims) != (g.src.dims, g.dst.dims):
        return False
    return all(
        cpm.equiv(f[i, j], g[i, j], tol) for i in range(len(f.dst)) for j in range(len(f.src))
    )


def apply(f: QMorphism, states: Sequence) -> list[np.ndarray]:
    """Push a family of (unnormalized) states through ``f``."""
    if len(states) != len(f.src):
        raise ValueError(f"{len(states)} input states for {f!r}")
    outs = []
    for i, w in enumerate(f.dst):
        acc = np.zeros((w.dim, w.dim), dtype=np.complex128)
        for j, rho in enumerate(states):
            acc = acc + cpm.apply(f[i, j], rho)
        outs.append(acc)
    return outs


def is_CPM(f: QMorphism, tol: Tolerance = DEFAULT_TOL) -> bool:
    return all(cpm.is_completely_positive(e, tol) for row in f.entries for e in row)


def column_trace_functionals(f: QMorphism) -> list[np.ndarray]:
    """Per source part ``j``, the sum over ``i`` of the trace functionals of ``F_ij``."""
    cols = []
    for j, v in enumerate(f.src):
        m = np.zeros((v.dim, v.dim), dtype=np.complex128)
        for i in range(len(f.dst)):
            m = m + cpm.trace_functional(f[i, j])
        cols.append(m)
    return cols


def is_Qprime(f: QMorphism, tol: Tolerance = DEFAULT_TOL) -> bool:
    if not is_CPM(f, tol):
        return False
    return all(
        approx_eq(m, np.eye(m.shape[0]), tol) for m in column_trace_functionals(f)
    )


def is_Q(f: QMorphism, tol: Tolerance = DEFAULT_TOL) -> bool:
    if not is_CPM(f, tol):
        return False
    return all(is_psd(np.eye(m.shape[0]) - m.T, tol) for m in column_trace_functionals(f))


def trace_violation_witness(f: QMorphism):
    """Return ``(j, rho)`` maximizing ``sum_i tr F_ij(rho) - tr(rho)`` over pure states.

    The excess is positive exactly when column ``j`` breaks trace
    non-increase; callers compare the returned excess against a tolerance.
    """
    best = None
    for j, m in enumerate(column_trace_functionals(f)):
        h = (m.T + m.conj()) / 2 - np.eye(m.shape[0])
        evals, evecs = np.linalg.eigh(h)
        if best is None or evals[-1] > best[0]:
            v = evecs[:, -1:]
            best = (float(evals[-1]), j, v @ v.conj().T)
    if best is None:
        return None
    excess, j, rho = best
    return j, rho, excess


# Coproducts


def coproduct_all(xs: Sequence[QObject]) -> QObject:
    return QObject(tuple(p for x in xs for p in x))


def coproduct(x: QObject, y: QObject) -> tuple[QObject, QMorphism, QMorphism]:
    s = coproduct_all([x, y])
    return s, injection([x, y], 0), injection([x, y], 1)


def injection(xs: Sequence[QObject], k: int) -> QMorphism:
    offset = sum(len(x) for x in xs[:k])
    return reindex(xs[k], coproduct_all(xs), [offset + j for j in range(len(xs[k]))])


def copair_all(fs: Sequence[QMorphism], dst: QObject | None = None) -> QMorphism:
    if dst is None:
        if not fs:
            raise ValueError("copairing no morphisms needs an explicit codomain")
        dst = fs[0].dst
    for f in fs:
        if f.dst.dims != dst.dims:
            raise ValueError(f"copair needs a common codomain, got {f.dst} and {dst}")
    src = coproduct_all([f.src for f in fs])
    cols = [[f[i, j] for i in range(len(dst))] for f in fs for j in range(len(f.src))]
    return _build(src, dst, lambda i, j: cols[j][i])


def copair(f: QMorphism, g: QMorphism) -> QMorphism:
    return copair_all([f, g])


# Tensor


def tensor_label(a: str, b: str) -> str:
    return f"{a}⊗{b}"


def _tensor_part(a: HObject, b: HObject) -> HObject:
    return HObject(tensor_label(a.label, b.label), a.dim * b.dim)


def tensor_obj(x: QObject, y: QObject) -> QObject:
    """Parts ``V_i (x) W_j`` in lexicographic order of ``(i, j)``."""
    return QObject(tuple(_tensor_part(a, b) for a in x for b in y))


def tensor_objs(xs: Sequence[QObject]) -> QObject:
    """n-ary tensor; empty means the unit, singleton means itself."""
    if not xs:
        return UNIT
    out = xs[0]
    for x in xs[1:]:
        out = tensor_obj(out, x)
    return out


def tensor_mor(f: QMorphism, g: QMorphism) -> QMorphism:
    src = tensor_obj(f.src, g.src)
    dst = tensor_obj(f.dst, g.dst)
    ng_src, ng_dst = len(g.src), len(g.dst)

    def entry(i, j):
        (i1, i2), (j1, j2) = divmod(i, ng_dst), divmod(j, ng_src)
        return cpm.tensor_map(f[i1, j1], g[i2, j2])

    return _build(src, dst, entry)


def permute_factors(xs: Sequence[QObject], perm: Sequence[int]) -> QMorphism:
    """Symmetry iso ``(x)xs -> (x)ys`` where factor ``k`` of ``xs`` goes to slot ``perm[k]``."""
    n = len(xs)
    perm = list(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation of {n} factors")
    inv = [perm.index(k) for k in range(n)]
    ys = [xs[inv[k]] for k in range(n)]
    src, dst = tensor_objs(xs), tensor_objs(ys)
    src_idx = list(itertools.product(*[range(len(x)) for x in xs]))
    dst_pos = {t: p for p, t in enumerate(itertools.product(*[range(len(y)) for y in ys]))}
    maps = {}
    for j, t in enumerate(src_idx):
        target = tuple(t[inv[k]] for k in range(n))
        dims = [xs[k][t[k]].dim for k in range(n)]
        maps[j] = (dst_pos[target], cpm.unitary(permutation_unitary(dims, perm)))

    def entry(i, j):
        target, u = maps[j]
        return u if target == i else cpm.zero(src[j].dim, dst[i].dim)

    return _build(src, dst, entry)


def symmetry(x: QObject, y: QObject) -> QMorphism:
    return permute_factors([x, y], [1, 0])


def associator(x: QObject, y: QObject, z: QObject) -> QMorphism:
    """``(x (x) y) (x) z -> x (x) (y (x) z)``; parts and dims coincide, so it is a relabelling."""
    src = tensor_obj(tensor_obj(x, y), z)
    dst = tensor_obj(x, tensor_obj(y, z))
    return reindex(src, dst, range(len(src)))


def left_unitor(x: QObject) -> QMorphism:
    return reindex(tensor_obj(UNIT, x), x, range(len(x)))


def right_unitor(x: QObject) -> QMorphism:
    return reindex(tensor_obj(x, UNIT), x, range(len(x)))


def _distributivity_mapping(x: QObject, y: QObject, z: QObject) -> list[int]:
    ny, nz = len(y), len(z)
    mapping = []
    for i in range(len(x)):
        for k in range(ny + nz):
            if k < ny:
                mapping.append(i * ny + k)
            else:
                mapping.append(len(x) * ny + i * nz + (k - ny))
    return mapping


def distributivity_iso(x: QObject, y: QObject, z: QObject) -> QMorphism:
    """``x (x) (y + z) -> (x (x) y) + (x (x) z)``, a trace preserving part permutation."""
    src = tensor_obj(x, coproduct_all([y, z]))
    dst = coproduct_all([tensor_obj(x, y), tensor_obj(x, z)])
    return reindex(src, dst, _distributivity_mapping(x, y, z))


def distributivity_inverse(x: QObject, y: QObject, z: QObject) -> QMorphism:
    mapping = _distributivity_mapping(x, y, z)
    src = coproduct_all([tensor_obj(x, y), tensor_obj(x, z)])
    dst = tensor_obj(x, coproduct_all([y, z]))
    inverse = [0] * len(mapping)
    for j, i in enumerate(mapping):
        inverse[i] = j
    return reindex(src, dst, inverse)


def inverse(f: QMorphism, tol: Tolerance = DEFAULT_TOL) -> QMorphism | None:
    """Inverse of ``f`` in CPM, or ``None`` when ``f`` is not invertible there.

    Invertible morphisms are part bijections whose nonzero entries are
    unitary conjugations.
    """
    if len(f.src) != len(f.dst):
        return None
    cutoff = tol.eps_eq
    target = {}
    for j in range(len(f.src)):
        rows = [i for i in range(len(f.dst)) if np.max(np.abs(f[i, j].choi)) > cutoff]
        if len(rows) != 1 or rows[0] in target.values():
            return None
        target[j] = rows[0]
    inv_entries = {}
    for j, i in target.items():
        e = f[i, j]
        if e.din != e.dout:
            return None
        ops = cpm.choi_to_kraus(e, tol).ops if cpm.is_completely_positive(e, tol) else ()
        if len(ops) != 1 or not approx_eq(ops[0].conj().T @ ops[0], np.eye(e.din), tol):
            return None
        inv_entries[(j, i)] = cpm.unitary(ops[0].conj().T)

    def entry(a, b):
        if (a, b) in inv_entries:
            return inv_entries[(a, b)]
        return cpm.zero(f.dst[b].dim, f.src[a].dim)

    return _build(f.dst, f.src, entry)


# Random morphisms


def random_morphism(
    src: QObject, dst: QObject, rng: np.random.Generator, kind: str = "tp"
) -> QMorphism:
    """Random morphism of Q' (``kind="tp"``), Q (``"tni"``) or CPM (``"cp"``).

    Columns of the Q' kind are random instruments: one trace preserving map
    into the direct sum of the codomain parts, cut into diagonal blocks.
    """
    if kind == "cp":
        return _build(src, dst, lambda i, j: cpm.random_cp_map(src[j].dim, dst[i].dim, rng))
    if kind not in ("tp", "tni"):
        raise ValueError(f"unknown kind {kind!r}")
    if len(dst) == 0:
        if len(src) and kind == "tp":
            raise ValueError("no trace preserving morphism into the empty family")
        return zero(src, dst)
    total = sum(dst.dims)
    offsets = np.cumsum((0,) + dst.dims)
    cols = []
    for v in src:
        big = cpm.choi_to_kraus(cpm.random_tp_map(v.dim, total, rng))
        weight = 1.0 if kind == "tp" else float(rng.uniform(0.0, 1.0))
        col = []
        for i, w in enumerate(dst):
            ops = [math.sqrt(weight) * k[offsets[i] : offsets[i + 1], :] for k in big.ops]
            col.append(cpm.kraus_to_choi(cpm.KrausSet(v.dim, w.dim, tuple(ops))))
        cols.append(col)
    return _build(src, dst, lambda i, j: cols[j][i])
