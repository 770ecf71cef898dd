"""The concrete functors ``FinSet -Phi-> Q'' -Psi-> Q`` and generic functor checks.

``Q''`` is ``Fwm(K)+``.  ``hatF : Fwm(K) -> Q'_s`` sends a sequence to the
tensor of its spaces and an injection to "permute the kept factors to the
front, then trace out the rest".  ``Psi`` extends ``hatF`` to families by
coproducts; ``Phi`` sends ``[n]`` to the family of ``n`` empty sequences.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from . import cpm, qcat
from .cpm import HObject, LinMap
from .freecat import FWM, Fwm, FwmMorphism, FwmObject, PlusCategory, PlusMorphism, PlusObject
from .linalg import DEFAULT_TOL, Tolerance, permutation_unitary
from .qcat import QMorphism, QObject
from .report import FAIL, NOT_APPLICABLE, PASS, CheckRecord

__all__ = [
    "FinSetMorphism",
    "FinSet",
    "FINSET",
    "SimpleTPTarget",
    "QTarget",
    "hat_obj",
    "hatF",
    "psi_obj",
    "psi_mor",
    "psi_monoidal",
    "psi_unit",
    "phi_obj",
    "phi_mor",
    "KernelResult",
    "check_multiplicative_kernel",
    "diagonal",
    "choice_of_preimages",
    "CategoryOps",
    "FunctorWitness",
    "FunctorSample",
    "finset_ops",
    "plus_ops",
    "fwm_ops",
    "q_ops",
    "phi_witness",
    "psi_witness",
    "identity_witness",
    "check_functor_props",
]


# FinSet


@dataclass(frozen=True)
class FinSetMorphism:
    src: int
    dst: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(t) for t in self.table))
        if len(self.table) != self.src or any(not 0 <= t < self.dst for t in self.table):
            raise ValueError(f"{self.table} is not a function [{self.src}] -> [{self.dst}]")

    def to_json(self) -> dict:
        return {"src": self.src, "dst": self.dst, "table": list(self.table)}


class FinSet:
    """Finite sets ``[n]`` with cartesian product as tensor and disjoint union as coproduct."""

    name = "FinSet"
    unit = 1

    def identity(self, n: int) -> FinSetMorphism:
        return FinSetMorphism(n, n, tuple(range(n)))

    def compose(self, g: FinSetMorphism, f: FinSetMorphism) -> FinSetMorphism:
        if f.dst != g.src:
            raise ValueError("cannot compose")
        return FinSetMorphism(f.src, g.dst, tuple(g.table[t] for t in f.table))

    def hom(self, a: int, b: int):
        for table in itertools.product(range(b), repeat=a):
            yield FinSetMorphism(a, b, table)

    def tensor_obj(self, a: int, b: int) -> int:
        return a * b

    def tensor_mor(self, f: FinSetMorphism, g: FinSetMorphism) -> FinSetMorphism:
        table = tuple(s * g.dst + t for s in f.table for t in g.table)
        return FinSetMorphism(f.src * g.src, f.dst * g.dst, table)

    def projections(self, a: int, b: int) -> tuple[FinSetMorphism, FinSetMorphism]:
        p1 = FinSetMorphism(a * b, a, tuple(i // b for i in range(a * b))) if b else FinSetMorphism(0, a, ())
        p2 = FinSetMorphism(a * b, b, tuple(i % b for i in range(a * b))) if b else FinSetMorphism(0, b, ())
        return p1, p2

    def pairing(self, f: FinSetMorphism, g: FinSetMorphism) -> FinSetMorphism:
        if f.src != g.src:
            raise ValueError("pairing needs a common domain")
        return FinSetMorphism(f.src, f.dst * g.dst, tuple(s * g.dst + t for s, t in zip(f.table, g.table)))

    def terminal(self, n: int) -> FinSetMorphism:
        return FinSetMorphism(n, 1, (0,) * n)

    def coproduct_all(self, ns: Sequence[int]) -> int:
        return sum(ns)

    def injection(self, ns: Sequence[int], k: int) -> FinSetMorphism:
        offset = sum(ns[:k])
        return FinSetMorphism(ns[k], sum(ns), tuple(offset + i for i in range(ns[k])))

    def copair_all(self, fs: Sequence[FinSetMorphism], dst: int | None = None) -> FinSetMorphism:
        dst = fs[0].dst if dst is None else dst
        return FinSetMorphism(sum(f.src for f in fs), dst, tuple(t for f in fs for t in f.table))

    def distributivity_iso(self, a: int, b: int, c: int) -> FinSetMorphism:
        table = []
        for i in range(a):
            for k in range(b + c):
                table.append(i * b + k if k < b else a * b + i * c + (k - b))
        return FinSetMorphism(a * (b + c), a * b + a * c, tuple(table))

    def inverse(self, f: FinSetMorphism):
        if f.src != f.dst or sorted(f.table) != list(range(f.src)):
            return None
        inv = [0] * f.src
        for i, t in enumerate(f.table):
            inv[t] = i
        return FinSetMorphism(f.dst, f.src, tuple(inv))


FINSET = FinSet()


# Targets for the universal-property extensions


class SimpleTPTarget:
    """``Q'_s`` as an affine symmetric monoidal target; objects are ``HObject``."""

    name = "Q'_s"
    affine = True
    unit = HObject("I", 1)

    def tensor_obj(self, a: HObject, b: HObject) -> HObject:
        return HObject(qcat.tensor_label(a.label, b.label), a.dim * b.dim)

    def tensor_mor(self, f: LinMap, g: LinMap) -> LinMap:
        return cpm.tensor_map(f, g)

    def compose(self, g: LinMap, f: LinMap) -> LinMap:
        return cpm.compose(g, f)

    def identity(self, a: HObject) -> LinMap:
        return cpm.identity(a.dim)

    def terminal(self, a: HObject) -> LinMap:
        return cpm.discard(a.dim)

    def permute(self, objs: Sequence[HObject], perm: Sequence[int]) -> LinMap:
        return cpm.unitary(permutation_unitary([o.dim for o in objs], perm))

    def right_unitor(self, a: HObject) -> LinMap:
        return cpm.identity(a.dim)


class QTarget:
    """``Q`` seen through its coproduct structure."""

    name = "Q"
    coproduct_all = staticmethod(qcat.coproduct_all)
    injection = staticmethod(qcat.injection)
    copair_all = staticmethod(qcat.copair_all)
    compose = staticmethod(qcat.compose)


# hatF and Psi


def hat_obj(x: FwmObject) -> HObject:
    if not len(x):
        return SimpleTPTarget.unit
    label = x[0].label
    for h in x.seq[1:]:
        label = qcat.tensor_label(label, h.label)
    return HObject(label, math.prod(h.dim for h in x))


def hatF(f: FwmMorphism) -> LinMap:
    """Trace preserving map ``L((x)src) -> L((x)dst)``.

    Conjugate by the permutation putting factors ``inj[0], inj[1], ...`` first,
    then trace out the remaining factors.
    """
    dims = [h.dim for h in f.src]
    kept = list(f.inj)
    dropped = [k for k in range(len(dims)) if k not in set(kept)]
    perm = [0] * len(dims)
    for pos, k in enumerate(kept + dropped):
        perm[k] = pos
    u = permutation_unitary(dims, perm)
    d_keep = math.prod(dims[k] for k in kept)
    d_drop = math.prod(dims[k] for k in dropped)
    basis = np.eye(d_drop)
    ops = [np.kron(np.eye(d_keep), basis[k : k + 1, :]) @ u for k in range(d_drop)]
    return cpm.kraus_to_choi(cpm.KrausSet(u.shape[0], d_keep, tuple(ops)))


def psi_obj(x: PlusObject) -> QObject:
    return QObject(tuple(hat_obj(s) for s in x))


def psi_mor(f: PlusMorphism) -> QMorphism:
    """Entry ``(b, a)`` is ``hatF(f_a)`` when ``fn(a) = b`` and zero otherwise."""
    src, dst = psi_obj(f.src), psi_obj(f.dst)
    comps = {(b, a): hatF(fa) for a, (b, fa) in enumerate(zip(f.fn, f.comps))}
    return qcat.QMorphism(
        src,
        dst,
        tuple(
            tuple(comps.get((b, a)) or cpm.zero(src[a].dim, dst[b].dim) for a in range(len(src)))
            for b in range(len(dst))
        ),
    )


def psi_monoidal(x: PlusObject, y: PlusObject, cat: PlusCategory) -> QMorphism:
    """``m : Psi x (x) Psi y -> Psi(x (x) y)``, a relabelling of identical parts."""
    src = qcat.tensor_obj(psi_obj(x), psi_obj(y))
    dst = psi_obj(cat.tensor_obj(x, y))
    return qcat.reindex(src, dst, range(len(src)))


def psi_unit(cat: PlusCategory) -> QMorphism:
    return qcat.reindex(qcat.UNIT, psi_obj(cat.unit), [0])


# Phi


def phi_obj(n: int, cat: PlusCategory | None = None) -> PlusObject:
    unit = FWM.unit if cat is None else cat.base.unit
    return PlusObject((unit,) * n)


def phi_mor(f: FinSetMorphism, cat: PlusCategory | None = None) -> PlusMorphism:
    base = FWM if cat is None else cat.base
    src, dst = phi_obj(f.src, cat), phi_obj(f.dst, cat)
    return PlusMorphism(src, dst, f.table, tuple(base.identity(base.unit) for _ in f.table))


# Multiplicative kernel


@dataclass
class KernelResult:
    ok: bool
    lhs_count: int
    rhs_count: int
    witness: dict = field(default_factory=dict)


def diagonal(b: int) -> FinSetMorphism:
    return FinSetMorphism(b, b * b, tuple(i * b + i for i in range(b)))


def check_multiplicative_kernel(
    b: int, c, c2, cat=None, phi: "FunctorWitness | None" = None
) -> KernelResult:
    """Check that pairing ``C(Phi b, c) x C(Phi b, c') -> C(Phi b, c (x) c')`` is bijective.

    The pairing is ``(f, f') -> (f (x) f') o m^-1 o Phi(diagonal)``; in ``Q''``
    it sends ``(f, f')`` to the morphism with index function
    ``i -> (f(i), f'(i))`` and components ``f_i (x) f'_i``.
    """
    cat = cat or PlusCategory(FWM)
    phi = phi or phi_witness(cat)
    pb = phi.obj(b)
    lhs1, lhs2 = list(cat.hom(pb, c)), list(cat.hom(pb, c2))
    tgt = cat.tensor_obj(c, c2)
    rhs = set(cat.hom(pb, tgt))
    m_inv = phi.target.inverse(phi.m_pair(b, b))
    duplicate = cat.compose(m_inv, phi.mor(diagonal(b)))
    images = {}
    for f in lhs1:
        for g in lhs2:
            h = cat.compose(cat.tensor_mor(f, g), duplicate)
            if h in images:
                return KernelResult(False, len(lhs1) * len(lhs2), len(rhs), {
                    "reason": "pairing not injective",
                    "pairs": [[images[h][0].to_json(), images[h][1].to_json()], [f.to_json(), g.to_json()]],
                })
            images[h] = (f, g)
    missing = rhs - images.keys()
    lhs_count = len(lhs1) * len(lhs2)
    if missing or len(images) != len(rhs):
        first = min(missing, key=str) if missing else None
        return KernelResult(False, lhs_count, len(rhs), {
            "reason": "pairing not surjective",
            "missing": first.to_json() if first else None,
        })
    return KernelResult(True, lhs_count, len(rhs))


# Choice of preimages


def choice_of_preimages(d: QObject) -> tuple[PlusObject, QMorphism]:
    """Family of singleton sequences ``{(V_a)}`` with the iso ``Psi(choice) -> d``."""
    c = PlusObject(tuple(FwmObject((v,)) for v in d))
    return c, qcat.reindex(psi_obj(c), d, range(len(d)))


# Generic functor checks


@dataclass
class CategoryOps:
    """Just enough of a category for the functor checks."""

    name: str
    identity: Callable
    compose: Callable
    eq: Callable
    inverse: Callable
    describe: Callable = lambda m: m.to_json()
    hom: Callable | None = None
    tensor_obj: Callable | None = None
    tensor_mor: Callable | None = None
    unit: object = None
    coproduct_all: Callable | None = None
    injection: Callable | None = None
    copair_all: Callable | None = None


def finset_ops() -> CategoryOps:
    return CategoryOps(
        "FinSet", FINSET.identity, FINSET.compose, lambda f, g: f == g, FINSET.inverse,
        describe=lambda m: m.to_json() if hasattr(m, "to_json") else m,
        hom=FINSET.hom, tensor_obj=FINSET.tensor_obj, tensor_mor=FINSET.tensor_mor, unit=1,
        coproduct_all=FINSET.coproduct_all, injection=FINSET.injection, copair_all=FINSET.copair_all,
    )


def _plus_inverse(cat: PlusCategory):
    def inverse(f: PlusMorphism):
        if len(f.src) != len(f.dst) or sorted(f.fn) != list(range(len(f.dst))):
            return None
        comps = {}
        for a, (b, fa) in enumerate(zip(f.fn, f.comps)):
            back = _fwm_inverse(fa)
            if back is None:
                return None
            comps[b] = (a, back)
        order = sorted(comps)
        return PlusMorphism(f.dst, f.src, tuple(comps[b][0] for b in order), tuple(comps[b][1] for b in order))

    return inverse


def _fwm_inverse(f: FwmMorphism):
    if len(f.src) != len(f.dst):
        return None
    back = [0] * len(f.inj)
    for i, k in enumerate(f.inj):
        back[k] = i
    return FwmMorphism(f.dst, f.src, tuple(back))


def fwm_ops(base: Fwm = FWM) -> CategoryOps:
    """``Fwm(K)`` alone; it has no coproduct structure."""
    return CategoryOps(
        base.name, base.identity, base.compose, lambda f, g: f == g, _fwm_inverse,
        hom=base.hom, tensor_obj=base.tensor_obj, tensor_mor=base.tensor_mor, unit=base.unit,
    )


def plus_ops(cat: PlusCategory | None = None) -> CategoryOps:
    cat = cat or PlusCategory(FWM)
    return CategoryOps(
        cat.name, cat.identity, cat.compose, lambda f, g: f == g, _plus_inverse(cat),
        hom=cat.hom, tensor_obj=cat.tensor_obj, tensor_mor=cat.tensor_mor, unit=cat.unit,
        coproduct_all=cat.coproduct_all, injection=cat.injection, copair_all=cat.copair_all,
    )


def q_ops(tol: Tolerance = DEFAULT_TOL) -> CategoryOps:
    def eq(f, g):
        return qcat.equiv(f, g, tol)

    def inverse(f):
        return qcat.inverse(f, tol)

    return CategoryOps(
        "Q", qcat.identity, qcat.compose, eq, inverse,
        tensor_obj=qcat.tensor_obj, tensor_mor=qcat.tensor_mor, unit=qcat.UNIT,
        coproduct_all=qcat.coproduct_all, injection=qcat.injection, copair_all=qcat.copair_all,
    )


@dataclass
class FunctorWitness:
    """A functor with its claimed monoidal structure and preimage chooser."""

    name: str
    source: CategoryOps
    target: CategoryOps
    obj: Callable
    mor: Callable
    m_pair: Callable | None = None
    m_unit: object = None
    preimage: Callable | None = None


@dataclass
class FunctorSample:
    """Finite data to test a functor on; lists are scanned in order, so put small cases first."""

    objects: list = field(default_factory=list)
    composable: list = field(default_factory=list)
    tensor_pairs: list = field(default_factory=list)
    hom_pairs: list = field(default_factory=list)
    target_objects: list = field(default_factory=list)
    coproduct_pairs: list = field(default_factory=list)


def _describe_obj(x):
    return x.to_json() if hasattr(x, "to_json") else x


def _is_iso(cat: CategoryOps, f) -> bool:
    inv = cat.inverse(f)
    if inv is None:
        return False
    return cat.eq(cat.compose(inv, f), cat.identity(f.src)) and cat.eq(
        cat.compose(f, inv), cat.identity(f.dst)
    )


def _check_functoriality(w: FunctorWitness, s: FunctorSample) -> CheckRecord:
    src, tgt = w.source, w.target
    for x in s.objects:
        if not tgt.eq(w.mor(src.identity(x)), tgt.identity(w.obj(x))):
            return CheckRecord("functoriality", FAIL, {"identity_on": _describe_obj(x)})
    for f, g in s.composable:
        if not tgt.eq(w.mor(src.compose(g, f)), tgt.compose(w.mor(g), w.mor(f))):
            return CheckRecord("functoriality", FAIL, {
                "pair": [src.describe(f), src.describe(g)],
                "image_of_composite": tgt.describe(w.mor(src.compose(g, f))),
            })
    return CheckRecord("functoriality", PASS, {"objects": len(s.objects), "pairs": len(s.composable)})


def _check_strong_monoidal(w: FunctorWitness, s: FunctorSample) -> CheckRecord:
    if w.m_pair is None or w.source.tensor_obj is None:
        return CheckRecord("strong_monoidal", NOT_APPLICABLE, {"reason": "no monoidal structure"})
    src, tgt = w.source, w.target
    if not _is_iso(tgt, w.m_unit):
        return CheckRecord("strong_monoidal", FAIL, {"unit_map_not_iso": tgt.describe(w.m_unit)})
    for x in s.objects:
        for y in s.objects:
            m = w.m_pair(x, y)
            if not _is_iso(tgt, m):
                return CheckRecord("strong_monoidal", FAIL, {
                    "structure_map_not_iso": [_describe_obj(x), _describe_obj(y)],
                })
    for f, g in s.tensor_pairs:
        lhs = tgt.compose(w.mor(src.tensor_mor(f, g)), w.m_pair(f.src, g.src))
        rhs = tgt.compose(w.m_pair(f.dst, g.dst), tgt.tensor_mor(w.mor(f), w.mor(g)))
        if not tgt.eq(lhs, rhs):
            return CheckRecord("strong_monoidal", FAIL, {
                "naturality_pair": [src.describe(f), src.describe(g)],
            })
    return CheckRecord("strong_monoidal", PASS, {
        "objects": len(s.objects), "naturality_squares": len(s.tensor_pairs),
    })


def _check_full_faithful(w: FunctorWitness, s: FunctorSample) -> CheckRecord:
    if not s.hom_pairs or w.source.hom is None or w.target.hom is None:
        return CheckRecord("full_faithful", NOT_APPLICABLE, {"reason": "hom-sets not enumerable"})
    for a, b in s.hom_pairs:
        images = [w.mor(f) for f in w.source.hom(a, b)]
        if len(set(images)) != len(images):
            return CheckRecord("full_faithful", FAIL, {
                "not_faithful_on": [_describe_obj(a), _describe_obj(b)],
            })
        target_hom = set(w.target.hom(w.obj(a), w.obj(b)))
        if target_hom != set(images):
            return CheckRecord("full_faithful", FAIL, {
                "not_full_on": [_describe_obj(a), _describe_obj(b)],
                "source_hom": len(images),
                "target_hom": len(target_hom),
            })
    return CheckRecord("full_faithful", PASS, {"hom_pairs": len(s.hom_pairs)})


def _check_essentially_surjective(w: FunctorWitness, s: FunctorSample) -> CheckRecord:
    if w.preimage is None or not s.target_objects:
        return CheckRecord("essentially_surjective", NOT_APPLICABLE, {"reason": "no preimage chooser"})
    for d in s.target_objects:
        found = w.preimage(d)
        if found is None:
            return CheckRecord("essentially_surjective", FAIL, {"no_preimage_for": _describe_obj(d)})
        c, iso = found
        image = w.obj(c)
        bad = getattr(image, "dims", image) != getattr(iso.src, "dims", iso.src) or (
            getattr(iso.dst, "dims", iso.dst) != getattr(d, "dims", d)
        )
        if bad or not _is_iso(w.target, iso):
            return CheckRecord("essentially_surjective", FAIL, {
                "no_preimage_for": _describe_obj(d),
                "image_of_choice": _describe_obj(image),
            })
    return CheckRecord("essentially_surjective", PASS, {"objects": len(s.target_objects)})


def _check_preserves_coproducts(w: FunctorWitness, s: FunctorSample) -> CheckRecord:
    src, tgt = w.source, w.target
    if src.coproduct_all is None or tgt.coproduct_all is None:
        return CheckRecord("preserves_coproducts", NOT_APPLICABLE, {"reason": "no coproducts"})
    empty = src.coproduct_all([])
    comparison = tgt.copair_all([], w.obj(empty))
    if not _is_iso(tgt, comparison):
        return CheckRecord("preserves_coproducts", FAIL, {"initial_not_preserved": _describe_obj(empty)})
    for x, y in s.coproduct_pairs:
        s_xy = src.coproduct_all([x, y])
        legs = [w.mor(src.injection([x, y], k)) for k in (0, 1)]
        comparison = tgt.copair_all(legs, w.obj(s_xy))
        if not _is_iso(tgt, comparison):
            return CheckRecord("preserves_coproducts", FAIL, {
                "pair": [_describe_obj(x), _describe_obj(y)],
            })
    return CheckRecord("preserves_coproducts", PASS, {"pairs": len(s.coproduct_pairs)})


def check_functor_props(w: FunctorWitness, sample: FunctorSample) -> dict[str, CheckRecord]:
    """Evidence for functoriality, strong monoidality, full faithfulness,
    essential surjectivity and coproduct preservation of ``w``."""
    records = [
        _check_functoriality(w, sample),
        _check_strong_monoidal(w, sample),
        _check_full_faithful(w, sample),
        _check_essentially_surjective(w, sample),
        _check_preserves_coproducts(w, sample),
    ]
    return {r.name: r for r in records}


def phi_witness(cat=None) -> FunctorWitness:
    """``Phi`` into ``cat``; for a bare ``Fwm`` every set goes to the unit."""
    cat = cat or PlusCategory(FWM)
    if isinstance(cat, Fwm):
        unit = cat.identity(cat.unit)
        return FunctorWitness(
            "Phi", finset_ops(), fwm_ops(cat),
            obj=lambda n: cat.unit,
            mor=lambda f: unit,
            m_pair=lambda a, b: unit,
            m_unit=unit,
        )
    ops = plus_ops(cat)
    return FunctorWitness(
        "Phi", finset_ops(), ops,
        obj=lambda n: phi_obj(n, cat),
        mor=lambda f: phi_mor(f, cat),
        m_pair=lambda a, b: cat.identity(phi_obj(a * b, cat)),
        m_unit=cat.identity(cat.unit),
    )


def psi_witness(cat: PlusCategory | None = None, tol: Tolerance = DEFAULT_TOL) -> FunctorWitness:
    cat = cat or PlusCategory(FWM)
    return FunctorWitness(
        "Psi", plus_ops(cat), q_ops(tol),
        obj=psi_obj,
        mor=psi_mor,
        m_pair=lambda x, y: psi_monoidal(x, y, cat),
        m_unit=psi_unit(cat),
        preimage=choice_of_preimages,
    )


def identity_witness(ops: CategoryOps) -> FunctorWitness:
    return FunctorWitness(
        f"id_{ops.name}", ops, ops,
        obj=lambda x: x,
        mor=lambda f: f,
        m_pair=(lambda x, y: ops.identity(ops.tensor_obj(x, y))) if ops.tensor_obj else None,
        m_unit=ops.identity(ops.unit) if ops.unit is not None else None,
        preimage=lambda d: (d, ops.identity(d)),
    )
