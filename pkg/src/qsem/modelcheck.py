"""Verifier for the hypotheses that make ``FinSet -> Q'' -> Q`` a model.

Each hypothesis becomes one ``CheckRecord``.  Checks over ``FinSet`` and
``Q''`` are exact enumerations; checks over ``Q`` are numeric and use
structural maps plus seeded random trace preserving morphisms.  Objects
are always visited smallest first, so the first failure found is a
minimal counterexample within the universe.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import cpm, qcat
from .cpm import HObject
from .freecat import FSM, FWM, Fwm, FwmObject, PlusCategory, PlusObject
from .functors import (
    FINSET,
    FunctorSample,
    FunctorWitness,
    check_functor_props,
    check_multiplicative_kernel,
    choice_of_preimages,
    finset_ops,
    fwm_ops,
    hat_obj,
    hatF,
    phi_witness,
    plus_ops,
    psi_mor,
    psi_obj,
    psi_witness,
    q_ops,
)
from .linalg import DEFAULT_TOL, Tolerance, matrix_to_json
from .qcat import QMorphism, QObject
from .report import FAIL, NOT_APPLICABLE, PASS, CheckRecord, combine

__all__ = [
    "Universe",
    "CheckReport",
    "Cone",
    "ModelInstance",
    "HYPOTHESES",
    "NEGATIVE_CONTROLS",
    "standard_instance",
    "negative_control_instance",
    "check_hypotheses",
    "run_negative_control",
    "check_concrete_embedding",
    "corrupted_psi",
    "config_hash",
]

HYPOTHESES = (
    "B_finite_products",
    "C_D_symmetric_monoidal",
    "coproducts_distributive",
    "C_affine",
    "strong_monoidal",
    "preserve_coproducts",
    "phi_full_faithful",
    "psi_essentially_surjective",
    "multiplicative_kernel",
    "gamma_condition",
)

# Bullets each negative control is built to break; nothing else may stop passing.
NEGATIVE_CONTROLS = {
    "constant_psi": frozenset({"strong_monoidal", "psi_essentially_surjective"}),
    "non_affine_C": frozenset({"C_affine"}),
    "no_plus_completion": frozenset(
        {"coproducts_distributive", "preserve_coproducts", "phi_full_faithful", "psi_essentially_surjective"}
    ),
}


@dataclass(frozen=True)
class Universe:
    """Desk-scale truncation of the (infinite) categories involved."""

    finset_max: int = 3
    k_objects: tuple = (HObject("C1", 1), HObject("C2", 2), HObject("C3", 3))
    max_seq_len: int = 2
    max_family: int = 3
    samples: int = 20
    seed: int = 0
    tol: Tolerance = DEFAULT_TOL
    # exhaustive law checks run on families of at most this many short sequences
    law_family: int = 2
    law_seq_len: int = 1

    def __post_init__(self):
        object.__setattr__(self, "k_objects", tuple(self.k_objects))
        for name in ("finset_max", "max_seq_len", "max_family", "samples", "law_family", "law_seq_len"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if not self.k_objects:
            raise ValueError("k_objects must be nonempty")

    def to_json(self) -> dict:
        return {
            "finset_max": self.finset_max,
            "k_objects": [h.to_json() for h in self.k_objects],
            "max_seq_len": self.max_seq_len,
            "max_family": self.max_family,
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol.to_json(),
            "law_family": self.law_family,
            "law_seq_len": self.law_seq_len,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Universe":
        kw = dict(data)
        if "k_objects" in kw:
            kw["k_objects"] = tuple(HObject.from_json(h) for h in kw["k_objects"])
        if "tol" in kw:
            kw["tol"] = Tolerance.from_json(kw["tol"])
        return cls(**kw)

    def rng(self, stream: str) -> np.random.Generator:
        """Independent seeded stream per check, so filtering checks never changes results."""
        digest = hashlib.sha256(stream.encode()).digest()
        return np.random.default_rng([self.seed, int.from_bytes(digest[:4], "big")])

    def q_objects(self, max_parts: int | None = None) -> list[QObject]:
        n = self.max_family if max_parts is None else max_parts
        return [QObject(p) for k in range(n + 1) for p in itertools.product(self.k_objects, repeat=k)]


def config_hash(data: dict) -> str:
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


@dataclass
class CheckReport:
    records: list = field(default_factory=list)

    def get(self, name: str) -> CheckRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def statuses(self) -> dict:
        return {r.name: r.status for r in self.records}

    @property
    def all_pass(self) -> bool:
        return all(r.status == PASS for r in self.records)

    def failing(self) -> set:
        return {r.name for r in self.records if r.status != PASS}

    def to_json(self) -> dict:
        return {"checks": [r.to_json() for r in self.records], "all_pass": self.all_pass}

    @classmethod
    def from_json(cls, data: dict) -> "CheckReport":
        return cls([CheckRecord.from_json(r) for r in data["checks"]])


@dataclass
class Cone:
    """A coproduct cocone in ``Q``: legs into a common vertex (a product cone in the opposite category)."""

    vertex: QObject
    legs: list

    def __post_init__(self):
        for leg in self.legs:
            if leg.dst.dims != self.vertex.dims:
                raise ValueError("every leg must land in the vertex")

    def tensored(self, x: QObject, side: str = "left") -> "Cone":
        if side == "left":
            return Cone(qcat.tensor_obj(x, self.vertex), [qcat.tensor_mor(qcat.identity(x), l) for l in self.legs])
        return Cone(qcat.tensor_obj(self.vertex, x), [qcat.tensor_mor(l, qcat.identity(x)) for l in self.legs])

    def comparison(self) -> QMorphism:
        return qcat.copair_all(self.legs, self.vertex)


# Model instances


@dataclass
class ModelInstance:
    name: str
    cat: object
    phi: FunctorWitness
    psi: FunctorWitness
    c_objects: list
    law_objects: list


def _plus_universe(cat: PlusCategory, u: Universe, seq_len: int, family: int) -> list:
    return cat.objects(cat.base.objects(u.k_objects, seq_len), family)


def standard_instance(u: Universe) -> ModelInstance:
    cat = PlusCategory(FWM)
    return ModelInstance(
        "standard", cat, phi_witness(cat), psi_witness(cat, u.tol),
        _plus_universe(cat, u, u.max_seq_len, u.max_family),
        _plus_universe(cat, u, u.law_seq_len, u.law_family),
    )


def _bare_psi(base: Fwm, tol: Tolerance) -> FunctorWitness:
    """``Psi`` restricted to ``Fwm(K)`` (singleton families only)."""

    def obj(x: FwmObject) -> QObject:
        return QObject((hat_obj(x),))

    def mor(f) -> QMorphism:
        return QMorphism(obj(f.src), obj(f.dst), ((hatF(f),),))

    def preimage(d: QObject):
        if len(d) != 1:
            return None
        c = FwmObject((d[0],))
        return c, qcat.reindex(obj(c), d, [0])

    return FunctorWitness(
        "Psi", fwm_ops(base), q_ops(tol), obj=obj, mor=mor,
        m_pair=lambda x, y: qcat.reindex(qcat.tensor_obj(obj(x), obj(y)), obj(base.tensor_obj(x, y)), [0]),
        m_unit=qcat.reindex(qcat.UNIT, obj(base.unit), [0]),
        preimage=preimage,
    )


def negative_control_instance(name: str, u: Universe) -> ModelInstance:
    if name == "constant_psi":
        inst = standard_instance(u)
        cat = inst.cat
        zero = qcat.ZERO
        inst.psi = FunctorWitness(
            "Psi_constant", plus_ops(cat), q_ops(u.tol),
            obj=lambda x: zero,
            mor=lambda f: qcat.zero(zero, zero),
            m_pair=lambda x, y: qcat.identity(zero),
            m_unit=qcat.zero(qcat.UNIT, zero),
            preimage=choice_of_preimages,
        )
        inst.name = name
        return inst
    if name == "non_affine_C":
        cat = PlusCategory(FSM)
        return ModelInstance(
            name, cat, phi_witness(cat), psi_witness(cat, u.tol),
            _plus_universe(cat, u, u.max_seq_len, u.max_family),
            _plus_universe(cat, u, u.law_seq_len, u.law_family),
        )
    if name == "no_plus_completion":
        return ModelInstance(
            name, FWM, phi_witness(FWM), _bare_psi(FWM, u.tol),
            FWM.objects(u.k_objects, u.max_seq_len),
            FWM.objects(u.k_objects, u.law_seq_len),
        )
    raise KeyError(f"unknown negative control {name!r}")


# Helpers


def _obj_json(x):
    return x.to_json() if hasattr(x, "to_json") else x


def _hom_size(cat, x, y) -> int:
    if hasattr(cat, "hom_count"):
        return cat.hom_count(x, y)
    return sum(1 for _ in cat.hom(x, y))


def _random_morphism(cat, objs: list, rng: np.random.Generator, tries: int = 200):
    for _ in range(tries):
        x = objs[rng.integers(len(objs))]
        y = objs[rng.integers(len(objs))]
        hom = list(cat.hom(x, y))
        if hom:
            return hom[rng.integers(len(hom))]
    return None


def _random_composable(cat, objs: list, rng: np.random.Generator, n: int) -> list:
    out = []
    for _ in range(n * 20):
        if len(out) >= n:
            break
        f = _random_morphism(cat, objs, rng)
        if f is None:
            continue
        z = objs[rng.integers(len(objs))]
        hom = list(cat.hom(f.dst, z))
        if hom:
            out.append((f, hom[rng.integers(len(hom))]))
    return out


def _size_key(x) -> tuple:
    if isinstance(x, QObject):
        return (len(x), sum(x.dims))
    if isinstance(x, PlusObject):
        return (len(x), sum(len(s) for s in x))
    return (len(x),)


# B: finite products


def check_finite_products(u: Universe) -> CheckRecord:
    n = u.finset_max
    for c in range(n + 1):
        if sum(1 for _ in FINSET.hom(c, 1)) != 1:
            return CheckRecord("B_finite_products", FAIL, {"terminal_fails_at": c})
    cases = 0
    for a in range(n + 1):
        for b in range(n + 1):
            p1, p2 = FINSET.projections(a, b)
            for c in range(n + 1):
                seen = {}
                for h in FINSET.hom(c, a * b):
                    key = (FINSET.compose(p1, h), FINSET.compose(p2, h))
                    if key in seen:
                        return CheckRecord("B_finite_products", FAIL, {
                            "product": [a, b], "test_object": c, "not_unique": [h.to_json(), seen[key].to_json()],
                        })
                    seen[key] = h
                    cases += 1
                expected = (a ** c) * (b ** c)
                if len(seen) != expected:
                    return CheckRecord("B_finite_products", FAIL, {
                        "product": [a, b], "test_object": c, "pairs_hit": len(seen), "pairs": expected,
                    })
                for (f, g), h in itertools.islice(seen.items(), 5):
                    if FINSET.pairing(f, g) != h:
                        return CheckRecord("B_finite_products", FAIL, {"pairing_wrong": [f.to_json(), g.to_json()]})
    return CheckRecord("B_finite_products", PASS, {"max_set": n, "maps_checked": cases})


# C and D: symmetric monoidal structure


def _check_c_monoidal(cat, objs: list, rng, samples: int) -> CheckRecord:
    name = "C_symmetric_monoidal"
    unit = cat.unit
    for x in objs:
        if cat.tensor_obj(unit, x) != x or cat.tensor_obj(x, unit) != x:
            return CheckRecord(name, FAIL, {"unit_law": _obj_json(x)})
    triples = 0
    for x, y, z in itertools.product(objs, repeat=3):
        xy = cat.tensor_obj(x, y)
        if cat.tensor_obj(xy, z) != cat.tensor_obj(x, cat.tensor_obj(y, z)):
            return CheckRecord(name, FAIL, {"associativity": [_obj_json(o) for o in (x, y, z)]})
        hexagon = cat.compose(
            cat.tensor_mor(cat.identity(y), cat.symmetry(x, z)),
            cat.tensor_mor(cat.symmetry(x, y), cat.identity(z)),
        )
        if hexagon != cat.symmetry(x, cat.tensor_obj(y, z)):
            return CheckRecord(name, FAIL, {"hexagon": [_obj_json(o) for o in (x, y, z)]})
        triples += 1
    for x, y in itertools.product(objs, repeat=2):
        if cat.compose(cat.symmetry(y, x), cat.symmetry(x, y)) != cat.identity(cat.tensor_obj(x, y)):
            return CheckRecord(name, FAIL, {"symmetry_not_involutive": [_obj_json(x), _obj_json(y)]})
        if cat.tensor_mor(cat.identity(x), cat.identity(y)) != cat.identity(cat.tensor_obj(x, y)):
            return CheckRecord(name, FAIL, {"tensor_of_identities": [_obj_json(x), _obj_json(y)]})
    pairs = _random_composable(cat, objs, rng, samples)
    for (f, f2), (g, g2) in zip(pairs, pairs[1:]):
        lhs = cat.tensor_mor(cat.compose(f2, f), cat.compose(g2, g))
        if lhs != cat.compose(cat.tensor_mor(f2, g2), cat.tensor_mor(f, g)):
            return CheckRecord(name, FAIL, {"bifunctoriality": [f.to_json(), g.to_json()]})
        nat_l = cat.compose(cat.symmetry(f.dst, g.dst), cat.tensor_mor(f, g))
        if nat_l != cat.compose(cat.tensor_mor(g, f), cat.symmetry(f.src, g.src)):
            return CheckRecord(name, FAIL, {"symmetry_naturality": [f.to_json(), g.to_json()]})
    return CheckRecord(name, PASS, {"object_triples": triples, "morphism_samples": max(0, len(pairs) - 1)})


def _check_q_monoidal(u: Universe, rng) -> CheckRecord:
    name = "D_symmetric_monoidal"
    tol = u.tol
    objs = sorted(u.q_objects(2), key=_size_key)
    small = [x for x in objs if len(x) <= 1]
    for x in objs:
        for iso in (qcat.left_unitor(x), qcat.right_unitor(x)):
            if qcat.inverse(iso, tol) is None:
                return CheckRecord(name, FAIL, {"unitor_not_iso": x.to_json()})
    checked = 0
    for x, y, z in itertools.product(small, repeat=3):
        a = qcat.associator
        lhs = qcat.compose(
            qcat.tensor_mor(qcat.identity(y), qcat.symmetry(x, z)),
            qcat.compose(a(y, x, z), qcat.tensor_mor(qcat.symmetry(x, y), qcat.identity(z))),
        )
        rhs = qcat.compose(a(y, z, x), qcat.compose(qcat.symmetry(x, qcat.tensor_obj(y, z)), a(x, y, z)))
        if not qcat.equiv(lhs, rhs, tol):
            return CheckRecord(name, FAIL, {"hexagon": [o.to_json() for o in (x, y, z)]})
        checked += 1
    for x, y in itertools.product(objs, repeat=2):
        s = qcat.compose(qcat.symmetry(y, x), qcat.symmetry(x, y))
        if not qcat.equiv(s, qcat.identity(qcat.tensor_obj(x, y)), tol):
            return CheckRecord(name, FAIL, {"symmetry_not_involutive": [x.to_json(), y.to_json()]})
    nonzero = [x for x in objs if len(x)]
    for _ in range(u.samples):
        x, x2, y, y2 = (nonzero[rng.integers(len(nonzero))] for _ in range(4))
        f = qcat.random_morphism(x, x2, rng)
        g = qcat.random_morphism(y, y2, rng)
        lhs = qcat.compose(qcat.symmetry(x2, y2), qcat.tensor_mor(f, g))
        rhs = qcat.compose(qcat.tensor_mor(g, f), qcat.symmetry(x, y))
        if not qcat.equiv(lhs, rhs, tol):
            return CheckRecord(name, FAIL, {"symmetry_naturality": [f.to_json(), g.to_json()]})
    return CheckRecord(name, PASS, {"hexagons": checked, "naturality_samples": u.samples})


def check_symmetric_monoidal(inst: ModelInstance, u: Universe) -> CheckRecord:
    c = _check_c_monoidal(inst.cat, inst.law_objects, u.rng("monoidal-C"), u.samples)
    d = _check_q_monoidal(u, u.rng("monoidal-D"))
    return combine("C_D_symmetric_monoidal", [c, d])


# Coproducts and distributivity


def _check_b_coproducts(u: Universe) -> CheckRecord:
    name = "B_coproducts"
    n = u.finset_max
    for c in range(n + 1):
        if sum(1 for _ in FINSET.hom(0, c)) != 1:
            return CheckRecord(name, FAIL, {"initial_fails_at": c})
    for a, b, c in itertools.product(range(n + 1), repeat=3):
        i1, i2 = FINSET.injection([a, b], 0), FINSET.injection([a, b], 1)
        seen = {(FINSET.compose(h, i1), FINSET.compose(h, i2)) for h in FINSET.hom(a + b, c)}
        if len(seen) != c ** a * c ** b:
            return CheckRecord(name, FAIL, {"coproduct": [a, b], "test_object": c})
        comparison = FINSET.copair_all(
            [FINSET.tensor_mor(FINSET.identity(a), FINSET.injection([b, c], k)) for k in (0, 1)],
            a * (b + c),
        )
        dist = FINSET.distributivity_iso(a, b, c)
        if FINSET.compose(dist, comparison) != FINSET.identity(a * b + a * c) or FINSET.compose(
            comparison, dist
        ) != FINSET.identity(a * (b + c)):
            return CheckRecord(name, FAIL, {"distributivity": [a, b, c]})
    return CheckRecord(name, PASS, {"max_set": n})


def _forced_coproduct_witness(base: Fwm, k_objects, objs: list):
    """Show some pair in ``objs`` has no coproduct in ``Fwm(K)``.

    ``|hom(S, (h))|`` is the multiplicity of ``h`` in ``S``, so a coproduct of
    ``x`` and ``y`` must contain ``h`` exactly ``|hom(x,(h))|*|hom(y,(h))|``
    times; that fixes ``S`` up to reordering, and we test it on ``objs``.
    """
    pairs = sorted(itertools.product(objs, repeat=2), key=lambda p: (len(p[0]) + len(p[1]), len(p[0])))
    for x, y in pairs:
        counts = {h: _hom_size(base, x, FwmObject((h,))) * _hom_size(base, y, FwmObject((h,))) for h in k_objects}
        forced = FwmObject(tuple(h for h in k_objects for _ in range(counts[h])))
        for t in objs:
            want = _hom_size(base, x, t) * _hom_size(base, y, t)
            got = _hom_size(base, forced, t)
            if want != got:
                return {
                    "pair": [x.to_json(), y.to_json()],
                    "forced_candidate": forced.to_json(),
                    "test_object": t.to_json(),
                    "hom_from_candidate": got,
                    "required": want,
                }
    return None


def _check_c_coproducts(inst: ModelInstance, u: Universe) -> CheckRecord:
    name = "C_coproducts"
    cat = inst.cat
    if not hasattr(cat, "coproduct_all"):
        witness = _forced_coproduct_witness(cat, u.k_objects, inst.c_objects)
        return CheckRecord(name, FAIL, {"reason": "no coproduct structure", "no_coproduct": witness})
    objs = inst.law_objects
    empty = cat.coproduct_all([])
    for t in objs:
        if _hom_size(cat, empty, t) != 1:
            return CheckRecord(name, FAIL, {"initial_fails_at": t.to_json()})
    for x, y in itertools.product(objs, repeat=2):
        i1, i2 = cat.injection([x, y], 0), cat.injection([x, y], 1)
        xy = cat.coproduct_all([x, y])
        for t in objs:
            seen = {(cat.compose(h, i1), cat.compose(h, i2)) for h in cat.hom(xy, t)}
            if len(seen) != _hom_size(cat, x, t) * _hom_size(cat, y, t):
                return CheckRecord(name, FAIL, {"coproduct": [x.to_json(), y.to_json()], "test_object": t.to_json()})
    for x, y, z in itertools.product(objs, repeat=3):
        comparison = cat.copair_all(
            [cat.tensor_mor(cat.identity(x), cat.injection([y, z], k)) for k in (0, 1)],
            cat.tensor_obj(x, cat.coproduct_all([y, z])),
        )
        dist = cat.distributivity_iso(x, y, z)
        if cat.compose(dist, comparison) != cat.identity(comparison.src) or cat.compose(
            comparison, dist
        ) != cat.identity(dist.src):
            return CheckRecord(name, FAIL, {"distributivity": [o.to_json() for o in (x, y, z)]})
        if cat.tensor_obj(x, empty) != empty:
            return CheckRecord(name, FAIL, {"tensor_with_initial": x.to_json()})
    return CheckRecord(name, PASS, {"objects": len(objs)})


def _check_d_coproducts(u: Universe, rng) -> CheckRecord:
    name = "D_coproducts"
    tol = u.tol
    objs = [x for x in sorted(u.q_objects(2), key=_size_key) if len(x)]
    for _ in range(u.samples):
        x, y, t = (objs[rng.integers(len(objs))] for _ in range(3))
        f = qcat.random_morphism(x, t, rng)
        g = qcat.random_morphism(y, t, rng)
        _, i1, i2 = qcat.coproduct(x, y)
        h = qcat.copair(f, g)
        if not (qcat.equiv(qcat.compose(h, i1), f, tol) and qcat.equiv(qcat.compose(h, i2), g, tol)):
            return CheckRecord(name, FAIL, {"copair": [f.to_json(), g.to_json()]})
        # any k is the copairing of its restrictions, so mediating maps are unique
        k = qcat.random_morphism(qcat.coproduct_all([x, y]), t, rng)
        if not qcat.equiv(qcat.copair(qcat.compose(k, i1), qcat.compose(k, i2)), k, tol):
            return CheckRecord(name, FAIL, {"uniqueness": k.to_json()})
    for x, y, z in itertools.product(sorted(u.q_objects(1), key=_size_key), repeat=3):
        comparison = Cone(qcat.coproduct_all([y, z]), [qcat.injection([y, z], k) for k in (0, 1)]).tensored(x).comparison()
        dist = qcat.distributivity_iso(x, y, z)
        if not (
            qcat.equiv(qcat.compose(dist, comparison), qcat.identity(comparison.src), tol)
            and qcat.equiv(qcat.compose(comparison, dist), qcat.identity(dist.src), tol)
            and qcat.is_Qprime(dist, tol)
        ):
            return CheckRecord(name, FAIL, {"distributivity": [o.to_json() for o in (x, y, z)]})
    return CheckRecord(name, PASS, {"samples": u.samples})


def check_coproducts_distributive(inst: ModelInstance, u: Universe) -> CheckRecord:
    return combine("coproducts_distributive", [
        _check_b_coproducts(u), _check_c_coproducts(inst, u), _check_d_coproducts(u, u.rng("coproducts-D")),
    ])


# Affineness


def check_affine(inst: ModelInstance, u: Universe) -> CheckRecord:
    cat = inst.cat
    for x in inst.c_objects:
        n = _hom_size(cat, x, cat.unit)
        if n != 1:
            return CheckRecord("C_affine", FAIL, {"object": x.to_json(), "maps_to_unit": n})
    return CheckRecord("C_affine", PASS, {"objects": len(inst.c_objects)})


# Functor bullets


def _phi_sample(u: Universe) -> FunctorSample:
    ns = list(range(u.finset_max + 1))
    mors = [f for a in ns for b in ns for f in FINSET.hom(a, b)]
    small = [f for f in mors if f.src <= 2 and f.dst <= 2]
    return FunctorSample(
        objects=ns,
        composable=[(f, g) for f in mors for g in mors if f.dst == g.src],
        tensor_pairs=[(f, g) for f in small for g in small],
        hom_pairs=[(a, b) for a in ns for b in ns],
        coproduct_pairs=[(a, b) for a in ns for b in ns],
    )


def _psi_sample(inst: ModelInstance, u: Universe) -> FunctorSample:
    rng = u.rng("psi-sample")
    cat = inst.cat
    composable = _random_composable(cat, inst.c_objects, rng, 5 * u.samples)
    small = [f for f, _ in _random_composable(cat, inst.law_objects, rng, 2 * u.samples)]
    coproduct_pairs = (
        list(itertools.product(inst.law_objects, repeat=2)) if hasattr(cat, "coproduct_all") else []
    )
    return FunctorSample(
        objects=inst.law_objects,
        composable=composable,
        tensor_pairs=list(zip(small, small[1:])),
        target_objects=u.q_objects(),
        coproduct_pairs=coproduct_pairs,
    )


def _functor_records(inst: ModelInstance, u: Universe) -> tuple[dict, dict]:
    return (
        check_functor_props(inst.phi, _phi_sample(u)),
        check_functor_props(inst.psi, _psi_sample(inst, u)),
    )


def _tag(rec: CheckRecord, prefix: str) -> CheckRecord:
    return CheckRecord(f"{prefix}_{rec.name}", rec.status, rec.evidence)


def check_strong_monoidal(inst: ModelInstance, u: Universe, records=None) -> CheckRecord:
    phi, psi = records or _functor_records(inst, u)
    return combine("strong_monoidal", [
        _tag(phi["functoriality"], "phi"), _tag(phi["strong_monoidal"], "phi"),
        _tag(psi["functoriality"], "psi"), _tag(psi["strong_monoidal"], "psi"),
    ])


def check_preserve_coproducts(inst: ModelInstance, u: Universe, records=None) -> CheckRecord:
    if not hasattr(inst.cat, "coproduct_all"):
        return CheckRecord("preserve_coproducts", NOT_APPLICABLE, {"reason": "C has no coproduct structure"})
    phi, psi = records or _functor_records(inst, u)
    return combine("preserve_coproducts", [
        _tag(phi["preserves_coproducts"], "phi"), _tag(psi["preserves_coproducts"], "psi"),
    ])


def check_phi_full_faithful(inst: ModelInstance, u: Universe) -> CheckRecord:
    rec = check_functor_props(inst.phi, FunctorSample(hom_pairs=_phi_sample(u).hom_pairs))["full_faithful"]
    return CheckRecord("phi_full_faithful", rec.status, rec.evidence)


def check_psi_essentially_surjective(inst: ModelInstance, u: Universe) -> CheckRecord:
    psi = inst.psi
    tol = u.tol
    for d in u.q_objects():
        found = psi.preimage(d)
        if found is None:
            return CheckRecord("psi_essentially_surjective", FAIL, {"no_preimage_for": d.to_json()})
        c, iso = found
        image = psi.obj(c)
        if image.dims != iso.src.dims or iso.dst.dims != d.dims or qcat.inverse(iso, tol) is None:
            return CheckRecord("psi_essentially_surjective", FAIL, {
                "no_preimage_for": d.to_json(), "image_of_choice": image.to_json(),
            })
    return CheckRecord("psi_essentially_surjective", PASS, {"objects": len(u.q_objects())})


# Multiplicative kernel


def _kernel_plus(inst: ModelInstance, u: Universe) -> CheckRecord:
    """Exhaustive over all pairs of universe objects and all ``b``.

    Every hom-set out of ``Phi b`` is a product of ``b`` copies of the
    hom-set out of the unit, which only sees which family members admit a
    map from the empty sequence.  Cardinalities are checked for every pair
    with one integer matrix product; the pairing map itself is enumerated
    on the first pair of each such signature class.
    """
    name = "multiplicative_kernel"
    cat, phi = inst.cat, inst.phi
    base = cat.base
    seqs = base.objects(u.k_objects, u.max_seq_len)
    index = {s: i for i, s in enumerate(seqs)}
    from_unit = np.array([_hom_size(base, base.unit, s) for s in seqs], dtype=np.int64)
    table = np.array(
        [[_hom_size(base, base.unit, base.tensor_obj(s, t)) for t in seqs] for s in seqs], dtype=np.int64
    )
    objs = inst.c_objects
    counts = np.zeros((len(objs), len(seqs)), dtype=np.int64)
    for r, c in enumerate(objs):
        for s in c:
            counts[r, index[s]] += 1
    lhs_one = counts @ from_unit
    # direct enumeration agrees with the signature count on every object
    for r, c in enumerate(objs):
        for b in range(u.finset_max + 1):
            if _hom_size(cat, phi.obj(b), c) != int(lhs_one[r]) ** b:
                return CheckRecord(name, FAIL, {"hom_count_mismatch": c.to_json(), "b": b})
    rhs_one = counts @ table @ counts.T
    lhs = np.outer(lhs_one, lhs_one)
    bad = np.argwhere(lhs != rhs_one)
    if len(bad):
        i, j = bad[0]
        return CheckRecord(name, FAIL, {
            "pair": [objs[i].to_json(), objs[j].to_json()], "lhs": int(lhs[i, j]), "rhs": int(rhs_one[i, j]),
        })
    signature = [tuple(int(from_unit[index[s]]) for s in c) for c in objs]
    first: dict = {}
    for r, sig in enumerate(signature):
        first.setdefault(sig, r)
    reps = sorted(first.values())
    checked = 0
    for r1 in reps:
        for r2 in reps:
            for b in range(u.finset_max + 1):
                res = check_multiplicative_kernel(b, objs[r1], objs[r2], cat, phi)
                checked += 1
                if not res.ok:
                    return CheckRecord(name, FAIL, {
                        "b": b, "c": objs[r1].to_json(), "c_prime": objs[r2].to_json(), **res.witness,
                    })
    # a sample of tensor objects also matches the product formula by direct enumeration
    rng = u.rng("kernel")
    for _ in range(u.samples):
        i, j = (int(rng.integers(len(objs))) for _ in range(2))
        t = cat.tensor_obj(objs[i], objs[j])
        if _hom_size(cat, phi.obj(1), t) != int(rhs_one[i, j]):
            return CheckRecord(name, FAIL, {"tensor_count_mismatch": [objs[i].to_json(), objs[j].to_json()]})
    return CheckRecord(name, PASS, {
        "pairs": len(objs) ** 2, "max_set": u.finset_max, "signature_classes": len(reps), "bijections_enumerated": checked,
    })


def _kernel_direct(inst: ModelInstance, u: Universe) -> CheckRecord:
    name = "multiplicative_kernel"
    checked = 0
    for c, c2 in itertools.product(inst.c_objects, repeat=2):
        for b in range(u.finset_max + 1):
            res = check_multiplicative_kernel(b, c, c2, inst.cat, inst.phi)
            checked += 1
            if not res.ok:
                return CheckRecord(name, FAIL, {"b": b, "c": _obj_json(c), "c_prime": _obj_json(c2), **res.witness})
    return CheckRecord(name, PASS, {"cases": checked})


def check_kernel(inst: ModelInstance, u: Universe) -> CheckRecord:
    if isinstance(inst.cat, PlusCategory):
        return _kernel_plus(inst, u)
    return _kernel_direct(inst, u)


# Gamma: tensoring preserves coproduct cocones in Q


def check_gamma(inst: ModelInstance, u: Universe) -> CheckRecord:
    name = "gamma_condition"
    tol = u.tol
    rng = u.rng("gamma")
    objs = sorted(u.q_objects(2), key=_size_key)
    nonzero = [x for x in objs if len(x)]
    count = 0
    for x in objs:
        for y, z in itertools.product(sorted(u.q_objects(1), key=_size_key), repeat=2):
            base = Cone(qcat.coproduct_all([y, z]), [qcat.injection([y, z], k) for k in (0, 1)])
            for side in ("left", "right"):
                cmp = base.tensored(x, side).comparison()
                inv = qcat.inverse(cmp, tol)
                if inv is None or not qcat.equiv(qcat.compose(inv, cmp), qcat.identity(cmp.src), tol):
                    return CheckRecord(name, FAIL, {"side": side, "objects": [o.to_json() for o in (x, y, z)]})
                count += 1
        empty = Cone(qcat.ZERO, []).tensored(x)
        if empty.vertex.dims != ():
            return CheckRecord(name, FAIL, {"empty_cone": x.to_json()})
    for _ in range(u.samples):
        x, x2, y, y2, z, z2 = (nonzero[rng.integers(len(nonzero))] for _ in range(6))
        h = qcat.random_morphism(x, x2, rng)
        f = qcat.random_morphism(y, y2, rng)
        g = qcat.random_morphism(z, z2, rng)
        f_plus_g = qcat.copair(
            qcat.compose(qcat.injection([y2, z2], 0), f), qcat.compose(qcat.injection([y2, z2], 1), g)
        )
        cone = Cone(qcat.coproduct_all([y, z]), [qcat.injection([y, z], k) for k in (0, 1)])
        cone2 = Cone(qcat.coproduct_all([y2, z2]), [qcat.injection([y2, z2], k) for k in (0, 1)])
        cmp, cmp2 = cone.tensored(x).comparison(), cone2.tensored(x2).comparison()
        hf = qcat.tensor_mor(h, f)
        hg = qcat.tensor_mor(h, g)
        xy2, xz2 = qcat.tensor_obj(x2, y2), qcat.tensor_obj(x2, z2)
        sum_map = qcat.copair(
            qcat.compose(qcat.injection([xy2, xz2], 0), hf), qcat.compose(qcat.injection([xy2, xz2], 1), hg)
        )
        lhs = qcat.compose(qcat.tensor_mor(h, f_plus_g), cmp)
        rhs = qcat.compose(cmp2, sum_map)
        if not qcat.equiv(lhs, rhs, tol):
            return CheckRecord(name, FAIL, {"naturality": [h.to_json(), f.to_json(), g.to_json()]})
    return CheckRecord(name, PASS, {"cones": count, "naturality_samples": u.samples})


# Driver


CHECKS: dict[str, Callable] = {
    "B_finite_products": lambda inst, u: check_finite_products(u),
    "C_D_symmetric_monoidal": check_symmetric_monoidal,
    "coproducts_distributive": check_coproducts_distributive,
    "C_affine": check_affine,
    "strong_monoidal": check_strong_monoidal,
    "preserve_coproducts": check_preserve_coproducts,
    "phi_full_faithful": check_phi_full_faithful,
    "psi_essentially_surjective": check_psi_essentially_surjective,
    "multiplicative_kernel": check_kernel,
    "gamma_condition": check_gamma,
}


def check_hypotheses(
    u: Universe,
    instance: ModelInstance | None = None,
    names=None,
    executor=None,
) -> CheckReport:
    """Run the selected hypothesis checks (all by default), in the canonical order.

    ``executor`` may be any ``concurrent.futures`` executor; results are
    assembled in order regardless of completion order.
    """
    inst = instance or standard_instance(u)
    selected = [n for n in HYPOTHESES if names is None or n in set(names)]
    if executor is None:
        return CheckReport([CHECKS[n](inst, u) for n in selected])
    futures = [executor.submit(CHECKS[n], inst, u) for n in selected]
    return CheckReport([f.result() for f in futures])


def run_negative_control(name: str, u: Universe) -> CheckReport:
    return check_hypotheses(u, negative_control_instance(name, u))


# Shadow of the concrete embedding


def corrupted_psi(factor: float = 2.0) -> Callable:
    """``Psi`` with its first nonzero entry scaled, which breaks trace non-increase."""

    def mor(f):
        m = psi_mor(f)
        rows = [list(r) for r in m.entries]
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                if e.choi.any():
                    rows[i][j] = cpm.scale(factor, e)
                    return QMorphism(m.src, m.dst, tuple(tuple(r) for r in rows))
        return m

    return mor


def check_concrete_embedding(u: Universe, psi: Callable = psi_mor) -> CheckReport:
    """Base-level consequences of a tensor and coproduct preserving embedding of ``Q``."""
    cat = PlusCategory(FWM)
    tol = u.tol
    ds = sorted(u.q_objects(2), key=_size_key)
    records = []

    seen = {}
    rec = CheckRecord("preimages_injective", PASS, {"objects": len(ds)})
    for d in ds:
        c, _ = choice_of_preimages(d)
        if c in seen and seen[c].dims != d.dims:
            rec = CheckRecord("preimages_injective", FAIL, {"objects": [seen[c].to_json(), d.to_json()]})
            break
        seen[c] = d
    records.append(rec)

    rec = CheckRecord("tensor_shadow", PASS, {"pairs": len(ds) ** 2})
    for d, d2 in itertools.product(ds, repeat=2):
        (c, _), (c2, _) = choice_of_preimages(d), choice_of_preimages(d2)
        lhs = psi_obj(cat.tensor_obj(c, c2))
        rhs = psi_obj(choice_of_preimages(qcat.tensor_obj(d, d2))[0])
        iso = qcat.reindex(lhs, rhs, range(len(lhs))) if lhs.dims == rhs.dims else None
        if iso is None or qcat.inverse(iso, tol) is None or not qcat.is_Qprime(iso, tol):
            rec = CheckRecord("tensor_shadow", FAIL, {"pair": [d.to_json(), d2.to_json()]})
            break
    records.append(rec)

    rec = CheckRecord("coproduct_shadow", PASS, {"pairs": len(ds) ** 2})
    for d, d2 in itertools.product(ds, repeat=2):
        (c, _), (c2, _) = choice_of_preimages(d), choice_of_preimages(d2)
        lhs = psi_obj(cat.coproduct_all([c, c2]))
        rhs = psi_obj(choice_of_preimages(qcat.coproduct_all([d, d2]))[0])
        if lhs != rhs:
            rec = CheckRecord("coproduct_shadow", FAIL, {"pair": [d.to_json(), d2.to_json()]})
            break
    records.append(rec)

    rec = CheckRecord("structural_maps_reached", PASS, {})
    nonzero = [d for d in ds if len(d)]
    for d, d2 in itertools.product(nonzero, repeat=2):
        (c, _), (c2, _) = choice_of_preimages(d), choice_of_preimages(d2)
        pairs = [
            (psi(cat.injection([c, c2], 0)), qcat.injection([d, d2], 0)),
            (psi(cat.injection([c, c2], 1)), qcat.injection([d, d2], 1)),
            (psi(cat.symmetry(c, c2)), qcat.symmetry(d, d2)),
            (psi(cat.terminal(c)), qcat.copair_all(
                [QMorphism(QObject((p,)), qcat.UNIT, ((cpm.discard(p.dim),),)) for p in d], qcat.UNIT)),
        ]
        for got, want in pairs:
            if got.src.dims != want.src.dims or got.dst.dims != want.dst.dims or not qcat.equiv(
                QMorphism(want.src, want.dst, got.entries), want, tol
            ):
                rec = CheckRecord("structural_maps_reached", FAIL, {"objects": [d.to_json(), d2.to_json()]})
                break
        if rec.status == FAIL:
            break
    records.append(rec)

    rec = CheckRecord("images_in_Q", PASS, {})
    rng = u.rng("embedding")
    choices = [choice_of_preimages(d)[0] for d in nonzero]
    morphisms = [cat.injection([c, c], 0) for c in choices] + [cat.terminal(c) for c in choices]
    morphisms += [f for f, _ in _random_composable(cat, standard_instance(u).c_objects, rng, u.samples)]
    for f in morphisms:
        image = psi(f)
        if not qcat.is_Q(image, tol) or not qcat.is_Qprime(image, tol):
            ev = {"morphism": f.to_json()}
            witness = qcat.trace_violation_witness(image)
            if witness is not None:
                j, rho, excess = witness
                ev.update({"input_index": int(j), "rho": matrix_to_json(rho), "trace_excess": float(excess)})
            rec = CheckRecord("images_in_Q", FAIL, ev)
            break
    rec.evidence.setdefault("morphisms", len(morphisms))
    records.append(rec)
    return CheckReport(records)
