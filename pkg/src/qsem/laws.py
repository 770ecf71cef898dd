"""Category-law suites: identity and associativity for every category built here.

The free categories ``Fwm(K)`` and ``Q''`` are checked exactly by
enumerating hom-sets.  The linear-algebra categories are checked
numerically on seeded random composable triples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import cpm, qcat
from .cpm import HObject
from .freecat import FWM, PlusCategory, PlusObject
from .linalg import DEFAULT_TOL, Tolerance
from .qcat import QObject
from .report import FAIL, PASS, CheckRecord

__all__ = ["LawUniverse", "check_free_laws", "check_plus_laws", "check_linear_laws", "run_law_checks"]


@dataclass(frozen=True)
class LawUniverse:
    dims: tuple = (1, 2, 3)
    max_seq_len: int = 2
    max_family: int = 3
    # Q'' is enumerated in full on this smaller universe ...
    full_family: int = 2
    full_seq_len: int = 1
    # ... and on this many sampled object quadruples of the large one
    quadruples: int = 1000
    max_triples: int = 4096
    random_triples: int = 200
    seed: int = 0
    tol: Tolerance = DEFAULT_TOL

    def k_objects(self) -> list[HObject]:
        return [HObject(f"C{d}", d) for d in self.dims]


def _homs(cat, objs) -> dict:
    return {(x, y): list(cat.hom(x, y)) for x in objs for y in objs}


def _exhaustive(cat, objs, name: str) -> CheckRecord:
    homs = _homs(cat, objs)
    morphisms = 0
    for (x, y), fs in homs.items():
        for f in fs:
            morphisms += 1
            if cat.compose(cat.identity(y), f) != f or cat.compose(f, cat.identity(x)) != f:
                return CheckRecord(name, FAIL, {"identity_law": f.to_json()})
    triples = 0
    for x, y, z, w in itertools.product(objs, repeat=4):
        fs, gs, hs = homs[x, y], homs[y, z], homs[z, w]
        if not (fs and gs and hs):
            continue
        for g in gs:
            hg = [cat.compose(h, g) for h in hs]
            for f in fs:
                gf = cat.compose(g, f)
                for h, hg_ in zip(hs, hg):
                    triples += 1
                    if cat.compose(h, gf) != cat.compose(hg_, f):
                        return CheckRecord(name, FAIL, {"associativity": [f.to_json(), g.to_json(), h.to_json()]})
    return CheckRecord(name, PASS, {"objects": len(objs), "morphisms": morphisms, "triples": triples})


def check_free_laws(u: LawUniverse) -> CheckRecord:
    """``Fwm(K)``: every composable triple over all sequences up to the length bound."""
    return _exhaustive(FWM, FWM.objects(u.k_objects(), u.max_seq_len), "Fwm_laws")


def _plus_objects(cat: PlusCategory, u: LawUniverse, seq_len: int, family: int) -> list[PlusObject]:
    return cat.objects(FWM.objects(u.k_objects(), seq_len), family)


def check_plus_laws(u: LawUniverse) -> CheckRecord:
    """``Q''``: a full sub-universe exhaustively, then whole hom-sets between sampled objects."""
    cat = PlusCategory(FWM)
    small = _exhaustive(cat, _plus_objects(cat, u, u.full_seq_len, u.full_family), "Qpp_laws")
    if small.status == FAIL:
        return small
    objs = _plus_objects(cat, u, u.max_seq_len, u.max_family)
    rng = np.random.default_rng([u.seed, 2])
    checked = skipped = triples = 0
    attempts = 0
    while checked < u.quadruples and attempts < 100 * u.quadruples:
        attempts += 1
        x, y, z, w = (objs[i] for i in rng.integers(len(objs), size=4))
        counts = [cat.hom_count(x, y), cat.hom_count(y, z), cat.hom_count(z, w)]
        if 0 in counts:
            continue
        if counts[0] * counts[1] * counts[2] > u.max_triples:
            skipped += 1
            continue
        checked += 1
        fs, gs, hs = list(cat.hom(x, y)), list(cat.hom(y, z)), list(cat.hom(z, w))
        for f in fs:
            if cat.compose(cat.identity(y), f) != f or cat.compose(f, cat.identity(x)) != f:
                return CheckRecord("Qpp_laws", FAIL, {"identity_law": f.to_json()})
        for f, g, h in itertools.product(fs, gs, hs):
            triples += 1
            if cat.compose(h, cat.compose(g, f)) != cat.compose(cat.compose(h, g), f):
                return CheckRecord("Qpp_laws", FAIL, {"associativity": [f.to_json(), g.to_json(), h.to_json()]})
    return CheckRecord("Qpp_laws", PASS, {
        "full_universe": small.evidence,
        "sampled_quadruples": checked,
        "sampled_triples": triples,
        "quadruples_over_cap": skipped,
        "objects": len(objs),
    })


def _random_qobject(rng, dims, max_parts: int) -> QObject:
    n = int(rng.integers(1, max_parts + 1))
    return qcat.obj(*(int(d) for d in rng.choice(dims, size=n)))


def check_linear_laws(u: LawUniverse) -> list[CheckRecord]:
    """CPM_s, CPM, Q and Q' on seeded random composable triples, within ``tol``."""
    tol = u.tol
    out = []
    rng = np.random.default_rng([u.seed, 1])
    worst = 0.0
    for _ in range(u.random_triples):
        a, b, c, d = (int(v) for v in rng.choice(u.dims, size=4))
        f, g, h = cpm.random_cp_map(a, b, rng), cpm.random_cp_map(b, c, rng), cpm.random_cp_map(c, d, rng)
        lhs, rhs = cpm.compose(h, cpm.compose(g, f)), cpm.compose(cpm.compose(h, g), f)
        worst = max(worst, float(np.max(np.abs(lhs.choi - rhs.choi))))
        if not cpm.equiv(lhs, rhs, tol):
            out.append(CheckRecord("CPMs_laws", FAIL, {"associativity": [f.to_json(), g.to_json(), h.to_json()]}))
            break
        if not (cpm.equiv(cpm.compose(cpm.identity(b), f), f, tol) and cpm.equiv(cpm.compose(f, cpm.identity(a)), f, tol)):
            out.append(CheckRecord("CPMs_laws", FAIL, {"identity_law": f.to_json()}))
            break
    else:
        out.append(CheckRecord("CPMs_laws", PASS, {"triples": u.random_triples, "max_deviation": worst}))

    for name, kind in (("CPM_laws", "cp"), ("Q_laws", "tni"), ("Qprime_laws", "tp")):
        rng = np.random.default_rng([u.seed, 3, len(name)])
        worst, rec = 0.0, None
        for _ in range(u.random_triples):
            x, y, z, w = (_random_qobject(rng, u.dims, u.max_family) for _ in range(4))
            f, g, h = (qcat.random_morphism(s, t, rng, kind) for s, t in ((x, y), (y, z), (z, w)))
            lhs = qcat.compose(h, qcat.compose(g, f))
            rhs = qcat.compose(qcat.compose(h, g), f)
            for (i, j) in itertools.product(range(len(w)), range(len(x))):
                worst = max(worst, float(np.max(np.abs(lhs[i, j].choi - rhs[i, j].choi))))
            if not qcat.equiv(lhs, rhs, tol):
                rec = CheckRecord(name, FAIL, {"associativity": [f.to_json(), g.to_json(), h.to_json()]})
                break
            if not (qcat.equiv(qcat.compose(qcat.identity(y), f), f, tol)
                    and qcat.equiv(qcat.compose(f, qcat.identity(x)), f, tol)):
                rec = CheckRecord(name, FAIL, {"identity_law": f.to_json()})
                break
            member = {"cp": qcat.is_CPM, "tni": qcat.is_Q, "tp": qcat.is_Qprime}[kind]
            if not member(lhs, tol):
                rec = CheckRecord(name, FAIL, {"composite_leaves_category": lhs.to_json()})
                break
        out.append(rec or CheckRecord(name, PASS, {"triples": u.random_triples, "max_deviation": worst}))
    return out


def run_law_checks(u: LawUniverse | None = None) -> list[CheckRecord]:
    u = u or LawUniverse()
    return check_linear_laws(u) + [check_free_laws(u), check_plus_laws(u)]
