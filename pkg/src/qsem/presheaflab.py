"""Presheaves on finite categories: Yoneda, left Kan extension, Day convolution.

Everything here is exact set-level computation.  A finite category is a
table of morphisms with a composition table; a presheaf assigns a finite
tuple of elements to each object and, to each morphism ``f : a -> b``, a
function ``P(b) -> P(a)`` stored as a dict.  Coends are computed as
quotients by union-find.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Sequence

from .report import FAIL, NOT_APPLICABLE, PASS, CheckRecord

__all__ = [
    "FinCategory",
    "FinMonoidalCategory",
    "FinFunctor",
    "Presheaf",
    "NatTrans",
    "CategoryLawError",
    "yoneda",
    "nat_transformations",
    "find_iso",
    "is_iso",
    "lan",
    "lan_mor",
    "precompose",
    "precompose_mor",
    "unit_of",
    "counit_of",
    "adjunction_bijection",
    "AdjunctionWitness",
    "triangle_identities",
    "EtaResult",
    "check_eta_iso",
    "day_tensor",
    "day_unit",
    "pointwise_product",
    "empty_presheaf",
    "all_presheaves",
    "discrete_category",
    "poset_category",
    "discrete_monoid",
    "group_category",
    "terminal_monoidal",
    "finset01",
    "boolean_lattice",
    "identity_functor",
    "functor_from_object_map",
    "z2_monoidal",
    "chain",
    "run_lab_checks",
    "strict_monoidal_examples",
]


class CategoryLawError(ValueError):
    """A table does not satisfy the category or functor laws."""


# Finite categories


@dataclass
class FinCategory:
    """``mors`` maps a morphism name to ``(src, dst)``; ``comp[(g, f)]`` is ``g o f``."""

    name: str
    objects: tuple
    mors: dict
    comp: dict
    ids: dict

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self._hom = {(a, b): [] for a in self.objects for b in self.objects}
        for m, (a, b) in self.mors.items():
            self._hom[(a, b)].append(m)

    def hom(self, a, b) -> list:
        return self._hom[(a, b)]

    def src(self, m):
        return self.mors[m][0]

    def dst(self, m):
        return self.mors[m][1]

    def compose(self, g, f):
        return self.comp[(g, f)]

    def check_laws(self) -> None:
        for a in self.objects:
            i = self.ids[a]
            if self.mors[i] != (a, a):
                raise CategoryLawError(f"identity of {a} has the wrong type")
        for f, (a, b) in self.mors.items():
            if self.compose(self.ids[b], f) != f or self.compose(f, self.ids[a]) != f:
                raise CategoryLawError(f"identity law fails at {f}")
        for f, (a, b) in self.mors.items():
            for c in self.objects:
                for g in self.hom(b, c):
                    gf = self.compose(g, f)
                    if self.mors[gf] != (a, c):
                        raise CategoryLawError(f"{g} o {f} has the wrong type")
                    for d in self.objects:
                        for h in self.hom(c, d):
                            if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                                raise CategoryLawError(f"associativity fails at {h}, {g}, {f}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "objects": [repr(a) for a in self.objects],
            "morphisms": [[repr(m), repr(a), repr(b)] for m, (a, b) in self.mors.items()],
            "composition": [[repr(g), repr(f), repr(h)] for (g, f), h in self.comp.items()],
            "identities": {repr(a): repr(i) for a, i in self.ids.items()},
        }


def _from_hom_rule(name, objects, hom_rule, compose_rule, ident) -> FinCategory:
    mors = {}
    for a in objects:
        for b in objects:
            for m in hom_rule(a, b):
                mors[m] = (a, b)
    comp = {}
    for f, (a, b) in mors.items():
        for g, (b2, c) in mors.items():
            if b2 == b:
                comp[(g, f)] = compose_rule(g, f)
    return FinCategory(name, tuple(objects), mors, comp, {a: ident(a) for a in objects})


def discrete_category(objects: Sequence) -> FinCategory:
    return _from_hom_rule(
        "discrete", objects,
        lambda a, b: [("id", a)] if a == b else [],
        lambda g, f: f,
        lambda a: ("id", a),
    )


def poset_category(objects: Sequence, leq: Callable, name: str = "poset") -> FinCategory:
    """Morphism ``(a, b)`` exists iff ``leq(a, b)``."""
    return _from_hom_rule(
        name, objects,
        lambda a, b: [(a, b)] if leq(a, b) else [],
        lambda g, f: (f[0], g[1]),
        lambda a: (a, a),
    )


def group_category(elements: Sequence, mult: Callable, unit, name: str = "group") -> FinCategory:
    """One object ``"*"``; morphisms are the monoid elements."""
    return _from_hom_rule(
        name, ["*"],
        lambda a, b: list(elements),
        lambda g, f: mult(g, f),
        lambda a: unit,
    )


@dataclass
class FinMonoidalCategory:
    """Strict monoidal structure on a finite category, given by tables."""

    cat: FinCategory
    tensor_obj: dict
    tensor_mor: dict
    unit: Hashable

    def check_laws(self) -> None:
        c = self.cat
        t, tm = self.tensor_obj, self.tensor_mor
        for a in c.objects:
            if t[(a, self.unit)] != a or t[(self.unit, a)] != a:
                raise CategoryLawError(f"unit law fails at {a}")
            for b in c.objects:
                for d in c.objects:
                    if t[(t[(a, b)], d)] != t[(a, t[(b, d)])]:
                        raise CategoryLawError(f"associativity fails at {a}, {b}, {d}")
        for a in c.objects:
            for b in c.objects:
                if tm[(c.ids[a], c.ids[b])] != c.ids[t[(a, b)]]:
                    raise CategoryLawError("tensor does not preserve identities")
        for (f, g), fg in tm.items():
            (a, b), (a2, b2) = c.mors[f], c.mors[g]
            if c.mors[fg] != (t[(a, a2)], t[(b, b2)]):
                raise CategoryLawError(f"{f} (x) {g} has the wrong type")
            for (f2, g2) in tm:
                if c.src(f2) == b and c.src(g2) == b2:
                    lhs = c.compose(tm[(f2, g2)], fg)
                    rhs = tm[(c.compose(f2, f), c.compose(g2, g))]
                    if lhs != rhs:
                        raise CategoryLawError("interchange law fails")


def _monoidal_from_rules(cat: FinCategory, tobj, tmor, unit) -> FinMonoidalCategory:
    return FinMonoidalCategory(
        cat,
        {(a, b): tobj(a, b) for a in cat.objects for b in cat.objects},
        {(f, g): tmor(f, g) for f in cat.mors for g in cat.mors},
        unit,
    )


def discrete_monoid(n: int) -> FinMonoidalCategory:
    """``Z/n`` as a discrete monoidal category (addition as tensor)."""
    cat = discrete_category(range(n))
    cat.name = f"Z/{n} discrete"
    return _monoidal_from_rules(
        cat, lambda a, b: (a + b) % n, lambda f, g: ("id", (f[1] + g[1]) % n), 0
    )


def terminal_monoidal() -> FinMonoidalCategory:
    cat = group_category([0], lambda g, f: 0, 0, name="terminal")
    return _monoidal_from_rules(cat, lambda a, b: "*", lambda f, g: 0, "*")


def z2_monoidal() -> FinMonoidalCategory:
    """``Z/2`` as a one-object category; tensor of morphisms is the group law."""
    cat = group_category([0, 1], lambda g, f: (g + f) % 2, 0, name="Z/2")
    return _monoidal_from_rules(cat, lambda a, b: "*", lambda f, g: (f + g) % 2, "*")


def finset01() -> FinMonoidalCategory:
    """Finite sets of size 0 and 1 with cartesian product; as a category, ``0 < 1``."""
    cat = poset_category([0, 1], lambda a, b: a <= b, name="FinSet{0,1}")
    return _monoidal_from_rules(
        cat, lambda a, b: min(a, b), lambda f, g: (min(f[0], g[0]), min(f[1], g[1])), 1
    )


def boolean_lattice() -> FinMonoidalCategory:
    """Subsets of a 2-element set under inclusion, with intersection as tensor."""
    objs = [0, 1, 2, 3]
    cat = poset_category(objs, lambda a, b: a & b == a, name="Bool2")
    return _monoidal_from_rules(cat, lambda a, b: a & b, lambda f, g: (f[0] & g[0], f[1] & g[1]), 3)


def chain(n: int) -> FinCategory:
    return poset_category(range(n), lambda a, b: a <= b, name=f"chain{n}")


# Functors


@dataclass
class FinFunctor:
    src: FinCategory
    dst: FinCategory
    on_obj: dict
    on_mor: dict

    def check_laws(self) -> None:
        for a in self.src.objects:
            if self.on_mor[self.src.ids[a]] != self.dst.ids[self.on_obj[a]]:
                raise CategoryLawError(f"identity of {a} not preserved")
        for f, (a, b) in self.src.mors.items():
            if self.dst.mors[self.on_mor[f]] != (self.on_obj[a], self.on_obj[b]):
                raise CategoryLawError(f"image of {f} has the wrong type")
        for (g, f), h in self.src.comp.items():
            if self.on_mor[h] != self.dst.compose(self.on_mor[g], self.on_mor[f]):
                raise CategoryLawError(f"composition {g} o {f} not preserved")

    def full_faithful_failure(self):
        """First ``(a, b)`` where the hom-map is not bijective, or ``None``."""
        for a in self.src.objects:
            for b in self.src.objects:
                images = [self.on_mor[f] for f in self.src.hom(a, b)]
                target = self.dst.hom(self.on_obj[a], self.on_obj[b])
                if len(set(images)) != len(images) or set(images) != set(target):
                    return a, b
        return None

    def is_full_faithful(self) -> bool:
        return self.full_faithful_failure() is None


def identity_functor(cat: FinCategory) -> FinFunctor:
    return FinFunctor(cat, cat, {a: a for a in cat.objects}, {m: m for m in cat.mors})


def functor_from_object_map(src: FinCategory, dst: FinCategory, on_obj: dict) -> FinFunctor:
    """For thin targets (posets, the terminal category) the object map determines the functor."""
    on_mor = {}
    for f, (a, b) in src.mors.items():
        hom = dst.hom(on_obj[a], on_obj[b])
        if len(hom) != 1:
            raise CategoryLawError("object map does not determine the functor")
        on_mor[f] = hom[0]
    return FinFunctor(src, dst, dict(on_obj), on_mor)


# Presheaves


@dataclass
class Presheaf:
    """Contravariant ``cat -> FinSet``: ``act[f][y] = P(f)(y)`` for ``f : a -> b``, ``y in P(b)``."""

    cat: FinCategory
    sets: dict
    act: dict
    # for quotients: object -> (generator -> class representative)
    canon: dict | None = field(default=None, repr=False, compare=False)

    def check_laws(self) -> None:
        c = self.cat
        for f, (a, b) in c.mors.items():
            table = self.act[f]
            if set(table) != set(self.sets[b]) or any(v not in self.sets[a] for v in table.values()):
                raise CategoryLawError(f"action of {f} has the wrong type")
        for a in c.objects:
            if any(self.act[c.ids[a]][y] != y for y in self.sets[a]):
                raise CategoryLawError(f"identity of {a} acts nontrivially")
        for (g, f), h in c.comp.items():
            for z in self.sets[c.dst(g)]:
                if self.act[h][z] != self.act[f][self.act[g][z]]:
                    raise CategoryLawError(f"composition {g} o {f} not respected")

    def sizes(self) -> dict:
        return {a: len(self.sets[a]) for a in self.cat.objects}

    def to_json(self) -> dict:
        return {
            "category": self.cat.name,
            "sets": {repr(a): [repr(x) for x in xs] for a, xs in self.sets.items()},
            "actions": {
                repr(f): {repr(y): repr(x) for y, x in t.items()} for f, t in self.act.items()
            },
        }


@dataclass
class NatTrans:
    src: Presheaf
    dst: Presheaf
    comps: dict

    def is_natural(self) -> bool:
        c = self.src.cat
        for f, (a, b) in c.mors.items():
            for y in self.src.sets[b]:
                if self.comps[a][self.src.act[f][y]] != self.dst.act[f][self.comps[b][y]]:
                    return False
        return True

    def is_bijective(self) -> bool:
        return all(
            len(set(self.comps[a].values())) == len(self.dst.sets[a]) == len(self.src.sets[a])
            for a in self.src.cat.objects
        )

    def key(self) -> tuple:
        return tuple(tuple(sorted(self.comps[a].items(), key=repr)) for a in self.src.cat.objects)


def empty_presheaf(cat: FinCategory) -> Presheaf:
    return Presheaf(cat, {a: () for a in cat.objects}, {f: {} for f in cat.mors})


def yoneda(cat: FinCategory, c) -> Presheaf:
    """``hom(-, c)``, acting by precomposition."""
    sets = {a: tuple(cat.hom(a, c)) for a in cat.objects}
    act = {f: {h: cat.compose(h, f) for h in sets[b]} for f, (a, b) in cat.mors.items()}
    return Presheaf(cat, sets, act)


def nat_transformations(p: Presheaf, q: Presheaf, bijective: bool = False) -> Iterator[NatTrans]:
    """All natural transformations ``p => q`` by backtracking over objects."""
    cat = p.cat
    objs = list(cat.objects)

    def consistent(assigned: dict, a) -> bool:
        for f, (x, y) in cat.mors.items():
            if x in assigned and y in assigned and a in (x, y):
                ax, ay = assigned[x], assigned[y]
                for z in p.sets[y]:
                    if ax[p.act[f][z]] != q.act[f][ay[z]]:
                        return False
        return True

    def options(a):
        src, dst = p.sets[a], q.sets[a]
        if bijective:
            if len(src) != len(dst):
                return
            for perm in itertools.permutations(dst):
                yield dict(zip(src, perm))
        else:
            for values in itertools.product(dst, repeat=len(src)):
                yield dict(zip(src, values))

    def go(k: int, assigned: dict):
        if k == len(objs):
            yield NatTrans(p, q, dict(assigned))
            return
        a = objs[k]
        for choice in options(a):
            assigned[a] = choice
            if consistent(assigned, a):
                yield from go(k + 1, assigned)
            del assigned[a]

    yield from go(0, {})


def find_iso(p: Presheaf, q: Presheaf) -> NatTrans | None:
    return next(nat_transformations(p, q, bijective=True), None)


def is_iso(p: Presheaf, q: Presheaf) -> bool:
    return find_iso(p, q) is not None


def all_presheaves(cat: FinCategory, max_size: int) -> Iterator[Presheaf]:
    """Every presheaf with sets ``range(k)``, ``k <= max_size`` (labelled, not up to iso)."""
    objs = list(cat.objects)
    nonid = [f for f in cat.mors if f not in set(cat.ids.values())]
    for sizes in itertools.product(range(max_size + 1), repeat=len(objs)):
        sets = {a: tuple(range(n)) for a, n in zip(objs, sizes)}
        base = {cat.ids[a]: {y: y for y in sets[a]} for a in objs}

        def go(k: int, act: dict):
            if k == len(nonid):
                p = Presheaf(cat, sets, dict(act))
                try:
                    p.check_laws()
                except CategoryLawError:
                    return
                yield p
                return
            f = nonid[k]
            a, b = cat.mors[f]
            for values in itertools.product(sets[a], repeat=len(sets[b])):
                act[f] = dict(zip(sets[b], values))
                if _partial_ok(cat, act, sets):
                    yield from go(k + 1, act)
                del act[f]

        yield from go(0, dict(base))


def _partial_ok(cat, act, sets) -> bool:
    for (g, f), h in cat.comp.items():
        if g in act and f in act and h in act:
            for z in sets[cat.dst(g)]:
                if act[h][z] != act[f][act[g][z]]:
                    return False
    return True


# Coends


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.order = {x: i for i, x in enumerate(self.parent)}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        # the earliest enumerated element stays the representative
        if self.order[rx] < self.order[ry]:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry

    def classes(self) -> tuple:
        return tuple(x for x in self.parent if self.find(x) == x)


def _quotient_presheaf(cat, generators, relations, action) -> Presheaf:
    """Presheaf whose value at ``b`` is ``generators[b]`` modulo ``relations[b]``.

    ``action(v, elem)`` lifts ``v : b' -> b`` to representatives.
    """
    finders, sets = {}, {}
    for b in cat.objects:
        uf = _UnionFind(generators[b])
        for x, y in relations[b]:
            uf.union(x, y)
        finders[b] = uf
        sets[b] = uf.classes()
    act = {
        v: {e: finders[b2].find(action(v, e)) for e in sets[b]}
        for v, (b2, b) in cat.mors.items()
    }
    return Presheaf(cat, sets, act, canon={b: finders[b].find for b in cat.objects})


def lan(phi: FinFunctor, f: Presheaf) -> Presheaf:
    """Left Kan extension of ``f`` along ``phi``.

    At ``b``: pairs ``(h : b -> phi a, x in f(a))`` modulo
    ``(phi(u) o h, x') ~ (h, f(u) x')`` for ``u : a -> a'``; elements are
    represented as ``(h, a, x)``.
    """
    A, B = phi.src, phi.dst
    gens, rels = {}, {}
    for b in B.objects:
        gens[b] = [(h, a, x) for a in A.objects for h in B.hom(b, phi.on_obj[a]) for x in f.sets[a]]
        rels[b] = [
            ((B.compose(phi.on_mor[u], h), a2, x2), (h, a, f.act[u][x2]))
            for u, (a, a2) in A.mors.items()
            for h in B.hom(b, phi.on_obj[a])
            for x2 in f.sets[a2]
        ]
    return _quotient_presheaf(B, gens, rels, lambda v, e: (B.compose(e[0], v), e[1], e[2]))


def lan_mor(phi: FinFunctor, alpha: NatTrans, lf: Presheaf | None = None, lg: Presheaf | None = None) -> NatTrans:
    """``lan(alpha) : lan f => lan g``, ``[h, a, x] -> [h, a, alpha_a x]``."""
    lf = lf or lan(phi, alpha.src)
    lg = lg or lan(phi, alpha.dst)
    finders = {b: _finder(lg, b) for b in phi.dst.objects}
    comps = {
        b: {e: finders[b]((e[0], e[1], alpha.comps[e[1]][e[2]])) for e in lf.sets[b]}
        for b in phi.dst.objects
    }
    return NatTrans(lf, lg, comps)


def _finder(lp: Presheaf, b) -> Callable:
    """Class representative of any generator of a quotient presheaf at ``b``."""
    return lp.canon[b]


def precompose(phi: FinFunctor, g: Presheaf) -> Presheaf:
    A = phi.src
    sets = {a: g.sets[phi.on_obj[a]] for a in A.objects}
    act = {u: g.act[phi.on_mor[u]] for u in A.mors}
    return Presheaf(A, sets, act)


def precompose_mor(phi: FinFunctor, alpha: NatTrans) -> NatTrans:
    src, dst = precompose(phi, alpha.src), precompose(phi, alpha.dst)
    return NatTrans(src, dst, {a: alpha.comps[phi.on_obj[a]] for a in phi.src.objects})


def unit_of(phi: FinFunctor, f: Presheaf, lf: Presheaf | None = None) -> NatTrans:
    """``eta_f : f => phi*(lan f)``, ``x -> [id, a, x]``."""
    lf = lf or lan(phi, f)
    target = precompose(phi, lf)
    comps = {}
    for a in phi.src.objects:
        b = phi.on_obj[a]
        finder = _finder(lf, b)
        comps[a] = {x: finder((phi.dst.ids[b], a, x)) for x in f.sets[a]}
    return NatTrans(f, target, comps)


def counit_of(phi: FinFunctor, g: Presheaf) -> NatTrans:
    """``eps_g : lan(phi* g) => g``, ``[h, a, y] -> g(h) y``."""
    lp = lan(phi, precompose(phi, g))
    comps = {b: {e: g.act[e[0]][e[2]] for e in lp.sets[b]} for b in phi.dst.objects}
    return NatTrans(lp, g, comps)


def _vertical(beta: NatTrans, alpha: NatTrans) -> NatTrans:
    return NatTrans(
        alpha.src, beta.dst,
        {a: {x: beta.comps[a][alpha.comps[a][x]] for x in alpha.src.sets[a]} for a in alpha.src.cat.objects},
    )


def _is_identity(alpha: NatTrans) -> bool:
    return all(all(k == v for k, v in alpha.comps[a].items()) for a in alpha.src.cat.objects)


@dataclass
class AdjunctionWitness:
    ok: bool
    lhs_count: int
    rhs_count: int
    detail: dict = field(default_factory=dict)


def adjunction_bijection(phi: FinFunctor, f: Presheaf, g: Presheaf) -> AdjunctionWitness:
    """Check ``Nat(lan f, g) ~= Nat(f, phi* g)`` through the explicit transpose maps."""
    lf = lan(phi, f)
    pg = precompose(phi, g)
    left = list(nat_transformations(lf, g))
    right = list(nat_transformations(f, pg))
    transposes = {}
    for alpha in left:
        beta = NatTrans(f, pg, {
            a: {x: alpha.comps[phi.on_obj[a]][_finder(lf, phi.on_obj[a])((phi.dst.ids[phi.on_obj[a]], a, x))]
                for x in f.sets[a]}
            for a in phi.src.objects
        })
        if not beta.is_natural():
            return AdjunctionWitness(False, len(left), len(right), {"transpose_not_natural": True})
        back = NatTrans(lf, g, {
            b: {e: g.act[e[0]][beta.comps[e[1]][e[2]]] for e in lf.sets[b]} for b in phi.dst.objects
        })
        if back.key() != alpha.key():
            return AdjunctionWitness(False, len(left), len(right), {"round_trip_fails": True})
        transposes[beta.key()] = alpha
    if len(transposes) != len(left) or set(transposes) != {b.key() for b in right}:
        return AdjunctionWitness(False, len(left), len(right), {"not_bijective": True})
    return AdjunctionWitness(True, len(left), len(right))


def triangle_identities(phi: FinFunctor, f: Presheaf, g: Presheaf) -> bool:
    """``eps_{lan f} o lan(eta_f) = id`` and ``phi*(eps_g) o eta_{phi* g} = id``."""
    lf = lan(phi, f)
    eta_f = unit_of(phi, f, lf)
    lhs = _vertical(counit_of(phi, lf), lan_mor(phi, eta_f, lf, lan(phi, eta_f.dst)))
    if not _is_identity(lhs):
        return False
    pg = precompose(phi, g)
    eta = unit_of(phi, pg)
    eps = counit_of(phi, g)
    return _is_identity(_vertical(precompose_mor(phi, eps), eta))


@dataclass
class EtaResult:
    status: str
    bijective: bool
    witness: dict = field(default_factory=dict)


def check_eta_iso(phi: FinFunctor, f: Presheaf) -> EtaResult:
    """Whether ``eta_f : f => phi*(lan f)`` is invertible.

    Only meaningful when ``phi`` is full and faithful; otherwise the status is
    not-applicable, but the bijectivity of ``eta`` is still reported.
    """
    eta = unit_of(phi, f)
    bad = next(
        (a for a in phi.src.objects
         if len(set(eta.comps[a].values())) != len(eta.dst.sets[a]) or len(f.sets[a]) != len(eta.dst.sets[a])),
        None,
    )
    bijective = bad is None and eta.is_natural()
    witness = {} if bad is None else {
        "object": repr(bad), "source_size": len(f.sets[bad]), "target_size": len(eta.dst.sets[bad]),
    }
    failure = phi.full_faithful_failure()
    if failure is not None:
        return EtaResult(NOT_APPLICABLE, bijective, {"not_full_faithful_on": [repr(x) for x in failure], **witness})
    return EtaResult(PASS if bijective else FAIL, bijective, witness)


# Day convolution


def day_tensor(m: FinMonoidalCategory, f: Presheaf, g: Presheaf) -> Presheaf:
    """``(f * g)(c) = coend_{c1,c2} hom(c, c1 (x) c2) x f(c1) x g(c2)``."""
    C, t, tm = m.cat, m.tensor_obj, m.tensor_mor
    gens, rels = {}, {}
    for c in C.objects:
        gens[c] = [
            (h, c1, c2, x, y)
            for c1 in C.objects for c2 in C.objects
            for h in C.hom(c, t[(c1, c2)])
            for x in f.sets[c1] for y in g.sets[c2]
        ]
        rels[c] = [
            ((C.compose(tm[(u, v)], h), c1b, c2b, xb, yb), (h, c1, c2, f.act[u][xb], g.act[v][yb]))
            for u, (c1, c1b) in C.mors.items()
            for v, (c2, c2b) in C.mors.items()
            for h in C.hom(c, t[(c1, c2)])
            for xb in f.sets[c1b] for yb in g.sets[c2b]
        ]
    return _quotient_presheaf(C, gens, rels, lambda w, e: (C.compose(e[0], w),) + e[1:])


def day_unit(m: FinMonoidalCategory) -> Presheaf:
    return yoneda(m.cat, m.unit)


def pointwise_product(f: Presheaf, g: Presheaf) -> Presheaf:
    cat = f.cat
    sets = {a: tuple(itertools.product(f.sets[a], g.sets[a])) for a in cat.objects}
    act = {
        u: {(x, y): (f.act[u][x], g.act[u][y]) for x, y in sets[b]} for u, (a, b) in cat.mors.items()
    }
    return Presheaf(cat, sets, act)


# The lab report


def _record(name: str, ok: bool, evidence: dict | None = None) -> CheckRecord:
    return CheckRecord(name, PASS if ok else FAIL, evidence or {})


def run_lab_checks() -> list[CheckRecord]:
    """Every laboratory check on the built-in categories."""
    out: list[CheckRecord] = []
    c3 = chain(3)
    bl, f01, z3 = boolean_lattice(), finset01(), discrete_monoid(3)

    # Yoneda full faithfulness
    ok, detail = True, {}
    for cat in (c3, bl.cat, z2_monoidal().cat, discrete_category(["p", "q"])):
        for a in cat.objects:
            for b in cat.objects:
                n = sum(1 for _ in nat_transformations(yoneda(cat, a), yoneda(cat, b)))
                if n != len(cat.hom(a, b)):
                    ok, detail = False, {"category": cat.name, "pair": [repr(a), repr(b)], "nat": n}
    out.append(_record("yoneda_full_faithful", ok, detail))

    # lan -| precompose along a full inclusion and a non-full collapse
    incl = functor_from_object_map(poset_category([0, 2], lambda a, b: a <= b), c3, {0: 0, 2: 2})
    collapse = functor_from_object_map(
        discrete_category(["p", "q"]), terminal_monoidal().cat, {"p": "*", "q": "*"}
    )
    ok, counts = True, []
    for phi in (incl, collapse, identity_functor(c3)):
        for f in list(all_presheaves(phi.src, 1)):
            for g in list(all_presheaves(phi.dst, 1)):
                w = adjunction_bijection(phi, f, g)
                counts.append((w.lhs_count, w.rhs_count))
                ok = ok and w.ok and triangle_identities(phi, f, g)
    out.append(_record("lan_precompose_adjunction", ok, {"cases": len(counts)}))

    # eta iso under full faithfulness, failure otherwise
    eta_ok = all(check_eta_iso(incl, f).status == PASS for f in all_presheaves(incl.src, 2))
    bad = check_eta_iso(collapse, yoneda(collapse.src, "p"))
    out.append(_record("eta_iso_full_faithful", eta_ok))
    out.append(_record(
        "eta_fails_non_full", bad.status == NOT_APPLICABLE and not bad.bijective, bad.witness
    ))

    # Day convolution
    ok, detail = True, {}
    for m in (f01, bl, z3, z2_monoidal()):
        ps = list(all_presheaves(m.cat, 1))[:6]
        unit = day_unit(m)
        for f in ps:
            if not is_iso(day_tensor(m, f, unit), f) or not is_iso(day_tensor(m, unit, f), f):
                ok, detail = False, {"category": m.cat.name, "law": "unit"}
        for f, g, h in itertools.product(ps[:3], repeat=3):
            if not is_iso(day_tensor(m, day_tensor(m, f, g), h), day_tensor(m, f, day_tensor(m, g, h))):
                ok, detail = False, {"category": m.cat.name, "law": "associativity"}
    out.append(_record("day_unit_associativity", ok, detail))

    ok = all(
        is_iso(day_tensor(m, yoneda(m.cat, a), yoneda(m.cat, b)), yoneda(m.cat, m.tensor_obj[(a, b)]))
        for m in (f01, bl, z3, z2_monoidal()) for a in m.cat.objects for b in m.cat.objects
    )
    out.append(_record("day_representables", ok))

    ok = all(
        is_iso(day_tensor(m, f, g), pointwise_product(f, g))
        for m in (f01, bl) for f in all_presheaves(m.cat, 1) for g in all_presheaves(m.cat, 1)
    )
    out.append(_record("day_cartesian_pointwise", ok))

    ok = all(
        is_iso(day_tensor(m, f, g), day_tensor(m, g, f))
        for m in (f01, bl, z3) for f in all_presheaves(m.cat, 1) for g in all_presheaves(m.cat, 1)
    )
    out.append(_record("day_symmetry", ok))

    ok, detail = True, {}
    for m_src, m_dst, phi in strict_monoidal_examples():
        if not is_iso(lan(phi, day_unit(m_src)), day_unit(m_dst)):
            ok, detail = False, {"category": m_src.cat.name, "law": "unit"}
        ps = list(all_presheaves(m_src.cat, 1))
        for f, g in itertools.product(ps, repeat=2):
            lhs = lan(phi, day_tensor(m_src, f, g))
            rhs = day_tensor(m_dst, lan(phi, f), lan(phi, g))
            if not is_iso(lhs, rhs):
                ok, detail = False, {"category": m_src.cat.name, "law": "tensor"}
    out.append(_record("lan_strong_monoidal", ok, detail))
    return out


def strict_monoidal_examples() -> list[tuple[FinMonoidalCategory, FinMonoidalCategory, FinFunctor]]:
    """Strict monoidal functors between built-in categories."""
    f01, bl, z3, term = finset01(), boolean_lattice(), discrete_monoid(3), terminal_monoidal()
    return [
        (f01, bl, functor_from_object_map(f01.cat, bl.cat, {0: 0, 1: 3})),
        (z3, term, functor_from_object_map(z3.cat, term.cat, {0: "*", 1: "*", 2: "*"})),
    ]
