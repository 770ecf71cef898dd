"""Free affine symmetric monoidal category and free finite coproduct completion.

``Fwm(K)`` over a discrete category ``K``: objects are finite sequences of
``K``-objects, a morphism ``S -> T`` is an injection ``inj : [len T] -> [len S]``
with ``S[inj[i]] == T[i]`` (the component maps are identities because ``K``
is discrete), and tensor is concatenation with the empty sequence as unit.
With ``affine=False`` the same code gives the free symmetric monoidal
category, where the injections must be bijections.

``C+`` over any base category: objects are finite families, a morphism is a
function on indices together with one base morphism per source index, and
coproduct is concatenation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .cpm import HObject

__all__ = [
    "FwmObject",
    "FwmMorphism",
    "Fwm",
    "FWM",
    "FSM",
    "fwm_id",
    "fwm_compose",
    "fwm_tensor",
    "fwm_tensor_mor",
    "fwm_enumerate_hom",
    "PlusObject",
    "PlusMorphism",
    "PlusCategory",
    "plus_complete",
    "NotAffine",
    "AffineExtension",
    "extend_affine",
    "CoproductExtension",
    "extend_coproduct",
]


class NotAffine(ValueError):
    """The target category has no terminal tensor unit."""


@dataclass(frozen=True)
class FwmObject:
    seq: tuple[HObject, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "seq", tuple(self.seq))

    def __len__(self):
        return len(self.seq)

    def __getitem__(self, i):
        return self.seq[i]

    def __iter__(self):
        return iter(self.seq)

    def __str__(self):
        return "(" + ",".join(str(h) for h in self.seq) + ")"

    def to_json(self) -> list:
        return [h.to_json() for h in self.seq]

    @classmethod
    def from_json(cls, data: list) -> "FwmObject":
        return cls(tuple(HObject.from_json(h) for h in data))


@dataclass(frozen=True)
class FwmMorphism:
    src: FwmObject
    dst: FwmObject
    inj: tuple[int, ...]

    def __post_init__(self):
        inj = tuple(int(k) for k in self.inj)
        object.__setattr__(self, "inj", inj)
        if len(inj) != len(self.dst):
            raise ValueError(f"injection of length {len(inj)} for codomain {self.dst}")
        if len(set(inj)) != len(inj) or any(k < 0 or k >= len(self.src) for k in inj):
            raise ValueError(f"{inj} is not an injection into [{len(self.src)}]")
        for i, k in enumerate(inj):
            if self.src[k] != self.dst[i]:
                raise ValueError(f"position {i} of {self.dst} is not matched by {self.src}[{k}]")

    def __str__(self):
        return f"{self.src}->{self.dst}{list(self.inj)}"

    def to_json(self) -> dict:
        return {"src": self.src.to_json(), "dst": self.dst.to_json(), "inj": list(self.inj)}

    @classmethod
    def from_json(cls, data: dict) -> "FwmMorphism":
        return cls(FwmObject.from_json(data["src"]), FwmObject.from_json(data["dst"]), tuple(data["inj"]))


class Fwm:
    """Operations of ``Fwm(K)`` (``affine=True``) or its non-affine sibling."""

    def __init__(self, affine: bool = True):
        self.affine = affine
        self.unit = FwmObject(())
        self.name = "Fwm(K)" if affine else "Fsm(K)"

    def __repr__(self):
        return self.name

    def is_morphism(self, f: FwmMorphism) -> bool:
        return self.affine or len(f.src) == len(f.dst)

    def identity(self, x: FwmObject) -> FwmMorphism:
        return FwmMorphism(x, x, tuple(range(len(x))))

    def compose(self, g: FwmMorphism, f: FwmMorphism) -> FwmMorphism:
        if f.dst != g.src:
            raise ValueError(f"cannot compose {g} after {f}")
        return FwmMorphism(f.src, g.dst, tuple(f.inj[k] for k in g.inj))

    def tensor_obj(self, x: FwmObject, y: FwmObject) -> FwmObject:
        return FwmObject(x.seq + y.seq)

    def tensor_mor(self, f: FwmMorphism, g: FwmMorphism) -> FwmMorphism:
        shift = len(f.src)
        return FwmMorphism(
            self.tensor_obj(f.src, g.src),
            self.tensor_obj(f.dst, g.dst),
            f.inj + tuple(shift + k for k in g.inj),
        )

    def symmetry(self, x: FwmObject, y: FwmObject) -> FwmMorphism:
        n, m = len(x), len(y)
        return FwmMorphism(
            self.tensor_obj(x, y), self.tensor_obj(y, x), tuple(range(n, n + m)) + tuple(range(n))
        )

    def terminal(self, x: FwmObject) -> FwmMorphism:
        if not self.affine and len(x):
            raise NotAffine(f"{self.name} has no map {x} -> I")
        return FwmMorphism(x, self.unit, ())

    def hom(self, x: FwmObject, y: FwmObject) -> Iterator[FwmMorphism]:
        """All morphisms ``x -> y`` in lexicographic order of the injection."""
        if not self.affine and len(x) != len(y):
            return
        for inj in itertools.permutations(range(len(x)), len(y)):
            if all(x[k] == y[i] for i, k in enumerate(inj)):
                yield FwmMorphism(x, y, inj)

    def objects(self, k_objects: Sequence[HObject], max_len: int) -> list[FwmObject]:
        """All sequences of length at most ``max_len``, shortest first."""
        out = []
        for n in range(max_len + 1):
            out.extend(FwmObject(s) for s in itertools.product(k_objects, repeat=n))
        return out


FWM = Fwm(affine=True)
FSM = Fwm(affine=False)


def fwm_id(x: FwmObject) -> FwmMorphism:
    return FWM.identity(x)


def fwm_compose(g: FwmMorphism, f: FwmMorphism) -> FwmMorphism:
    return FWM.compose(g, f)


def fwm_tensor(x: FwmObject, y: FwmObject) -> FwmObject:
    return FWM.tensor_obj(x, y)


def fwm_tensor_mor(f: FwmMorphism, g: FwmMorphism) -> FwmMorphism:
    return FWM.tensor_mor(f, g)


def fwm_enumerate_hom(x: FwmObject, y: FwmObject) -> list[FwmMorphism]:
    return list(FWM.hom(x, y))


# Free finite coproduct completion


@dataclass(frozen=True)
class PlusObject:
    family: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "family", tuple(self.family))

    def __len__(self):
        return len(self.family)

    def __getitem__(self, a):
        return self.family[a]

    def __iter__(self):
        return iter(self.family)

    def __str__(self):
        return "{" + ",".join(str(x) for x in self.family) + "}"

    def to_json(self) -> list:
        return [x.to_json() for x in self.family]


@dataclass(frozen=True)
class PlusMorphism:
    src: PlusObject
    dst: PlusObject
    fn: tuple[int, ...]
    comps: tuple

    def __post_init__(self):
        object.__setattr__(self, "fn", tuple(int(b) for b in self.fn))
        object.__setattr__(self, "comps", tuple(self.comps))
        if len(self.fn) != len(self.src) or len(self.comps) != len(self.src):
            raise ValueError("need one target index and one component per source index")
        for a, (b, f) in enumerate(zip(self.fn, self.comps)):
            if not 0 <= b < len(self.dst):
                raise ValueError(f"index {a} sent to {b}, outside [{len(self.dst)}]")
            if f.src != self.src[a] or f.dst != self.dst[b]:
                raise ValueError(f"component {a} is {f}, expected {self.src[a]} -> {self.dst[b]}")

    def __str__(self):
        return f"{self.src}->{self.dst} fn={list(self.fn)}"

    def to_json(self) -> dict:
        return {
            "src": self.src.to_json(),
            "dst": self.dst.to_json(),
            "fn": list(self.fn),
            "comps": [f.to_json() for f in self.comps],
        }


class PlusCategory:
    """``C+`` for a base category exposing ``identity``, ``compose``, ``hom``,
    and optionally ``tensor_obj``/``tensor_mor``/``unit``/``terminal``."""

    def __init__(self, base):
        self.base = base
        self.name = f"({getattr(base, 'name', base)})+"

    def __repr__(self):
        return self.name

    @property
    def unit(self) -> PlusObject:
        return PlusObject((self.base.unit,))

    @property
    def affine(self) -> bool:
        return getattr(self.base, "affine", False)

    def identity(self, x: PlusObject) -> PlusMorphism:
        return PlusMorphism(x, x, tuple(range(len(x))), tuple(self.base.identity(v) for v in x))

    def compose(self, g: PlusMorphism, f: PlusMorphism) -> PlusMorphism:
        if f.dst != g.src:
            raise ValueError(f"cannot compose {g} after {f}")
        fn = tuple(g.fn[b] for b in f.fn)
        comps = tuple(self.base.compose(g.comps[b], fa) for b, fa in zip(f.fn, f.comps))
        return PlusMorphism(f.src, g.dst, fn, comps)

    def hom(self, x: PlusObject, y: PlusObject) -> Iterator[PlusMorphism]:
        """All morphisms, ordered by index function then by components."""
        options = [
            [(b, f) for b in range(len(y)) for f in self.base.hom(v, y[b])] for v in x
        ]
        for choice in itertools.product(*options):
            yield PlusMorphism(x, y, tuple(b for b, _ in choice), tuple(f for _, f in choice))

    def hom_count(self, x: PlusObject, y: PlusObject) -> int:
        total = 1
        for v in x:
            total *= sum(1 for b in range(len(y)) for _ in self.base.hom(v, y[b]))
        return total

    def terminal(self, x: PlusObject) -> PlusMorphism:
        return PlusMorphism(x, self.unit, (0,) * len(x), tuple(self.base.terminal(v) for v in x))

    # coproducts

    def coproduct_all(self, xs: Sequence[PlusObject]) -> PlusObject:
        return PlusObject(tuple(v for x in xs for v in x))

    def injection(self, xs: Sequence[PlusObject], k: int) -> PlusMorphism:
        offset = sum(len(x) for x in xs[:k])
        x = xs[k]
        return PlusMorphism(
            x,
            self.coproduct_all(xs),
            tuple(offset + a for a in range(len(x))),
            tuple(self.base.identity(v) for v in x),
        )

    def copair_all(self, fs: Sequence[PlusMorphism], dst: PlusObject | None = None) -> PlusMorphism:
        dst = fs[0].dst if dst is None else dst
        for f in fs:
            if f.dst != dst:
                raise ValueError(f"copair needs a common codomain, got {f.dst} and {dst}")
        src = self.coproduct_all([f.src for f in fs])
        return PlusMorphism(
            src, dst, tuple(b for f in fs for b in f.fn), tuple(c for f in fs for c in f.comps)
        )

    def coproduct(self, x: PlusObject, y: PlusObject):
        return self.coproduct_all([x, y]), self.injection([x, y], 0), self.injection([x, y], 1)

    # tensor

    def tensor_obj(self, x: PlusObject, y: PlusObject) -> PlusObject:
        return PlusObject(tuple(self.base.tensor_obj(v, w) for v in x for w in y))

    def tensor_mor(self, f: PlusMorphism, g: PlusMorphism) -> PlusMorphism:
        m = len(g.dst)
        fn = tuple(b1 * m + b2 for b1 in f.fn for b2 in g.fn)
        comps = tuple(self.base.tensor_mor(f1, g1) for f1 in f.comps for g1 in g.comps)
        return PlusMorphism(self.tensor_obj(f.src, g.src), self.tensor_obj(f.dst, g.dst), fn, comps)

    def symmetry(self, x: PlusObject, y: PlusObject) -> PlusMorphism:
        fn = tuple(b * len(x) + a for a in range(len(x)) for b in range(len(y)))
        comps = tuple(self.base.symmetry(v, w) for v in x for w in y)
        return PlusMorphism(self.tensor_obj(x, y), self.tensor_obj(y, x), fn, comps)

    def distributivity_iso(self, x: PlusObject, y: PlusObject, z: PlusObject) -> PlusMorphism:
        """``x (x) (y + z) -> (x (x) y) + (x (x) z)``, a reindexing with identity components."""
        src = self.tensor_obj(x, self.coproduct_all([y, z]))
        dst = self.coproduct_all([self.tensor_obj(x, y), self.tensor_obj(x, z)])
        ny, nz = len(y), len(z)
        fn = []
        for a in range(len(x)):
            for k in range(ny + nz):
                fn.append(a * ny + k if k < ny else len(x) * ny + a * nz + (k - ny))
        return PlusMorphism(src, dst, tuple(fn), tuple(self.base.identity(v) for v in src))

    def objects(self, base_objects: Sequence, max_family: int) -> list[PlusObject]:
        out = []
        for n in range(max_family + 1):
            out.extend(PlusObject(f) for f in itertools.product(base_objects, repeat=n))
        return out


def plus_complete(base) -> PlusCategory:
    return PlusCategory(base)


# Universal-property extensions


class AffineExtension:
    """The strong monoidal functor ``Fwm(K) -> A`` determined by an object map.

    ``A`` must supply ``unit``, ``tensor_obj``, ``tensor_mor``, ``compose``,
    ``identity``, ``terminal`` (the unique map to the unit), ``permute``
    (symmetry iso on a list of objects) and ``right_unitor``.
    """

    def __init__(self, on_objects: Callable[[HObject], object], target):
        self.on_objects = on_objects
        self.target = target

    def obj(self, x: FwmObject):
        t = self.target
        images = [self.on_objects(h) for h in x]
        if not images:
            return t.unit
        out = images[0]
        for im in images[1:]:
            out = t.tensor_obj(out, im)
        return out

    def mor(self, f: FwmMorphism):
        """Permute the kept factors to the front in codomain order, then discard the rest."""
        t = self.target
        n = len(f.src)
        kept = list(f.inj)
        dropped = [k for k in range(n) if k not in set(kept)]
        order = kept + dropped
        perm = [0] * n
        for pos, k in enumerate(order):
            perm[k] = pos
        images = [self.on_objects(h) for h in f.src]
        arranged = t.permute(images, perm) if n else t.identity(t.unit)
        kept_obj = self.obj(f.dst)
        if not dropped:
            return arranged
        drop_obj = self.obj(FwmObject(tuple(f.src[k] for k in dropped)))
        if not kept:
            return t.compose(t.terminal(drop_obj), arranged)
        discard = t.tensor_mor(t.identity(kept_obj), t.terminal(drop_obj))
        return t.compose(t.right_unitor(kept_obj), t.compose(discard, arranged))


def extend_affine(on_objects: Callable[[HObject], object], target) -> AffineExtension:
    if not getattr(target, "affine", False) or not hasattr(target, "terminal"):
        raise NotAffine(f"{target!r} does not provide a terminal unit")
    return AffineExtension(on_objects, target)


class CoproductExtension:
    """The coproduct preserving functor ``C+ -> A`` extending ``F : C -> A``.

    ``F`` exposes ``obj`` and ``mor``; ``A`` supplies ``coproduct_all``,
    ``injection``, ``copair_all`` and ``compose``.
    """

    def __init__(self, functor, target):
        self.functor = functor
        self.target = target

    def obj(self, x: PlusObject):
        return self.target.coproduct_all([self.functor.obj(v) for v in x])

    def mor(self, f: PlusMorphism):
        t = self.target
        dst_images = [self.functor.obj(w) for w in f.dst]
        legs = [
            t.compose(t.injection(dst_images, b), self.functor.mor(fa))
            for b, fa in zip(f.fn, f.comps)
        ]
        return t.copair_all(legs, t.coproduct_all(dst_images))


def extend_coproduct(functor, target) -> CoproductExtension:
    for op in ("coproduct_all", "injection", "copair_all", "compose"):
        if not hasattr(target, op):
            raise TypeError(f"{target!r} lacks {op}; it must have finite coproducts")
    return CoproductExtension(functor, target)
