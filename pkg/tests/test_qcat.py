import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsem import cpm, qcat
from qsem.qcat import UNIT, ZERO, QMorphism, QObject, obj

from oracles import random_density

seeds = st.integers(0, 2**32 - 1)
families = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(lambda ds: obj(*ds))
families0 = st.lists(st.integers(1, 3), min_size=0, max_size=3).map(lambda ds: obj(*ds))


def states_for(x: QObject, rng):
    return [random_density(d, rng) for d in x.dims]


def close_lists(a, b):
    return len(a) == len(b) and all(np.allclose(u, v, atol=1e-9) for u, v in zip(a, b))


def test_objects_and_units():
    assert obj(1, 2).dims == (1, 2)
    assert UNIT.dims == (1,)
    assert len(ZERO) == 0
    assert QObject.from_json(obj(2, 3).to_json()) == obj(2, 3)


def test_morphism_shape_is_validated():
    with pytest.raises(ValueError):
        QMorphism(obj(2), obj(2), ((cpm.identity(3),),))
    with pytest.raises(ValueError):
        QMorphism(obj(2), obj(2, 2), ((cpm.identity(2),),))


@settings(max_examples=40)
@given(seeds, families, families, families)
def test_compose_is_sequential_application(seed, x, y, z):
    rng = np.random.default_rng(seed)
    f, g = qcat.random_morphism(x, y, rng, "cp"), qcat.random_morphism(y, z, rng, "cp")
    rho = states_for(x, rng)
    assert close_lists(qcat.apply(qcat.compose(g, f), rho), qcat.apply(g, qcat.apply(f, rho)))


@settings(max_examples=30)
@given(seeds, families, families)
def test_identity_laws(seed, x, y):
    f = qcat.random_morphism(x, y, np.random.default_rng(seed), "tni")
    assert qcat.equiv(qcat.compose(qcat.identity(y), f), f)
    assert qcat.equiv(qcat.compose(f, qcat.identity(x)), f)


@settings(max_examples=30)
@given(seeds, families, families, st.sampled_from(["tp", "tni", "cp"]))
def test_random_morphism_kinds(seed, x, y, kind):
    f = qcat.random_morphism(x, y, np.random.default_rng(seed), kind)
    assert qcat.is_CPM(f)
    if kind == "tp":
        assert qcat.is_Qprime(f) and qcat.is_Q(f)
    if kind == "tni":
        assert qcat.is_Q(f)


def test_tp_into_empty_family_is_impossible():
    with pytest.raises(ValueError):
        qcat.random_morphism(obj(2), ZERO, np.random.default_rng(0), "tp")
    assert qcat.is_Q(qcat.random_morphism(obj(2), ZERO, np.random.default_rng(0), "tni"))


def test_trace_increase_is_detected_with_witness():
    f = qcat.random_morphism(obj(2), obj(1, 2), np.random.default_rng(3), "tp")
    bad = QMorphism(f.src, f.dst, ((cpm.scale(2.0, f[0, 0]),), (f[1, 0],)))
    assert not qcat.is_Q(bad)
    j, rho, excess = qcat.trace_violation_witness(bad)
    assert excess > 1e-6
    total = sum(np.trace(s).real for s in qcat.apply(bad, [rho]))
    assert total > np.trace(rho).real + 1e-6


def test_coin_like_column_is_Qprime():
    # measurement of a qubit in the computational basis
    e = np.eye(2)
    rows = tuple((cpm.kraus_to_choi(cpm.KrausSet(2, 1, (e[k : k + 1, :],))),) for k in range(2))
    m = QMorphism(obj(2), obj(1, 1), rows)
    assert qcat.is_Qprime(m)
    rho = random_density(2, np.random.default_rng(0))
    outs = qcat.apply(m, [rho])
    assert np.isclose(outs[0][0, 0], rho[0, 0]) and np.isclose(outs[1][0, 0], rho[1, 1])


# coproducts


@settings(max_examples=30)
@given(seeds, families0, families0, families)
def test_copair_after_injection(seed, x, y, z):
    rng = np.random.default_rng(seed)
    f, g = qcat.random_morphism(x, z, rng, "cp"), qcat.random_morphism(y, z, rng, "cp")
    h = qcat.copair(f, g)
    assert qcat.equiv(qcat.compose(h, qcat.injection([x, y], 0)), f)
    assert qcat.equiv(qcat.compose(h, qcat.injection([x, y], 1)), g)


@settings(max_examples=20)
@given(seeds, families, families, families)
def test_copair_uniqueness(seed, x, y, z):
    rng = np.random.default_rng(seed)
    h = qcat.random_morphism(qcat.coproduct_all([x, y]), z, rng, "cp")
    parts = [qcat.compose(h, qcat.injection([x, y], k)) for k in range(2)]
    assert qcat.equiv(qcat.copair_all(parts), h)


def test_empty_family_is_initial():
    f = qcat.copair_all([], obj(2, 3))
    assert f.src == ZERO and f.dst.dims == (2, 3)
    with pytest.raises(ValueError):
        qcat.copair_all([])


def test_copair_needs_common_codomain():
    with pytest.raises(ValueError):
        qcat.copair(qcat.identity(obj(2)), qcat.identity(obj(3)))


# tensor


@settings(max_examples=30)
@given(seeds, families, families, families, families)
def test_tensor_mor_on_product_states(seed, x, y, x2, y2):
    rng = np.random.default_rng(seed)
    f, g = qcat.random_morphism(x, x2, rng, "cp"), qcat.random_morphism(y, y2, rng, "cp")
    fg = qcat.tensor_mor(f, g)
    j1, j2 = rng.integers(len(x)), rng.integers(len(y))
    r1, r2 = random_density(x[j1].dim, rng), random_density(y[j2].dim, rng)
    inputs = [np.zeros((d, d)) for d in fg.src.dims]
    inputs[j1 * len(y) + j2] = np.kron(r1, r2)
    outs = qcat.apply(fg, inputs)
    for i1, i2 in itertools.product(range(len(x2)), range(len(y2))):
        want = np.kron(cpm.apply(f[i1, j1], r1), cpm.apply(g[i2, j2], r2))
        assert np.allclose(outs[i1 * len(y2) + i2], want, atol=1e-9)


@settings(max_examples=20)
@given(seeds, families, families, families, families, families, families)
def test_tensor_is_bifunctorial(seed, a, b, c, a2, b2, c2):
    rng = np.random.default_rng(seed)
    f, f2 = qcat.random_morphism(a, b, rng), qcat.random_morphism(b, c, rng)
    g, g2 = qcat.random_morphism(a2, b2, rng), qcat.random_morphism(b2, c2, rng)
    lhs = qcat.tensor_mor(qcat.compose(f2, f), qcat.compose(g2, g))
    rhs = qcat.compose(qcat.tensor_mor(f2, g2), qcat.tensor_mor(f, g))
    assert qcat.equiv(lhs, rhs)


def test_tensor_objs_edge_cases():
    assert qcat.tensor_objs([]) == UNIT
    assert qcat.tensor_objs([obj(2, 3)]) == obj(2, 3)
    assert qcat.tensor_obj(obj(1, 1), obj(2)).dims == (2, 2)
    assert qcat.tensor_obj(ZERO, obj(2)) == ZERO


@settings(max_examples=20)
@given(seeds, families, families)
def test_symmetry_swaps_product_states(seed, x, y):
    rng = np.random.default_rng(seed)
    s = qcat.symmetry(x, y)
    assert qcat.is_Qprime(s)
    assert qcat.equiv(qcat.compose(qcat.symmetry(y, x), s), qcat.identity(qcat.tensor_obj(x, y)))
    j1, j2 = rng.integers(len(x)), rng.integers(len(y))
    r1, r2 = random_density(x[j1].dim, rng), random_density(y[j2].dim, rng)
    inputs = [np.zeros((d, d)) for d in s.src.dims]
    inputs[j1 * len(y) + j2] = np.kron(r1, r2)
    outs = qcat.apply(s, inputs)
    assert np.allclose(outs[j2 * len(x) + j1], np.kron(r2, r1))


@settings(max_examples=20)
@given(seeds, families, families)
def test_symmetry_naturality(seed, x, y):
    rng = np.random.default_rng(seed)
    x2, y2 = obj(2), obj(1, 3)
    f, g = qcat.random_morphism(x, x2, rng), qcat.random_morphism(y, y2, rng)
    lhs = qcat.compose(qcat.symmetry(x2, y2), qcat.tensor_mor(f, g))
    rhs = qcat.compose(qcat.tensor_mor(g, f), qcat.symmetry(x, y))
    assert qcat.equiv(lhs, rhs)


def test_permute_factors_three_way():
    xs = [obj(2), obj(3), obj(1, 2)]
    p = qcat.permute_factors(xs, [2, 0, 1])
    assert p.dst == qcat.tensor_objs([xs[1], xs[2], xs[0]])
    back = qcat.permute_factors([xs[1], xs[2], xs[0]], [1, 2, 0])
    assert qcat.equiv(qcat.compose(back, p), qcat.identity(p.src))
    with pytest.raises(ValueError):
        qcat.permute_factors(xs, [0, 0, 1])


def test_structural_isos_are_invertible():
    x, y, z = obj(1, 2), obj(3), obj(2, 2)
    for iso in (
        qcat.associator(x, y, z),
        qcat.left_unitor(x),
        qcat.right_unitor(x),
        qcat.symmetry(x, y),
        qcat.distributivity_iso(x, y, z),
    ):
        inv = qcat.inverse(iso)
        assert inv is not None
        assert qcat.equiv(qcat.compose(inv, iso), qcat.identity(iso.src))
        assert qcat.equiv(qcat.compose(iso, inv), qcat.identity(iso.dst))
    d = qcat.distributivity_iso(x, y, z)
    assert qcat.equiv(qcat.compose(qcat.distributivity_inverse(x, y, z), d), qcat.identity(d.src))


def test_inverse_of_non_iso_is_none():
    noisy = QMorphism(obj(2), obj(2), ((cpm.scale(0.5, cpm.identity(2)),),))
    assert qcat.inverse(noisy) is None
    assert qcat.inverse(qcat.injection([obj(2), obj(2)], 0)) is None
    assert qcat.inverse(QMorphism(obj(2), obj(1), ((cpm.discard(2),),))) is None
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    u = QMorphism(obj(2), obj(2), ((cpm.unitary(h),),))
    assert qcat.equiv(qcat.compose(qcat.inverse(u), u), qcat.identity(obj(2)))


def test_distributivity_matches_components():
    # x (x) (y + z): part (i, k) goes to the block of y or of z
    x, y, z = obj(2), obj(1), obj(3)
    d = qcat.distributivity_iso(x, y, z)
    assert d.src.dims == (2, 6) and d.dst.dims == (2, 6)
    assert qcat.is_Qprime(d)


def test_json_roundtrip():
    f = qcat.random_morphism(obj(1, 2), obj(3), np.random.default_rng(1))
    assert qcat.equiv(QMorphism.from_json(f.to_json()), f)
