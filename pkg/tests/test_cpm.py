import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsem import cpm
from qsem.cpm import HObject, KrausSet, LinMap, NotCompletelyPositive
from qsem.suites import transpose_map

from oracles import apply_kraus, choi_of, random_density

seeds = st.integers(0, 2**32 - 1)
dim = st.integers(1, 4)


def kraus_case(seed, din, dout, n):
    rng = np.random.default_rng(seed)
    return cpm.random_kraus(din, dout, n, rng), rng


@given(seeds, dim, dim, st.integers(1, 4))
def test_choi_matches_definition(seed, din, dout, n):
    ks, _ = kraus_case(seed, din, dout, n)
    expected = choi_of(lambda r: apply_kraus(ks.ops, r), din, dout)
    assert np.allclose(cpm.kraus_to_choi(ks).choi, expected)


@given(seeds, dim, dim, st.integers(1, 4))
def test_apply_agrees_with_kraus(seed, din, dout, n):
    ks, rng = kraus_case(seed, din, dout, n)
    rho = random_density(din, rng)
    assert np.allclose(cpm.apply(cpm.kraus_to_choi(ks), rho), apply_kraus(ks.ops, rho))


@given(seeds, dim, dim, st.integers(1, 4))
def test_choi_kraus_roundtrip(seed, din, dout, n):
    ks, rng = kraus_case(seed, din, dout, n)
    f = cpm.kraus_to_choi(ks)
    back = cpm.choi_to_kraus(f)
    assert len(back.ops) <= din * dout
    assert cpm.equiv(cpm.kraus_to_choi(back), f)
    rho = random_density(din, rng)
    assert np.allclose(cpm.apply(cpm.kraus_to_choi(back), rho), apply_kraus(ks.ops, rho), atol=1e-9)


def test_choi_to_kraus_rejects_transpose():
    with pytest.raises(NotCompletelyPositive):
        cpm.choi_to_kraus(transpose_map(2))


def test_transpose_map_is_transpose_and_not_cp():
    for d in (2, 3):
        t = transpose_map(d)
        rho = random_density(d, np.random.default_rng(d))
        assert np.allclose(cpm.apply(t, rho), rho.T)
        assert not cpm.is_completely_positive(t)
    # on a single dimension transposition is the identity, hence CP
    assert cpm.is_completely_positive(transpose_map(1))


def test_zero_map_choi_roundtrip():
    z = cpm.zero(2, 3)
    assert cpm.equiv(cpm.kraus_to_choi(cpm.choi_to_kraus(z)), z)


@settings(max_examples=40)
@given(seeds, dim, dim, dim)
def test_compose_is_sequential_application(seed, a, b, c):
    rng = np.random.default_rng(seed)
    f, g = cpm.random_cp_map(a, b, rng), cpm.random_cp_map(b, c, rng)
    rho = random_density(a, rng)
    assert np.allclose(cpm.apply(cpm.compose(g, f), rho), cpm.apply(g, cpm.apply(f, rho)))


def test_compose_checks_dimensions():
    with pytest.raises(ValueError):
        cpm.compose(cpm.identity(2), cpm.identity(3))


@settings(max_examples=40)
@given(seeds, dim, dim, st.integers(1, 3), st.integers(1, 3))
def test_tensor_map_on_product_states(seed, a, b, c, d):
    rng = np.random.default_rng(seed)
    f, g = cpm.random_cp_map(a, b, rng), cpm.random_cp_map(c, d, rng)
    r1, r2 = random_density(a, rng), random_density(c, rng)
    got = cpm.apply(cpm.tensor_map(f, g), np.kron(r1, r2))
    assert np.allclose(got, np.kron(cpm.apply(f, r1), cpm.apply(g, r2)))


@given(seeds, dim, dim)
def test_tensor_map_on_entangled_input(seed, a, b):
    # linearity: checking on a basis of L(V (x) W) rather than product states
    rng = np.random.default_rng(seed)
    f, g = cpm.random_cp_map(a, a, rng), cpm.random_cp_map(b, b, rng)
    kf, kg = cpm.choi_to_kraus(f).ops, cpm.choi_to_kraus(g).ops
    ops = [np.kron(x, y) for x in kf for y in kg]
    rho = random_density(a * b, rng)
    assert np.allclose(cpm.apply(cpm.tensor_map(f, g), rho), apply_kraus(ops, rho))


@given(seeds, dim, dim)
def test_liouville_roundtrip(seed, a, b):
    f = cpm.random_cp_map(a, b, np.random.default_rng(seed))
    assert cpm.equiv(cpm.from_liouville(cpm.to_liouville(f), a, b), f)


def test_structural_maps():
    rho = random_density(3, np.random.default_rng(0))
    assert np.allclose(cpm.apply(cpm.identity(3), rho), rho)
    assert np.allclose(cpm.apply(cpm.discard(3), rho), [[np.trace(rho)]])
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    sigma = random_density(2, np.random.default_rng(1))
    assert np.allclose(cpm.apply(cpm.unitary(h), sigma), h @ sigma @ h.conj().T)
    assert cpm.is_Qs_prime(cpm.discard(3))


@settings(max_examples=30)
@given(seeds, dim, dim)
def test_channel_classes(seed, a, b):
    rng = np.random.default_rng(seed)
    tp, tni = cpm.random_tp_map(a, b, rng), cpm.random_tni_map(a, b, rng)
    assert cpm.is_Qs_prime(tp) and cpm.is_Qs(tp)
    assert cpm.is_Qs(tni)
    assert not cpm.is_Qs(cpm.scale(1.5, tp))
    assert np.allclose(cpm.trace_functional(tp), np.eye(a))


def test_trace_functional_predicts_output_trace():
    rng = np.random.default_rng(5)
    f = cpm.random_cp_map(3, 2, rng)
    rho = random_density(3, rng)
    m = cpm.trace_functional(f)
    assert np.isclose(np.trace(cpm.apply(f, rho)), np.trace(rho @ m.T))


def test_add_and_scale():
    f = cpm.identity(2)
    assert cpm.equiv(cpm.add(f, f), cpm.scale(2, f))
    with pytest.raises(ValueError):
        cpm.add(f, cpm.identity(3))


def test_validation_and_json():
    with pytest.raises(ValueError):
        HObject("bad", 0)
    with pytest.raises(ValueError):
        LinMap(2, 2, np.eye(3))
    with pytest.raises(ValueError):
        KrausSet(2, 2, ())
    with pytest.raises(ValueError):
        KrausSet(2, 3, (np.eye(2),))
    f = cpm.random_cp_map(2, 3, np.random.default_rng(0))
    assert cpm.equiv(LinMap.from_json(f.to_json()), f)
    ks = cpm.random_kraus(2, 2, 2, np.random.default_rng(0))
    assert all(np.array_equal(a, b) for a, b in zip(KrausSet.from_json(ks.to_json()).ops, ks.ops))
    h = HObject("C2", 2)
    assert HObject.from_json(h.to_json()) == h


def test_choi_is_read_only():
    f = cpm.identity(2)
    with pytest.raises(ValueError):
        f.choi[0, 0] = 5


def test_phi_iso_index_is_permutation():
    fwd, inv = cpm.phi_iso_index(2, 3)
    assert sorted(fwd) == list(range(36))
    assert np.array_equal(fwd[inv], np.arange(36))
