import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsem.linalg import (
    DEFAULT_TOL,
    Tolerance,
    approx_eq,
    as_matrix,
    is_hermitian,
    is_psd,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    permutation_unitary,
    tensor,
    tensor_all,
)

from oracles import kron_loops, partial_trace_loops, permute_vector_factors

dims_lists = st.lists(st.integers(1, 3), min_size=1, max_size=3)


def cmatrix(rng, r, c):
    return rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        as_matrix([1, 2, 3])
    with pytest.raises(ValueError):
        as_matrix([[np.nan]])
    assert as_matrix([[1]]).dtype == np.complex128


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        Tolerance(0.0, 1e-9)
    assert Tolerance.from_json(DEFAULT_TOL.to_json()) == DEFAULT_TOL


@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.integers(1, 3))
def test_tensor_matches_loops(seed, a, b, c, d):
    rng = np.random.default_rng(seed)
    x, y = cmatrix(rng, a, b), cmatrix(rng, c, d)
    assert np.allclose(tensor(x, y), kron_loops(x, y))


def test_tensor_all_empty_is_scalar_one():
    assert tensor_all([]).shape == (1, 1)
    assert tensor_all([]).item() == 1


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), dims_lists, st.data())
def test_partial_trace_matches_loops(seed, dims, data):
    keep = data.draw(st.sets(st.integers(0, len(dims) - 1)))
    rng = np.random.default_rng(seed)
    n = int(np.prod(dims))
    m = cmatrix(rng, n, n)
    assert np.allclose(partial_trace(m, dims, keep), partial_trace_loops(m, dims, keep))


def test_partial_trace_of_product():
    rng = np.random.default_rng(1)
    a, b = cmatrix(rng, 2, 2), cmatrix(rng, 3, 3)
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], [0]), a * np.trace(b))
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], [1]), b * np.trace(a))
    assert np.allclose(partial_trace(np.kron(a, b), [2, 3], []), [[np.trace(a) * np.trace(b)]])


def test_partial_trace_validates():
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), [2, 3], [0])
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), [2, 2], [2])


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1), dims_lists, st.data())
def test_permutation_unitary_moves_factors(seed, dims, data):
    perm = data.draw(st.permutations(range(len(dims))))
    rng = np.random.default_rng(seed)
    vecs = [cmatrix(rng, d, 1) for d in dims]
    u = permutation_unitary(dims, perm)
    assert np.allclose(u @ u.conj().T, np.eye(u.shape[0]))
    assert np.allclose(u @ tensor_all(vecs), permute_vector_factors(vecs, perm))


def test_permutation_unitary_composes_covariantly():
    dims = [2, 3, 1]
    p, q = [1, 2, 0], [2, 0, 1]
    moved = [dims[i] for i in np.argsort(p)]
    both = [q[p[i]] for i in range(3)]
    assert np.allclose(permutation_unitary(moved, q) @ permutation_unitary(dims, p), permutation_unitary(dims, both))


def test_permutation_unitary_edge_cases():
    assert permutation_unitary([], []).shape == (1, 1)
    with pytest.raises(ValueError):
        permutation_unitary([2, 2], [0, 0])


def test_hermitian_and_psd():
    assert is_hermitian(np.array([[1, 1j], [-1j, 2]]))
    assert not is_hermitian(np.array([[1, 1j], [1j, 2]]))
    assert is_psd(np.eye(3))
    assert not is_psd(np.diag([1.0, -1e-3]))
    # tiny negative eigenvalues from rounding are tolerated
    assert is_psd(np.diag([1.0, -1e-12]))
    with pytest.raises(ValueError):
        is_psd(np.ones((2, 3)))


def test_approx_eq_is_relative():
    assert approx_eq(np.array([[1e6]]), np.array([[1e6 + 1e-4]]))
    assert not approx_eq(np.array([[1.0]]), np.array([[1.0 + 1e-6]]))
    with pytest.raises(ValueError):
        approx_eq(np.eye(2), np.eye(3))


@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 4))
def test_matrix_json_roundtrip(seed, r, c):
    m = cmatrix(np.random.default_rng(seed), r, c)
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)


def test_matrix_json_rejects_wrong_length():
    with pytest.raises(ValueError):
        matrix_from_json({"rows": 2, "cols": 2, "entries": [[1, 0]]})
