# tests/test_operator.py
"""Dense operator algebra: tensor products, partial operations, spectra and norms."""
import numpy as np
import pytest
from numpy.testing import assert_allclose

from bound_key.core.operator import (
    MultipartiteOperator,
    apply_operator,
    hermitian_eig,
    is_psd,
    is_unitary,
    matrix_abs,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    tensor,
    tensor_all,
    tensor_power,
    trace_distance,
    trace_norm,
)
from bound_key.errors import (
    BoundKeyError,
    DimensionMismatchError,
    NotHermitianError,
    SubsystemIndexError,
)


def _random_matrix(rng, n):
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def _random_hermitian(rng, dims):
    n = int(np.prod(dims))
    g = _random_matrix(rng, n)
    return MultipartiteOperator(dims, g + g.conj().T)


def test_tensor_is_kron():
    rng = np.random.default_rng(1)
    a = MultipartiteOperator((2,), _random_matrix(rng, 2))
    b = MultipartiteOperator((3,), _random_matrix(rng, 3))
    ab = tensor(a, b)
    assert ab.dims == (2, 3)
    assert_allclose(ab.data, np.kron(a.data, b.data))
    assert tensor_power(a, 3).dims == (2, 2, 2)
    assert_allclose(tensor_all([a, b, a]).data, np.kron(np.kron(a.data, b.data), a.data))


def test_tensor_is_associative():
    rng = np.random.default_rng(11)
    a = MultipartiteOperator((2,), _random_matrix(rng, 2))
    b = MultipartiteOperator((3,), _random_matrix(rng, 3))
    c = MultipartiteOperator((2,), _random_matrix(rng, 2))
    left = tensor(tensor(a, b), c)
    right = tensor(a, tensor(b, c))
    assert left.dims == right.dims == (2, 3, 2)
    assert_allclose(left.data, right.data, atol=1e-12)


def test_shape_must_match_dims():
    with pytest.raises(DimensionMismatchError):
        MultipartiteOperator((2, 2), np.eye(3))
    with pytest.raises(DimensionMismatchError):
        tensor_power(MultipartiteOperator.identity((2,)), 0)


def test_data_is_read_only():
    op = MultipartiteOperator.identity((2, 2))
    with pytest.raises(ValueError):
        op.data[0, 0] = 5.0


def test_domain_errors_are_value_errors():
    assert issubclass(DimensionMismatchError, BoundKeyError)
    assert issubclass(BoundKeyError, ValueError)


def test_partial_transpose_is_involution():
    rng = np.random.default_rng(2)
    m = MultipartiteOperator((2, 3, 2), _random_matrix(rng, 12))
    twice = partial_transpose(partial_transpose(m, [1, 2]), [1, 2])
    assert np.array_equal(twice.data, m.data), "partial transpose applied twice must be exact"


def test_partial_transpose_of_product():
    rng = np.random.default_rng(3)
    a = MultipartiteOperator((2,), _random_matrix(rng, 2))
    b = MultipartiteOperator((3,), _random_matrix(rng, 3))
    pt = partial_transpose(tensor(a, b), [1])
    assert_allclose(pt.data, np.kron(a.data, b.data.T))
    full = partial_transpose(tensor(a, b), [0, 1])
    assert_allclose(full.data, np.kron(a.data, b.data).T)


def test_partial_trace_of_product():
    rng = np.random.default_rng(4)
    a = MultipartiteOperator((2,), _random_matrix(rng, 2))
    b = MultipartiteOperator((3,), _random_matrix(rng, 3))
    c = MultipartiteOperator((2,), _random_matrix(rng, 2))
    abc = tensor_all([a, b, c])
    kept = partial_trace(abc, [1])
    assert kept.dims == (2, 2)
    assert_allclose(kept.data, np.trace(b.data) * np.kron(a.data, c.data), atol=1e-12)
    only_b = partial_trace(abc, [0, 2])
    assert_allclose(only_b.data, np.trace(a.data) * np.trace(c.data) * b.data, atol=1e-12)


def test_partial_trace_preserves_trace_of_entangled_operator():
    rng = np.random.default_rng(12)
    m = MultipartiteOperator((2, 3, 2), _random_matrix(rng, 12))
    # not a product: the reduced operators do not reassemble m
    reduced = tensor(partial_trace(m, [1, 2]), partial_trace(m, [0])) * (1 / m.trace())
    assert reduced.max_abs_diff(m) > 1e-3
    for subsystems in ([0], [1], [2], [0, 1], [1, 2], [0, 2]):
        assert partial_trace(m, subsystems).trace() == pytest.approx(m.trace(), abs=1e-10)


def test_partial_trace_rejects_everything():
    with pytest.raises(SubsystemIndexError):
        partial_trace(MultipartiteOperator.identity((2, 2)), [0, 1])


@pytest.mark.parametrize("subsystems", [[2], [0, 0], [-1]])
def test_bad_subsystem_indices(subsystems):
    with pytest.raises(SubsystemIndexError):
        partial_transpose(MultipartiteOperator.identity((2, 2)), subsystems)


def test_permute_swaps_factors():
    rng = np.random.default_rng(5)
    a = MultipartiteOperator((2,), _random_matrix(rng, 2))
    b = MultipartiteOperator((3,), _random_matrix(rng, 3))
    swapped = permute_subsystems(tensor(a, b), [1, 0])
    assert swapped.dims == (3, 2)
    assert_allclose(swapped.data, np.kron(b.data, a.data))
    with pytest.raises(SubsystemIndexError):
        permute_subsystems(tensor(a, b), [0])


def test_apply_operator_matches_embedding():
    rng = np.random.default_rng(6)
    m = MultipartiteOperator((2, 3, 2), _random_matrix(rng, 12))
    k = _random_matrix(rng, 3)
    full = np.kron(np.kron(np.eye(2), k), np.eye(2))
    out = apply_operator(m, k, [1])
    assert_allclose(out.data, full @ m.data @ full.conj().T, atol=1e-12)


def test_apply_operator_respects_listed_order():
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    # control on subsystem 1, target on subsystem 0
    ket = np.kron([1, 0], [0, 1]).astype(complex)  # |0>|1>
    flipped = apply_operator(MultipartiteOperator.projector(ket, (2, 2)), cnot, [1, 0])
    expected = MultipartiteOperator.projector(np.kron([0, 1], [0, 1]), (2, 2))
    assert flipped.allclose(expected), "target qubit 0 should flip when qubit 1 is set"


def test_hermitian_eig_descending_and_reconstructs():
    rng = np.random.default_rng(7)
    h = _random_hermitian(rng, (2, 3))
    spec = hermitian_eig(h)
    assert np.all(np.diff(spec.eigenvalues) <= 0)
    assert_allclose(spec.reconstruct(), h.data, atol=1e-12)
    with pytest.raises(NotHermitianError):
        hermitian_eig(MultipartiteOperator((2,), np.array([[0, 1], [0, 0]])))


def test_trace_norm_and_abs():
    rng = np.random.default_rng(8)
    h = _random_hermitian(rng, (4,))
    vals = np.linalg.eigvalsh(h.data)
    assert trace_norm(h) == pytest.approx(np.sum(np.abs(vals)), abs=1e-10)
    assert matrix_abs(h).trace().real == pytest.approx(trace_norm(h), abs=1e-10)
    assert is_psd(matrix_abs(h))

    g = MultipartiteOperator((3,), _random_matrix(rng, 3))
    assert trace_norm(g) == pytest.approx(np.sum(np.linalg.svd(g.data, compute_uv=False)), abs=1e-10)


def test_abs_squares_to_square():
    rng = np.random.default_rng(13)
    h = _random_hermitian(rng, (2, 3))
    a = matrix_abs(h)
    assert_allclose(a.data @ a.data, h.data @ h.data, atol=1e-10)


def test_trace_norm_bounds_trace():
    rng = np.random.default_rng(14)
    g = _random_matrix(rng, 6)
    psd = MultipartiteOperator((2, 3), g @ g.conj().T)
    assert trace_norm(psd) == pytest.approx(abs(psd.trace()), abs=1e-10)

    indefinite = _random_hermitian(rng, (2, 3))
    vals = np.linalg.eigvalsh(indefinite.data)
    assert vals[0] < 0 < vals[-1]
    assert trace_norm(indefinite) > abs(indefinite.trace()) + 1e-6

    for _ in range(10):
        m = _random_hermitian(rng, (2, 3))
        assert trace_norm(m) >= abs(m.trace()) - 1e-12


def test_trace_distance_orthogonal_pure_states():
    zero = MultipartiteOperator.projector(np.array([1, 0]), (2,))
    one = MultipartiteOperator.projector(np.array([0, 1]), (2,))
    assert trace_distance(zero, one) == pytest.approx(1.0)
    assert trace_distance(zero, zero) == pytest.approx(0.0)
    with pytest.raises(DimensionMismatchError):
        trace_distance(zero, MultipartiteOperator.identity((3,)))


def test_is_unitary():
    assert is_unitary(np.array([[0, 1], [1, 0]]))
    assert not is_unitary(np.array([[1, 1], [0, 1]]))
    assert not is_unitary(np.ones((2, 3)))
