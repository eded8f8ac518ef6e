import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from ncqsi.algebra.chain import (
    ChainShape,
    Element,
    embed_factor,
    embed_head,
    kron_all,
    matrix_from_json,
    matrix_to_json,
    min_eigenvalue,
    operator_norm,
    psd_check,
)
from ncqsi.algebra.constants import PAULI
from ncqsi.algebra.exceptions import (
    FactorIndexError,
    InvalidShapeError,
    NotHermitianError,
    ShapeMismatchError,
)
from ncqsi.verify.random_instances import make_rng, random_element, random_hermitian, random_matrix


@pytest.mark.parametrize("dims", [(), (1,), (2, 1), (0, 3)])
def test_shape_rejects_degenerate_factors(dims):
    with pytest.raises(InvalidShapeError):
        ChainShape(dims)


def test_head_and_tail_dims():
    shape = ChainShape((2, 3, 2))
    assert shape.acting_dim == 12
    assert shape.head_dim(0) == 1
    assert shape.head_dim(2) == 6
    assert shape.tail_dim(1) == 6
    assert shape.tail_dim(3) == 1


def test_element_rejects_wrong_size(shape):
    with pytest.raises(ShapeMismatchError):
        Element(shape, np.eye(3))


def test_element_entries_are_read_only(shape):
    x = Element.identity(shape)
    with pytest.raises(ValueError):
        x.entries[0, 0] = 2


def test_arithmetic_across_shapes_raises(shape):
    other = ChainShape((2, 3))
    with pytest.raises(ShapeMismatchError):
        Element.identity(shape) + Element.identity(other)
    with pytest.raises(ShapeMismatchError):
        Element.identity(shape) @ Element.identity(other)


def test_embed_factor_places_operator_in_slot(shape):
    x = embed_factor(PAULI["X"], 2, shape)
    assert_allclose(x.entries, np.kron(np.eye(2), PAULI["X"]))
    with pytest.raises(FactorIndexError):
        embed_factor(PAULI["X"], 3, shape)
    with pytest.raises(ShapeMismatchError):
        embed_factor(np.eye(3), 1, shape)


def test_embed_head_matches_kron():
    shape = ChainShape((2, 3, 2))
    a = np.arange(36).reshape(6, 6)
    assert_allclose(embed_head(a, 2, shape).entries, np.kron(a, np.eye(2)))
    assert_allclose(embed_head(np.array([[2.0]]), 0, shape).entries, 2 * np.eye(12))


def test_adjoint_and_hermitian_defect(shape):
    x = Element(shape, kron_all([PAULI["Y"], PAULI["I"]]) + 1j * np.eye(4))
    assert x.hermitian_defect() == pytest.approx(2.0)
    assert not x.is_hermitian()
    assert_allclose(x.adjoint().entries, x.entries.conj().T)
    assert (x + x.dag).is_hermitian()


def test_scale_is_at_least_one(shape):
    assert Element.zeros(shape).scale() == 1.0
    assert (3 * Element.identity(shape)).scale() == 3.0


def test_operator_norm_of_paulis(shape):
    terminal = Element(shape, kron_all([PAULI["X"], PAULI["I"]]) + kron_all([PAULI["Z"], PAULI["X"]]))
    # (X (x) 1 + Z (x) X)^2 = 2
    assert operator_norm(terminal) == pytest.approx(np.sqrt(2))
    assert operator_norm(np.array([[0, 2], [0, 0]])) == pytest.approx(2.0)


def test_psd_check(shape):
    assert psd_check(Element.identity(shape))
    assert not psd_check(-Element.identity(shape))
    assert psd_check(np.diag([1.0, -1e-13]))
    with pytest.raises(NotHermitianError):
        psd_check(np.array([[0, 1], [0, 0]]))
    assert min_eigenvalue(PAULI["Z"]) == pytest.approx(-1.0)


def test_matrix_json_pairs():
    m = np.array([[1 + 2j, 0], [-0.5j, 3]])
    assert matrix_to_json(m) == [[[1.0, 2.0], [0.0, 0.0]], [[-0.0, -0.5], [3.0, 0.0]]]
    assert_allclose(matrix_from_json(matrix_to_json(m)), m)
    with pytest.raises(ValueError):
        matrix_from_json([[1.0, 2.0]])


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_operator_norm_is_submultiplicative(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert operator_norm(a @ b) <= operator_norm(a) * operator_norm(b) * (1 + 1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_operator_norm_of_hermitian_matches_eigenvalues(n):
    rng = make_rng(n)
    for _ in range(20):
        h = random_hermitian(rng, n)
        expected = float(np.max(np.abs(np.linalg.eigvalsh(h))))
        assert operator_norm(h) == pytest.approx(expected, rel=1e-12)


def test_operator_norm_is_unitarily_invariant(shape):
    rng = make_rng(21)
    words = ["II", "XZ", "YI", "ZY", "XX"]
    unitaries = [kron_all([PAULI[a], PAULI[b]]) for a, b in words]
    for _ in range(10):
        x = random_element(rng, shape)
        norm = operator_norm(x)
        for u in unitaries:
            for v in unitaries:
                assert operator_norm(u @ x.entries @ v) == pytest.approx(norm, rel=1e-9)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_embedding_commutes_with_adjoint(k):
    shape = ChainShape((2, 3, 2))
    rng = make_rng(k)
    a = random_matrix(rng, shape.factor_dims[k - 1])
    embedded = embed_factor(a, k, shape)
    assert embedded.adjoint().allclose(embed_factor(a.conj().T, k, shape))


def test_gram_matrices_pass_psd_check():
    rng = make_rng(8)
    for n in (1, 2, 4, 8):
        for _ in range(10):
            g = random_matrix(rng, n)
            assert psd_check(g.conj().T @ g)
