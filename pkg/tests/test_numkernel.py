import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbench.errors import ContractError
from qbench.numkernel import (
    PAULI,
    PauliString,
    X,
    Y,
    Z,
    axis_operator,
    embed,
    hermitian_eig,
    is_hermitian,
    is_unitary,
    kron_all,
    matexp,
    opnorm,
    pauli_to_matrix,
    pauli_to_sparse,
    random_hermitian,
    random_unitary,
    sparse_embed,
)

pauli_strings = st.text(alphabet="IXYZ", min_size=1, max_size=4)


def test_pauli_algebra():
    assert np.allclose(X @ Y, 1j * Z)
    assert np.allclose(Y @ Z, 1j * X)
    assert np.allclose(Z @ X, 1j * Y)


@settings(max_examples=60, deadline=None)
@given(pauli_strings.flatmap(lambda s: st.tuples(st.just(s), st.text(alphabet="IXYZ", min_size=len(s), max_size=len(s)))))
def test_pauli_product_matches_matrices(pair):
    a, b = PauliString(pair[0]), PauliString(pair[1])
    assert np.allclose(pauli_to_matrix(a @ b), pauli_to_matrix(a) @ pauli_to_matrix(b))
    Ma, Mb = pauli_to_matrix(a), pauli_to_matrix(b)
    assert a.commutes_with(b) == np.allclose(Ma @ Mb, Mb @ Ma)


def test_pauli_string_validation():
    with pytest.raises(ContractError):
        PauliString("XQ")
    with pytest.raises(ContractError):
        PauliString("XX", 2)
    assert PauliString("XIZ").weight == 2
    assert str(-PauliString("XY")) == "-XY"


def test_sparse_matches_dense():
    p = PauliString("XYZ", -1j)
    assert np.allclose(pauli_to_sparse(p).toarray(), pauli_to_matrix(p))
    S = sparse_embed({0: X, 2: Z}, 3).toarray()
    assert np.allclose(S, kron_all([X, PAULI["I"], Z]))
    assert np.allclose(embed(Y, 1, 2), np.kron(np.eye(2), Y))


@pytest.mark.parametrize("dim", [1, 3, 8])
def test_eig_and_exp(dim):
    rng = np.random.default_rng(dim)
    H = random_hermitian(dim, rng)
    w, V = hermitian_eig(H)
    assert np.all(np.diff(w) >= 0)
    assert np.allclose(V @ np.diag(w) @ V.conj().T, H)
    U = matexp(H, -1j * 0.7)
    assert is_unitary(U)
    assert opnorm(H) == pytest.approx(np.max(np.abs(w)))


def test_matexp_non_hermitian_uses_pade():
    N = np.array([[0, 1], [0, 0]], dtype=complex)
    assert np.allclose(matexp(N), np.eye(2) + N)


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(ContractError):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_random_unitary_and_axis():
    U = random_unitary(5, np.random.default_rng(3))
    assert is_unitary(U)
    n = np.array([0.6, 0.0, 0.8])
    A = axis_operator(n)
    assert is_hermitian(A) and np.allclose(A @ A, np.eye(2))
