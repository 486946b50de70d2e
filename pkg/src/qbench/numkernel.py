"""Dense complex linear algebra shared by every module.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
Qubit 0 is the most significant factor of every Kronecker product.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .errors import ContractError, NumericError

HERMITIAN_TOL = 1e-10

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}

# single-qubit products: (a, b) -> (phase, c) with a @ b = phase * c
_PRODUCT = {
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}


def _as_square(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {M.shape}")
    return M


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    M = np.asarray(M)
    return M.ndim == 2 and M.shape[0] == M.shape[1] and np.max(np.abs(M - M.conj().T), initial=0.0) <= tol


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0])), initial=0.0) <= tol


def hermitian_eig(M, tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of a Hermitian matrix."""
    M = _as_square(M)
    if not is_hermitian(M, tol):
        dev = np.max(np.abs(M - M.conj().T))
        raise ContractError(f"matrix is not Hermitian (max |M - M^dag| = {dev:.3g})")
    try:
        w, V = np.linalg.eigh(0.5 * (M + M.conj().T))
    except np.linalg.LinAlgError as exc:
        # LAPACK reports the failing index rather than an iteration count
        raise NumericError(f"eigendecomposition did not converge: {exc}") from exc
    return w, V


def matexp(M, scale: complex = 1.0) -> np.ndarray:
    """Return ``exp(scale * M)``.

    Hermitian ``M`` goes through the spectral decomposition, which keeps
    ``exp(-i t H)`` unitary to rounding. Other square inputs use Pade.
    """
    M = _as_square(M)
    if is_hermitian(M):
        w, V = hermitian_eig(M)
        return (V * np.exp(scale * w)) @ V.conj().T
    return scipy.linalg.expm(scale * M)


def opnorm(M) -> float:
    """Operator norm. Max |eigenvalue| for Hermitian input, largest singular value otherwise."""
    M = _as_square(M)
    if M.shape[0] == 0:
        return 0.0
    if is_hermitian(M, 1e-12):
        return float(np.max(np.abs(np.linalg.eigvalsh(0.5 * (M + M.conj().T)))))
    return float(np.linalg.norm(M, 2))


def kron_all(mats) -> np.ndarray:
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


def embed(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Dense ``I ⊗ ... ⊗ op ⊗ ... ⊗ I`` with ``op`` on ``qubit`` of ``n``."""
    return kron_all([op if q == qubit else I2 for q in range(n)])


def axis_operator(axis) -> np.ndarray:
    """Single-qubit ``n·sigma`` for a real 3-vector ``n``."""
    nx, ny, nz = axis
    return nx * X + ny * Y + nz * Z


@dataclass(frozen=True)
class PauliString:
    """A phase times a tensor product of single-qubit Paulis, e.g. ``PauliString("XYZ", -1)``."""

    factors: str
    phase: complex = 1

    def __post_init__(self):
        if any(f not in PAULI for f in self.factors):
            raise ContractError(f"invalid Pauli labels {self.factors!r}")
        if self.phase not in (1, -1, 1j, -1j):
            raise ContractError(f"Pauli phase must be one of ±1, ±i, got {self.phase}")

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def weight(self) -> int:
        return sum(f != "I" for f in self.factors)

    def __neg__(self) -> PauliString:
        return PauliString(self.factors, -self.phase)

    def __matmul__(self, other: PauliString) -> PauliString:
        if self.n != other.n:
            raise ContractError("Pauli strings act on different qubit counts")
        phase = self.phase * other.phase
        out = []
        for a, b in zip(self.factors, other.factors):
            if a == "I":
                out.append(b)
            elif b == "I":
                out.append(a)
            elif a == b:
                out.append("I")
            else:
                p, c = _PRODUCT[a, b]
                phase *= p
                out.append(c)
        return PauliString("".join(out), complex(phase))

    def commutes_with(self, other: PauliString) -> bool:
        clashes = sum(
            a != "I" and b != "I" and a != b for a, b in zip(self.factors, other.factors)
        )
        return clashes % 2 == 0

    def __str__(self) -> str:
        sign = {1: "+", -1: "-", 1j: "+i", -1j: "-i"}[self.phase]
        return f"{sign}{self.factors}"


def pauli_to_matrix(p: PauliString) -> np.ndarray:
    return p.phase * kron_all([PAULI[f] for f in p.factors])


def pauli_to_sparse(p: PauliString) -> sp.csr_matrix:
    out = sp.identity(1, dtype=complex, format="csr")
    for f in p.factors:
        out = sp.kron(out, sp.csr_matrix(PAULI[f]), format="csr")
    return (p.phase * out).tocsr()


def sparse_embed(ops: dict[int, np.ndarray], n: int) -> sp.csr_matrix:
    """Sparse tensor product with ``ops[q]`` on qubit ``q`` and identity elsewhere."""
    out = sp.identity(1, dtype=complex, format="csr")
    for q in range(n):
        out = sp.kron(out, sp.csr_matrix(ops.get(q, I2)), format="csr")
    return out


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    G = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * 0.5 * (G + G.conj().T)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    G = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(G)
    return Q * (np.diag(R) / np.abs(np.diag(R)))
