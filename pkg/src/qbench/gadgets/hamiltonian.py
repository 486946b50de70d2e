"""k-local target Hamiltonians and their perturbative-gadget realisations.

Qubit layout of a gadget: computational qubits ``0..n-1``, then one
register of ``k`` ancillas per term, registers in term order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from ..errors import ContractError, ParseError, ResourceError
from ..numkernel import I2, X, axis_operator, kron_all, sparse_embed

MAX_QUBITS = 14
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class Factor:
    qubit: int
    axis: tuple[float, float, float]


@dataclass(frozen=True)
class Term:
    c: float
    factors: tuple[Factor, ...]

    def normalized(self) -> Term:
        """Move a negative sign into the first axis so that c > 0."""
        if self.c > 0:
            return self
        first, *rest = self.factors
        flipped = Factor(first.qubit, tuple(-x for x in first.axis))
        return Term(-self.c, (flipped, *rest))


@dataclass(frozen=True)
class KLocalHamiltonian:
    n: int
    k: int
    terms: tuple[Term, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if self.n < 1:
            raise ContractError(f"need at least one computational qubit, got n={self.n}")
        if self.k < 2:
            raise ContractError(f"gadgets need locality k >= 2, got k={self.k}")
        if not self.terms:
            raise ContractError("Hamiltonian has no terms")
        for s, term in enumerate(self.terms):
            if len(term.factors) != self.k:
                raise ContractError(
                    f"term {s} has {len(term.factors)} factors but k={self.k}; every term must "
                    "act on exactly k qubits (pad lower-weight terms at the input level)"
                )
            validate_term(term, self.n, f"term {s}")

    @property
    def r(self) -> int:
        return len(self.terms)

    def matrix(self) -> np.ndarray:
        """Dense H^comp on the n computational qubits."""
        H = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for term in self.terms:
            ops = {f.qubit: axis_operator(f.axis) for f in term.factors}
            H += term.c * kron_all([ops.get(q, I2) for q in range(self.n)])
        return H


_AXES = {"X": (1.0, 0.0, 0.0), "Y": (0.0, 1.0, 0.0), "Z": (0.0, 0.0, 1.0)}


def from_pauli_terms(n: int, terms: list[tuple[str, float]]) -> KLocalHamiltonian:
    """Build from strings like ``("XYZ", 1.0)``; identity letters are skipped."""
    parsed = []
    for label, c in terms:
        if len(label) != n:
            raise ContractError(f"Pauli label {label!r} does not have length {n}")
        factors = tuple(Factor(q, _AXES[ch]) for q, ch in enumerate(label) if ch != "I")
        parsed.append(Term(float(c), factors))
    ks = {len(t.factors) for t in parsed}
    if len(ks) != 1:
        raise ContractError(f"mixed localities {sorted(ks)}; all terms must share one k")
    return KLocalHamiltonian(n, ks.pop(), tuple(parsed))


def parse_terms(data: dict) -> tuple[int, tuple[Term, ...]]:
    """Read ``{"n": .., "terms": [{"c": .., "factors": [{"qubit": .., "axis": [..]}]}]}``."""
    try:
        n = int(data["n"])
        terms = tuple(
            Term(
                float(t["c"]),
                tuple(Factor(int(f["qubit"]), tuple(float(x) for x in f["axis"])) for f in t["factors"]),
            )
            for t in data["terms"]
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed Hamiltonian spec: {exc}") from exc
    return n, terms


def validate_term(term: Term, n: int, label: str = "term") -> None:
    if not math.isfinite(term.c) or term.c == 0:
        raise ContractError(f"{label} has invalid coefficient {term.c}")
    qubits = [f.qubit for f in term.factors]
    if len(set(qubits)) != len(qubits):
        raise ContractError(f"{label} repeats a qubit: {qubits}")
    for f in term.factors:
        if not 0 <= f.qubit < n:
            raise ContractError(f"{label} uses qubit {f.qubit} outside 0..{n - 1}")
        if len(f.axis) != 3 or abs(math.fsum(x * x for x in f.axis) - 1) > UNIT_TOL:
            raise ContractError(f"{label} has a non-unit axis {f.axis}")


def hamiltonian_from_dict(data: dict) -> KLocalHamiltonian:
    n, terms = parse_terms(data)
    try:
        k = int(data["k"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed Hamiltonian spec: missing or invalid k ({exc})") from exc
    return KLocalHamiltonian(n, k, terms)


def read_json(path: str | Path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg})", exc.pos) from exc


def load_hamiltonian(path: str | Path) -> KLocalHamiltonian:
    return hamiltonian_from_dict(read_json(path))


@dataclass
class GadgetHamiltonian:
    target: KLocalHamiltonian
    lam: float
    H_anc: sp.csr_matrix
    V: sp.csr_matrix

    @property
    def n(self) -> int:
        return self.target.n

    @property
    def k(self) -> int:
        return self.target.k

    @property
    def r(self) -> int:
        return self.target.r

    @property
    def num_qubits(self) -> int:
        return self.n + self.r * self.k

    @property
    def gap(self) -> float:
        return float(self.k - 1)

    @property
    def matrix(self) -> sp.csr_matrix:
        return (self.H_anc + self.lam * self.V).tocsr()

    def register(self, s: int) -> list[int]:
        return list(range(self.n + s * self.k, self.n + (s + 1) * self.k))

    def register_parity(self, s: int) -> sp.csr_matrix:
        """X^{⊗k} on register ``s``."""
        return sparse_embed({q: X for q in self.register(s)}, self.num_qubits)

    def commutator_norm(self) -> float:
        H = self.matrix
        worst = 0.0
        for s in range(self.r):
            P = self.register_parity(s)
            C = P @ H - H @ P
            worst = max(worst, float(abs(C).max()) if C.nnz else 0.0)
        return worst


def _diag_zz(qubits: list[int], N: int) -> np.ndarray:
    """Diagonal of Σ_{i<j} ½(I − Z_i Z_j) over ``qubits``."""
    idx = np.arange(1 << N)
    bits = [(idx >> (N - 1 - q)) & 1 for q in qubits]
    out = np.zeros(1 << N)
    for i in range(len(bits)):
        for j in range(i + 1, len(bits)):
            out += bits[i] ^ bits[j]
    return out


def build_gadget(H: KLocalHamiltonian, lam: float, check: bool = True) -> GadgetHamiltonian:
    N = H.n + H.r * H.k
    if N > MAX_QUBITS:
        raise ResourceError(f"gadget needs {N} qubits, over the budget of {MAX_QUBITS}")
    diag = np.zeros(1 << N)
    V = sp.csr_matrix((1 << N, 1 << N), dtype=complex)
    for s, term in enumerate(H.terms):
        term = term.normalized()
        reg = list(range(H.n + s * H.k, H.n + (s + 1) * H.k))
        diag += _diag_zz(reg, N)
        weight = term.c ** (1.0 / H.k)
        for f, anc in zip(term.factors, reg):
            V = V + weight * sparse_embed({f.qubit: axis_operator(f.axis), anc: X}, N)
    g = GadgetHamiltonian(H, float(lam), sp.diags(diag.astype(complex), format="csr"), V.tocsr())
    if check:
        err = g.commutator_norm()
        if err > 1e-12:
            raise ContractError(f"register parity does not commute with H^gad ({err:.3g})")
        # every register carries the same penalty: zero only on 0…0 and 1…1, then k−1
        local = _diag_zz(list(range(H.k)), H.k)
        zeros = np.flatnonzero(local == 0)
        if list(zeros) != [0, (1 << H.k) - 1] or np.min(local[local > 0]) != H.k - 1:
            raise ContractError("ancilla penalty has the wrong ground space or gap")
    return g


def register_isometry(k: int) -> sp.csr_matrix:
    """2^k × 2^{k−1} map x ↦ (|0x⟩ + |1x̄⟩)/√2 onto the parity +1 states."""
    half = 1 << (k - 1)
    cols = np.arange(half)
    rows = np.concatenate([cols, (2 * half - 1) ^ cols])
    data = np.full(2 * half, 1 / math.sqrt(2), dtype=complex)
    return sp.csr_matrix((data, (rows, np.concatenate([cols, cols]))), shape=(2 * half, half))


def sector_isometry(g: GadgetHamiltonian) -> sp.csr_matrix:
    B = sp.identity(1 << g.n, dtype=complex, format="csr")
    R = register_isometry(g.k)
    for _ in range(g.r):
        B = sp.kron(B, R, format="csr")
    return B


@dataclass
class SectorOperators:
    basis: sp.csr_matrix
    H0: np.ndarray
    V: np.ndarray
    lam: float

    @property
    def H(self) -> np.ndarray:
        return self.H0 + self.lam * self.V

    @property
    def dim(self) -> int:
        return self.H0.shape[0]


def sector_operators(g: GadgetHamiltonian) -> SectorOperators:
    B = sector_isometry(g)
    Bh = B.conj().T
    H0 = (Bh @ g.H_anc @ B).toarray()
    V = (Bh @ g.V @ B).toarray()
    return SectorOperators(B, 0.5 * (H0 + H0.conj().T), 0.5 * (V + V.conj().T), g.lam)


def plus_sector(g: GadgetHamiltonian) -> tuple[sp.csr_matrix, np.ndarray]:
    """Isometry onto the all-registers-+1 sector and H^gad restricted to it."""
    ops = sector_operators(g)
    return ops.basis, ops.H


def plus_projector(g: GadgetHamiltonian) -> sp.csr_matrix:
    """Π = ∏_s (I + X_s^{⊗k})/2 on the full space."""
    N = g.num_qubits
    P = sp.identity(1 << N, dtype=complex, format="csr")
    for s in range(g.r):
        P = P @ (0.5 * (sp.identity(1 << N, dtype=complex) + g.register_parity(s)))
    return P.tocsr()


def prediction_coefficient(k: int, lam: float) -> float:
    """−k(−λ)^k/(k−1)!, the strength of the simulated interaction."""
    return -k * (-lam) ** k / math.factorial(k - 1)


def cat_projector(g: GadgetHamiltonian) -> np.ndarray:
    """P_+ on the ancilla factor of the sector basis, where the all-cat state is index 0."""
    anc_dim = 1 << (g.r * (g.k - 1))
    cat = np.zeros((anc_dim, anc_dim))
    cat[0, 0] = 1.0
    return cat


def predicted_hamiltonian(g: GadgetHamiltonian) -> np.ndarray:
    """H^id = coefficient · H^comp ⊗ P_+ written in the sector basis."""
    return prediction_coefficient(g.k, g.lam) * np.kron(g.target.matrix(), cat_projector(g))


def ancilla_ground_projector(g: GadgetHamiltonian) -> np.ndarray:
    """I ⊗ P_+ in the sector basis; the range of the unperturbed ground space."""
    return np.kron(np.eye(1 << g.n), cat_projector(g))
