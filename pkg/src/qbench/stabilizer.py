"""Small stabilizer codes, encoded Hamiltonians and energy-penalty gaps.

Encoded Hamiltonians are diagonalised one syndrome sector at a time.
Every logical operator commutes with the generators, so H_S never mixes
sectors; in a basis of states E_s|a_L⟩ (one Pauli representative E_s per
syndrome s, a ∈ {0, 1}) it is block diagonal with blocks of size 2^N.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import ContractError, ResourceError
from .gadgets.hamiltonian import Factor, Term, parse_terms, validate_term
from .numkernel import I2, PauliString, axis_operator, kron_all, pauli_to_matrix, pauli_to_sparse

MAX_ENCODED_QUBITS = 12
TOL = 1e-12


def _basis_state(bits: str, n: int) -> np.ndarray:
    v = np.zeros(1 << n, dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def _superpose(terms: list[tuple[complex, str]], n: int, scale: float) -> np.ndarray:
    return scale * sum(c * _basis_state(b, n) for c, b in terms)


@dataclass(frozen=True)
class StabilizerCode:
    name: str
    n: int
    generators: tuple[PauliString, ...]
    zero_L: np.ndarray
    one_L: np.ndarray
    logicals: dict[str, PauliString]
    distance: int

    @property
    def codewords(self) -> np.ndarray:
        return np.column_stack([self.zero_L, self.one_L])

    @cached_property
    def projector(self) -> np.ndarray:
        P = np.eye(1 << self.n, dtype=complex)
        for g in self.generators:
            P = P @ (0.5 * (np.eye(1 << self.n) + pauli_to_matrix(g)))
        return P

    def syndrome(self, E: PauliString) -> int:
        """Bit j set iff E anticommutes with generator j."""
        return sum(1 << j for j, g in enumerate(self.generators) if not g.commutes_with(E))

    def logical_matrix(self, label: str) -> np.ndarray:
        """⟨i_L| L |j_L⟩ for the stored logical operator."""
        C = self.codewords
        return C.conj().T @ pauli_to_matrix(self.logicals[label]) @ C

    def verify(self, tol: float = TOL) -> None:
        gens = self.generators
        for a, b in itertools.combinations(gens, 2):
            if not a.commutes_with(b):
                raise ContractError(f"{self.name}: generators {a} and {b} anticommute")
        if np.linalg.matrix_rank(self.projector, tol=1e-8) != 2:
            raise ContractError(f"{self.name}: generators are not independent")
        for g in gens:
            M = pauli_to_matrix(g)
            for v in (self.zero_L, self.one_L):
                if np.abs(M @ v - v).max() > tol:
                    raise ContractError(f"{self.name}: codeword not stabilised by {g}")
        for label, L in self.logicals.items():
            if not all(L.commutes_with(g) for g in gens):
                raise ContractError(f"{self.name}: logical {label} does not commute with the stabilizer")
        expected = {
            "X": np.array([[0, 1], [1, 0]]),
            "Y": np.array([[0, -1j], [1j, 0]]),
            "Z": np.array([[1, 0], [0, -1]]),
        }
        for label in self.logicals:
            if np.abs(self.logical_matrix(label) - expected[label]).max() > tol:
                raise ContractError(f"{self.name}: {label}_L does not act as the encoded Pauli {label}")


def _code_distance(n: int, P: np.ndarray, tol: float = 1e-9) -> int:
    # smallest weight of a Pauli whose compression P E P is not a multiple of P
    for w in range(1, n + 1):
        for E in paulis_of_weight(n, w):
            M = P @ pauli_to_matrix(E) @ P
            c = np.trace(M) / np.trace(P)
            if np.abs(M - c * P).max() > tol:
                return w
    return n + 1


def paulis_of_weight(n: int, w: int):
    for support in itertools.combinations(range(n), w):
        for letters in itertools.product("XYZ", repeat=w):
            f = ["I"] * n
            for q, ch in zip(support, letters):
                f[q] = ch
            yield PauliString("".join(f))


def _make_code(name, n, gens, zero, one, logicals) -> StabilizerCode:
    code = StabilizerCode(name, n, tuple(gens), zero, one, logicals, 0)
    code.verify()
    object.__setattr__(code, "distance", _code_distance(n, code.projector))
    return code


def four_qubit_code() -> StabilizerCode:
    zero = _superpose([(1, "0000"), (1j, "0011"), (1j, "1100"), (1, "1111")], 4, 0.5)
    one = _superpose([(-1, "0101"), (1j, "0110"), (1j, "1001"), (-1, "1010")], 4, 0.5)
    gens = [PauliString("XXXX"), PauliString("ZZZZ"), PauliString("XYZI")]
    logicals = {"X": PauliString("YIYI"), "Y": PauliString("IXXI", -1), "Z": PauliString("ZZII")}
    return _make_code("four", 4, gens, zero, one, logicals)


_FIVE_ZERO = (
    "+00000 +10010 +01001 +10100 +01010 -11011 -00110 -11000 "
    "-11101 -00011 -11110 -01111 -10001 -01100 -10111 +00101"
)
_FIVE_ONE = (
    "+11111 +01101 +10110 +01011 +10101 -00100 -11001 -00111 "
    "-00010 -11100 -00001 -10000 -01110 -10011 -01000 +11010"
)


def _signed_list(text: str) -> list[tuple[int, str]]:
    return [(1 if tok[0] == "+" else -1, tok[1:]) for tok in text.split()]


def five_qubit_code() -> StabilizerCode:
    zero = _superpose(_signed_list(_FIVE_ZERO), 5, 0.25)
    one = _superpose(_signed_list(_FIVE_ONE), 5, 0.25)
    gens = [PauliString(s) for s in ("XZZXI", "IXZZX", "XIXZZ", "ZXIXZ")]
    logicals = {
        "X": PauliString("XIYYI", -1),
        "Y": PauliString("ZZIYI", -1),
        "Z": PauliString("YZYII", -1),
    }
    return _make_code("five", 5, gens, zero, one, logicals)


CODES = {"four": four_qubit_code, "five": five_qubit_code}


# --- detection -----------------------------------------------------------------


@dataclass(frozen=True)
class DetectionReport:
    weight: int
    checked: int
    violations: tuple[PauliString, ...]
    max_detected_norm: float  # largest ‖PEP‖ among errors counted as detected
    anticommutation_consistent: bool

    @property
    def passed(self) -> bool:
        return not self.violations


def check_detection(code: StabilizerCode, weight: int, tol: float = TOL) -> DetectionReport:
    if weight < 1:
        raise ContractError(f"weight must be at least 1, got {weight}")
    P = code.projector
    violations, worst, consistent, checked = [], 0.0, True, 0
    for w in range(1, weight + 1):
        for E in paulis_of_weight(code.n, w):
            checked += 1
            norm = float(np.abs(P @ pauli_to_matrix(E) @ P).max())
            detected = norm <= tol
            if detected:
                worst = max(worst, norm)
            else:
                violations.append(E)
            consistent &= detected == (code.syndrome(E) != 0)
    return DetectionReport(weight, checked, tuple(violations), worst, consistent)


@dataclass(frozen=True)
class LogicalAlgebraReport:
    anticommutation: float  # ‖P(X_L Z_L + Z_L X_L)P‖
    squares: float  # max over L of ‖P(L² − I)P‖
    idempotence: float  # ‖P² − P‖
    rank: int


def logical_algebra_check(code: StabilizerCode) -> LogicalAlgebraReport:
    P = code.projector
    L = {k: pauli_to_matrix(v) for k, v in code.logicals.items()}
    anti = np.abs(P @ (L["X"] @ L["Z"] + L["Z"] @ L["X"]) @ P).max()
    sq = max(np.abs(P @ (M @ M - np.eye(len(P))) @ P).max() for M in L.values())
    return LogicalAlgebraReport(
        float(anti), float(sq), float(np.abs(P @ P - P).max()), int(np.linalg.matrix_rank(P, tol=1e-8))
    )


# --- encoded Hamiltonians --------------------------------------------------------


@dataclass(frozen=True)
class LocalHamiltonian:
    """Sum of terms with one or two single-qubit factors ``n̂·σ``."""

    n: int
    terms: tuple[Term, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ContractError(f"need at least one qubit, got {self.n}")
        for s, t in enumerate(self.terms):
            if not 1 <= len(t.factors) <= 2:
                raise ContractError(f"term {s} has {len(t.factors)} factors; only 1- and 2-local terms encode")
            validate_term(t, self.n, f"term {s}")

    def matrix(self) -> np.ndarray:
        H = np.zeros((1 << self.n, 1 << self.n), dtype=complex)
        for t in self.terms:
            ops = {f.qubit: axis_operator(f.axis) for f in t.factors}
            H += t.c * kron_all([ops.get(q, I2) for q in range(self.n)])
        return H


def local_hamiltonian_from_dict(data: dict) -> LocalHamiltonian:
    n, terms = parse_terms(data)
    if "k" in data and int(data["k"]) != 2:
        raise ContractError(f"encoded Hamiltonians must be 2-local, got k={data['k']}")
    return LocalHamiltonian(n, terms)


def random_two_local(n: int, rng: np.random.Generator, scale: float = 1.0) -> LocalHamiltonian:
    """Every one- and two-qubit Pauli term with a coefficient uniform in [−scale, scale]."""
    axes = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)]
    terms = []
    for q in range(n):
        for a in axes:
            terms.append(Term(float(rng.uniform(-scale, scale)), (Factor(q, a),)))
    for q1, q2 in itertools.combinations(range(n), 2):
        for a, b in itertools.product(axes, axes):
            terms.append(Term(float(rng.uniform(-scale, scale)), (Factor(q1, a), Factor(q2, b))))
    return LocalHamiltonian(n, tuple(t for t in terms if t.c != 0))


@dataclass
class EncodedHamiltonian:
    source: LocalHamiltonian
    code: StabilizerCode
    E_p: float
    H_SL: sp.csr_matrix
    H_SP: sp.csr_matrix

    @property
    def H_S(self) -> sp.csr_matrix:
        return (self.H_SL + self.H_SP).tocsr()

    @property
    def num_qubits(self) -> int:
        return self.code.n * self.source.n

    def commutator_norm(self) -> float:
        C = self.H_SL @ self.H_SP - self.H_SP @ self.H_SL
        return float(abs(C).max()) if C.nnz else 0.0


def _block_embed(op: sp.spmatrix, block: int, blocks: int, size: int) -> sp.csr_matrix:
    left = sp.identity(1 << (size * block), dtype=complex, format="csr")
    right = sp.identity(1 << (size * (blocks - block - 1)), dtype=complex, format="csr")
    return sp.kron(sp.kron(left, op), right, format="csr")


def encode_hamiltonian(H2: LocalHamiltonian, code: StabilizerCode, E_p: float) -> EncodedHamiltonian:
    """Replace each n̂·σ by n_x X_L + n_y Y_L + n_z Z_L and add one penalty per block.

    The penalty per block is −E_p Σ g + (#generators) E_p, which is zero
    on the codespace and 2E_p per violated generator.
    """
    N, m = H2.n, code.n
    if not E_p >= 0:
        raise ContractError(f"penalty energy must be nonnegative, got {E_p}")
    if N * m > MAX_ENCODED_QUBITS:
        raise ResourceError(f"{N * m} encoded qubits exceed the budget of {MAX_ENCODED_QUBITS}")
    logical = {k: pauli_to_sparse(v) for k, v in code.logicals.items()}

    def encoded_axis(axis) -> sp.csr_matrix:
        return axis[0] * logical["X"] + axis[1] * logical["Y"] + axis[2] * logical["Z"]

    dim = 1 << (N * m)
    H_SL = sp.csr_matrix((dim, dim), dtype=complex)
    for t in H2.terms:
        op = sp.identity(dim, dtype=complex, format="csr")
        for f in t.factors:
            op = op @ _block_embed(encoded_axis(f.axis), f.qubit, N, m)
        H_SL = H_SL + t.c * op
    H_p = -E_p * sum(pauli_to_sparse(g) for g in code.generators) + len(code.generators) * E_p * sp.identity(
        1 << m, dtype=complex
    )
    H_SP = sum(_block_embed(sp.csr_matrix(H_p), b, N, m) for b in range(N))
    enc = EncodedHamiltonian(H2, code, float(E_p), H_SL.tocsr(), sp.csr_matrix(H_SP))
    err = enc.commutator_norm()
    if err > TOL:
        raise ContractError(f"encoded logical and penalty terms fail to commute ({err:.3g})")
    return enc


def syndrome_basis(code: StabilizerCode) -> tuple[np.ndarray, list[int]]:
    """Unitary with columns E_s|a_L⟩ ordered by (syndrome s, logical a), plus the syndromes."""
    reps: dict[int, PauliString] = {0: PauliString("I" * code.n)}
    for w in range(1, code.n + 1):
        for E in paulis_of_weight(code.n, w):
            reps.setdefault(code.syndrome(E), E)
        if len(reps) == 1 << len(code.generators):
            break
    syndromes = sorted(reps)
    cols = []
    for s in syndromes:
        M = pauli_to_matrix(reps[s])
        cols += [M @ code.zero_L, M @ code.one_L]
    W = np.column_stack(cols)
    if np.abs(W.conj().T @ W - np.eye(W.shape[1])).max() > 1e-10:
        raise ContractError(f"{code.name}: syndrome representatives do not give an orthonormal basis")
    return W, syndromes


@dataclass(frozen=True)
class SectorSpectrum:
    syndromes: tuple[int, ...]  # per encoded block
    energies: np.ndarray

    @property
    def in_codespace(self) -> bool:
        return not any(self.syndromes)


def _syndrome_frame(enc: EncodedHamiltonian) -> tuple[sp.csr_matrix, int]:
    """H_S in the product syndrome basis, and the number of syndromes per block."""
    W, syndromes = syndrome_basis(enc.code)
    Wn = sp.csr_matrix(W)
    for _ in range(enc.source.n - 1):
        Wn = sp.kron(Wn, sp.csr_matrix(W), format="csr")
    return (Wn.conj().T @ enc.H_S @ Wn).tocsr(), len(syndromes)


def sector_spectra(enc: EncodedHamiltonian) -> list[SectorSpectrum]:
    """Eigenvalues of H_S in every joint syndrome sector."""
    N = enc.source.n
    _, syndromes = syndrome_basis(enc.code)
    Ht, ns = _syndrome_frame(enc)
    out = []
    for combo in itertools.product(range(ns), repeat=N):
        # product-basis index: block digits in base 2·ns, each digit 2·syndrome + logical bit
        idx = []
        for bits in itertools.product((0, 1), repeat=N):
            j = 0
            for c, a in zip(combo, bits):
                j = j * (2 * ns) + 2 * c + a
            idx.append(j)
        block = Ht[idx][:, idx].toarray()
        out.append(SectorSpectrum(tuple(syndromes[c] for c in combo), np.linalg.eigvalsh(block)))
    return out


@dataclass(frozen=True)
class GapReport:
    E_p: float
    ground: float
    lowest_outside: float
    code_spectrum_error: float  # codespace eigenvalues vs the unencoded Hamiltonian
    sector_leakage: float  # largest H_S element between different syndrome sectors
    tol: float = 1e-9

    @property
    def gap(self) -> float:
        return self.lowest_outside - self.ground

    @property
    def passed(self) -> bool:
        return self.gap >= self.E_p - self.tol and self.code_spectrum_error <= 1e-10


def _sector_leakage(enc: EncodedHamiltonian) -> float:
    Ht, ns = _syndrome_frame(enc)
    Ht = Ht.tocoo()

    def label(j: np.ndarray) -> np.ndarray:
        # drop the logical bit of every block digit
        lab, mult = np.zeros_like(j), 1
        for _ in range(enc.source.n):
            lab += ((j % (2 * ns)) // 2) * mult
            j = j // (2 * ns)
            mult *= ns
        return lab

    off = label(Ht.row) != label(Ht.col)
    return float(np.abs(Ht.data[off]).max()) if off.any() else 0.0


def gap_check(enc: EncodedHamiltonian) -> GapReport:
    spectra = sector_spectra(enc)
    ground = min(s.energies.min() for s in spectra)
    outside = [s.energies.min() for s in spectra if not s.in_codespace]
    inside = next(s for s in spectra if s.in_codespace)
    ref = np.linalg.eigvalsh(enc.source.matrix())
    return GapReport(
        enc.E_p,
        float(ground),
        float(min(outside)),
        float(np.abs(np.sort(inside.energies) - ref).max()),
        _sector_leakage(enc),
    )


# --- the 3-qubit impossibility search and the singleton bound ---------------------


@dataclass(frozen=True)
class SearchReport:
    pairs_examined: int
    successes: tuple[tuple[PauliString, PauliString], ...]


def search_3qubit_codes(tol: float = TOL) -> SearchReport:
    """Try every ordered pair of commuting, distinct, non-identity Pauli strings on 3 qubits.

    Phases are fixed to +1: flipping the sign of a generator moves the
    codespace to another joint eigenspace, and P E P = 0 depends only on
    whether E anticommutes with some generator, so no pair with other
    phases can succeed where the phase-free one fails.
    """
    n = 3
    strings = [PauliString("".join(f)) for f in itertools.product("IXYZ", repeat=n)][1:]
    singles = [E for E in paulis_of_weight(n, 1)]
    single_mats = [pauli_to_matrix(E) for E in singles]
    successes, examined = [], 0
    eye = np.eye(1 << n)
    for g1, g2 in itertools.permutations(strings, 2):
        if not g1.commutes_with(g2):
            continue
        examined += 1
        P = 0.25 * (eye + pauli_to_matrix(g1)) @ (eye + pauli_to_matrix(g2))
        if all(np.abs(P @ M @ P).max() <= tol for M in single_mats):
            successes.append((g1, g2))
    return SearchReport(examined, tuple(successes))


def singleton_check(n: int, k: int, d: int) -> bool:
    """Quantum singleton bound n − k ≥ 2(d − 1)."""
    return n - k >= 2 * (d - 1)
