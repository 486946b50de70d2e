"""One-clean-qubit simulation at the level of exact outcome probabilities.

The clean qubit is always qubit 0 (most significant). Sampling draws
binomial counts from the exact success probability, which has the same
statistics as running the circuit shot by shot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .braid import BraidWord, writhe
from .errors import ContractError, ResourceError
from .fibonacci import CONSTANTS, Sector, ZeckendorfCodec, apply_braid, enumerate_strings, fib
from .jones import jones_prefactor, trace_normalizer, weighted_trace
from .numkernel import is_unitary

MAX_JONES_STRANDS = 6


def _num_qubits(U: np.ndarray) -> int:
    dim = U.shape[0]
    n = dim.bit_length() - 1
    if U.ndim != 2 or U.shape != (dim, dim) or 1 << n != dim:
        raise ContractError(f"expected a 2^n x 2^n matrix, got shape {U.shape}")
    return n


def _check_unitary(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    _num_qubits(U)
    if not is_unitary(U, 1e-10):
        raise ContractError("operator is not unitary")
    return U


def dqc1_probability(U) -> float:
    """Probability that the clean qubit reads 0 after ``U`` acts on |0><0| ⊗ I/2^n."""
    U = _check_unitary(U)
    half = U.shape[0] // 2
    # Tr[P0 U P0 U†] is the squared Frobenius norm of the top-left block
    return float(np.sum(np.abs(U[:half, :half]) ** 2) / half)


def cnot(control: int, target: int, n: int) -> np.ndarray:
    """Permutation matrix of CNOT on ``n`` qubits (qubit 0 most significant)."""
    idx = np.arange(1 << n)
    flip = (idx >> (n - 1 - control)) & 1
    out = idx ^ (flip << (n - 1 - target))
    P = np.zeros((1 << n, 1 << n), dtype=complex)
    P[out, idx] = 1.0
    return P


def cnot_sandwich(U) -> np.ndarray:
    """U' = CNOT(0→e2) (U⊗I) CNOT(0→e1) (U†⊗I) on two extra qubits e1, e2.

    The partial trace of each CNOT over its target is 2|0><0| on qubit 0,
    so Tr[U'] = 4 Tr[P0 U P0 U†].
    """
    U = _check_unitary(U)
    n = _num_qubits(U)
    Ue = np.kron(U, np.eye(4))
    return cnot(0, n + 1, n + 2) @ Ue @ cnot(0, n, n + 2) @ Ue.conj().T


@dataclass(frozen=True)
class TraceEstimate:
    """Estimate of Tr[U]/2^n. ``shots == 0`` marks the exact mode."""

    value: complex
    stderr_re: float
    stderr_im: float
    shots: int
    seed: int | None

    @property
    def stderr(self) -> float:
        return math.hypot(self.stderr_re, self.stderr_im)


def hadamard_probabilities(U) -> tuple[float, float]:
    """Success probabilities of the real and imaginary Hadamard tests."""
    U = _check_unitary(U)
    t = np.trace(U) / U.shape[0]
    return 0.5 + 0.5 * float(t.real), 0.5 + 0.5 * float(t.imag)


def _sample(p: float, shots: int, rng: np.random.Generator) -> tuple[float, float]:
    p = min(max(p, 0.0), 1.0)
    p_hat = rng.binomial(shots, p) / shots
    return 2 * p_hat - 1, 2 * math.sqrt(p_hat * (1 - p_hat) / shots)


def hadamard_trace_estimate(
    U, shots: int = 0, seed: int | None = None, part: str = "both", exact: bool | None = None
) -> TraceEstimate:
    """Normalised trace of ``U`` by the Hadamard test.

    ``part`` selects which of the real / imaginary tests are run (the
    other component is reported as 0 with zero error). Exact mode returns
    the trace itself; it is the default when ``shots == 0``.
    """
    if part not in ("real", "imag", "both"):
        raise ContractError(f"part must be 'real', 'imag' or 'both', got {part!r}")
    U = _check_unitary(U)
    if exact is None:
        exact = shots == 0
    want_re, want_im = part in ("real", "both"), part in ("imag", "both")
    if exact:
        t = np.trace(U) / U.shape[0]
        return TraceEstimate(
            complex(t.real if want_re else 0.0, t.imag if want_im else 0.0), 0.0, 0.0, 0, seed
        )
    if shots <= 0:
        raise ContractError("sampled mode needs a positive shot count")
    rng = np.random.default_rng(seed)
    p_re, p_im = hadamard_probabilities(U)
    re, se_re = _sample(p_re, shots, rng) if want_re else (0.0, 0.0)
    im, se_im = _sample(p_im, shots, rng) if want_im else (0.0, 0.0)
    return TraceEstimate(complex(re, im), se_re, se_im, shots, seed)


def clean_ancilla_augment(U, m: int) -> np.ndarray:
    """Replace ``m`` clean ancillas by maximally mixed qubits plus CNOTs.

    ``U`` acts on ``[ancillas (m)][register]``; the result acts on
    ``[ancillas][register][extras (m)]`` and applies CNOT(ancilla_j → extra_j)
    before ``U``, so Tr[U_a] = 2^m Tr[U (|0><0|^{⊗m} ⊗ I)].
    """
    U = _check_unitary(U)
    total = _num_qubits(U)
    if not 0 <= m <= total:
        raise ContractError(f"cannot treat {m} of {total} qubits as ancillas")
    N = total + m
    C = np.eye(1 << N, dtype=complex)
    for j in range(m):
        C = cnot(j, total + j, N) @ C
    return np.kron(U, np.eye(1 << m)) @ C


def ancilla_block_trace(U, m: int) -> complex:
    """Tr[U (|0><0|^{⊗m} ⊗ I)] for the first ``m`` qubits."""
    U = np.asarray(U, dtype=complex)
    block = U.shape[0] >> m
    return complex(np.trace(U[:block, :block]))


# --- Jones estimator ---------------------------------------------------------


@dataclass(frozen=True)
class WeightedEmbedding:
    b: int
    U: np.ndarray  # 2^b × 2^b braid action on Zeckendorf codes
    weights: np.ndarray  # w_x per bitstring
    W: np.ndarray  # U ⊗ 1 followed by the controlled weight rotation, on b+1 qubits

    def trace_identity_error(self) -> float:
        """|Tr W − 2 Σ w_x U_xx|, zero up to rounding."""
        return float(abs(np.trace(self.W) - 2 * np.sum(self.weights * np.diag(self.U))))


def embedding_bits(strands: int) -> int:
    return math.ceil(math.log2(fib(strands + 4)))


def weighted_embedding(braid: BraidWord) -> WeightedEmbedding:
    n = braid.strands
    b = embedding_bits(n)
    dim = 1 << b
    codec = ZeckendorfCodec(n + 1)
    strings = enumerate_strings(n + 1, Sector.FULL)
    codes = np.array([codec.index(s) for s in strings])
    U = np.eye(dim, dtype=complex)
    U[np.ix_(codes, codes)] = apply_braid(braid, Sector.FULL, np.eye(len(strings), dtype=complex))
    w = np.zeros(dim)
    for s, x in zip(strings, codes):
        if s[0] == "*":
            w[x] = 1.0 if s[-1] == "p" else 1 / CONSTANTS.phi
    # R_y(θ) with θ = 2 arccos(w) has trace 2w
    cos, sin = w, np.sqrt(np.clip(1 - w**2, 0.0, None))
    rot = np.zeros((2 * dim, 2 * dim), dtype=complex)
    rot[0::2, 0::2] = np.diag(cos)
    rot[0::2, 1::2] = np.diag(-sin)
    rot[1::2, 0::2] = np.diag(sin)
    rot[1::2, 1::2] = np.diag(cos)
    W = np.kron(U, np.eye(2)) @ rot
    return WeightedEmbedding(b, U, w, W)


@dataclass(frozen=True)
class DQC1JonesResult:
    trace: TraceEstimate  # Hadamard-test estimate of Tr W / 2^{b+1}
    tr_estimate: complex
    tr_exact: complex
    estimate: complex
    exact: complex
    stderr_re: float
    stderr_im: float
    b: int
    strands: int
    crossings: int

    @property
    def stderr(self) -> float:
        return math.hypot(self.stderr_re, self.stderr_im)

    def as_dict(self) -> dict:
        return {
            "estimate_re": self.estimate.real,
            "estimate_im": self.estimate.imag,
            "stderr": self.stderr,
            "stderr_re": self.stderr_re,
            "stderr_im": self.stderr_im,
            "exact_re": self.exact.real,
            "exact_im": self.exact.imag,
            "shots": self.trace.shots,
            "seed": self.trace.seed,
            "b": self.b,
            "strands": self.strands,
            "crossings": self.crossings,
        }


def dqc1_jones_estimate(braid: BraidWord, shots: int = 0, seed: int | None = None) -> DQC1JonesResult:
    """Estimate the Jones value of the trace closure with one clean qubit.

    ``shots == 0`` evaluates the Hadamard tests exactly.
    """
    n = braid.strands
    if n > MAX_JONES_STRANDS:
        raise ResourceError(f"{n} strands exceed the simulation limit of {MAX_JONES_STRANDS}")
    emb = weighted_embedding(braid)
    est = hadamard_trace_estimate(emb.W, shots=shots, seed=seed)
    scale = CONSTANTS.phi * (1 << emb.b) / trace_normalizer(n)
    pre = jones_prefactor(n, writhe(braid))
    tr_exact = weighted_trace(braid).value
    # the prefactor's phase mixes the independent real and imaginary errors
    amp, alpha = scale * abs(pre), np.angle(pre)
    ca, sa = math.cos(alpha) ** 2, math.sin(alpha) ** 2
    se_re = amp * math.sqrt(ca * est.stderr_re**2 + sa * est.stderr_im**2)
    se_im = amp * math.sqrt(sa * est.stderr_re**2 + ca * est.stderr_im**2)
    return DQC1JonesResult(
        trace=est,
        tr_estimate=complex(scale * est.value),
        tr_exact=tr_exact,
        estimate=complex(pre * scale * est.value),
        exact=complex(pre * tr_exact),
        stderr_re=se_re,
        stderr_im=se_im,
        b=emb.b,
        strands=n,
        crossings=len(braid),
    )
