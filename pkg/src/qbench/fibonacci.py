"""Fibonacci representation of the braid group at A = exp(-3πi/5).

Basis states are strings over ``{"p", "*"}`` with no two ``*`` adjacent.
An n-strand braid acts on strings of length n + 1; the crossing sigma_i
sits over symbol i + 1 (1-indexed) and its action depends only on that
symbol and its two neighbours.

Strings are plain ``str`` values. The Zeckendorf index of
``s = s_m ... s_1`` (leftmost symbol is s_m) is ``sum s_i f_{i+1}`` with
``*`` read as 1, and every sector basis is ordered by ascending index.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .braid import BraidWord
from .errors import ContractError

STAR, P = "*", "p"


@dataclass(frozen=True)
class FibConstants:
    A: complex = cmath.exp(-3j * math.pi / 5)
    tau: float = 2 / (1 + math.sqrt(5))
    phi: float = (1 + math.sqrt(5)) / 2

    @property
    def a(self) -> complex:
        return -self.A**4

    @property
    def b(self) -> complex:
        return self.A**8

    @property
    def c(self) -> complex:
        return self.A**8 * self.tau**2 - self.A**4 * self.tau

    @property
    def d(self) -> complex:
        return (self.A**8 + self.A**4) * self.tau**1.5

    @property
    def e(self) -> complex:
        return self.A**8 * self.tau - self.A**4 * self.tau**2

    @property
    def D(self) -> float:
        # equals -A^2 - A^-2 at this root of unity
        return self.phi

    @property
    def delta(self) -> complex:
        return self.A - 1

    @property
    def t(self) -> complex:
        return self.A**-4

    @property
    def mixing_block(self) -> np.ndarray:
        """The 2x2 block acting on (p*p, ppp)."""
        return np.array([[self.c, self.d], [self.d, self.e]], dtype=complex)


CONSTANTS = FibConstants()


@lru_cache(maxsize=None)
def fib(i: int) -> int:
    """Fibonacci numbers with f_0 = 0, f_1 = f_2 = 1."""
    if i < 0:
        raise ContractError(f"Fibonacci index must be nonnegative, got {i}")
    a, b = 0, 1
    for _ in range(i):
        a, b = b, a + b
    return a


def is_valid_string(s: str) -> bool:
    return all(ch in (P, STAR) for ch in s) and STAR * 2 not in s


class Sector(enum.Enum):
    """Invariant subspaces labelled by the (fixed) first and last symbols."""

    STAR_STAR = "star_star"
    STAR_P = "star_p"
    P_STAR = "p_star"
    P_P = "p_p"
    FULL = "full"

    def contains(self, s: str) -> bool:
        if self is Sector.FULL:
            return True
        first, last = {
            Sector.STAR_STAR: (STAR, STAR),
            Sector.STAR_P: (STAR, P),
            Sector.P_STAR: (P, STAR),
            Sector.P_P: (P, P),
        }[self]
        return s[0] == first and s[-1] == last


def sector_dimension(strands: int, sector: Sector) -> int:
    """Dimension on strings of length strands + 1 (closed forms in Fibonacci numbers)."""
    n = strands
    return {
        Sector.STAR_STAR: fib(n - 1),
        Sector.STAR_P: fib(n),
        Sector.P_STAR: fib(n),
        Sector.P_P: fib(n + 1),
        Sector.FULL: fib(n + 3),
    }[sector]


@dataclass
class ZeckendorfCodec:
    """Bijection between valid strings of fixed length and ``range(f_{length+2})``."""

    length: int
    weights: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.length < 1:
            raise ContractError(f"string length must be positive, got {self.length}")
        # weights[k] multiplies the k-th symbol from the left, i.e. s_{m-k} -> f_{m-k+1}
        self.weights = tuple(fib(self.length - k + 1) for k in range(self.length))

    @property
    def size(self) -> int:
        return fib(self.length + 2)

    def index(self, s: str) -> int:
        if len(s) != self.length or not is_valid_string(s):
            raise ContractError(f"{s!r} is not a valid string of length {self.length}")
        return sum(w for w, ch in zip(self.weights, s) if ch == STAR)

    def decode(self, z: int) -> str:
        if not 0 <= z < self.size:
            raise ContractError(f"index {z} outside [0, {self.size}) for length {self.length}")
        out = []
        for w in self.weights:
            # greedy: a weight that fits must be used, and never twice in a row
            if w <= z and (not out or out[-1] != STAR):
                out.append(STAR)
                z -= w
            else:
                out.append(P)
        return "".join(out)


def zeckendorf_index(s: str) -> int:
    return ZeckendorfCodec(len(s)).index(s)


def zeckendorf_decode(z: int, length: int) -> str:
    return ZeckendorfCodec(length).decode(z)


def split_index(s: str, left: int) -> tuple[int, int]:
    """Encode ``s`` as a pair by splitting after ``left`` symbols.

    The left piece is read in the opposite direction (its leftmost symbol
    carries weight f_2); the right piece uses the ordinary index.
    """
    if not 0 < left < len(s):
        raise ContractError(f"split point {left} must lie strictly inside a string of length {len(s)}")
    head, tail = s[:left], s[left:]
    return zeckendorf_index(head[::-1]), zeckendorf_index(tail)


@lru_cache(maxsize=None)
def _sector_basis(length: int, sector: Sector) -> tuple[str, ...]:
    codec = ZeckendorfCodec(length)
    return tuple(s for s in map(codec.decode, range(codec.size)) if sector.contains(s))


def enumerate_strings(length: int, sector: Sector = Sector.FULL) -> list[str]:
    """Valid strings of the given length in ``sector``, by ascending Zeckendorf index."""
    if length < 1:
        raise ContractError(f"string length must be positive, got {length}")
    return list(_sector_basis(length, sector))


class CrossingOperator:
    """Block-sparse image of one generator sigma_i on a sector basis.

    Each basis index belongs to exactly one block: a 1x1 phase (rules a
    and b) or a 2x2 mixing block over the (p*p, ppp) pair.
    """

    def __init__(self, strands: int, index: int, sector: Sector, constants: FibConstants = CONSTANTS):
        if not 1 <= index <= strands - 1:
            raise ContractError(f"generator index {index} out of range for B_{strands}")
        self.strands, self.index, self.sector = strands, index, sector
        basis = _sector_basis(strands + 1, sector)
        lookup = {s: k for k, s in enumerate(basis)}
        k = index  # 0-based position of the symbol under the crossing
        diag_idx, diag_val, pair_star, pair_p = [], [], [], []
        for j, s in enumerate(basis):
            left, mid, right = s[k - 1], s[k], s[k + 1]
            if left == STAR:
                diag_idx.append(j)
                diag_val.append(constants.b if right == STAR else constants.a)
            elif right == STAR:
                diag_idx.append(j)
                diag_val.append(constants.a)
            elif mid == STAR:
                pair_star.append(j)
                pair_p.append(lookup[s[:k] + P + s[k + 1:]])
        self.dim = len(basis)
        self.basis = basis
        self.diag_idx = np.array(diag_idx, dtype=int)
        self.diag_val = np.array(diag_val, dtype=complex)
        self.pair_star = np.array(pair_star, dtype=int)
        self.pair_p = np.array(pair_p, dtype=int)
        self.block = constants.mixing_block

    @property
    def blocks(self) -> list[tuple[tuple[int, ...], np.ndarray]]:
        out = [((int(j),), np.array([[v]])) for j, v in zip(self.diag_idx, self.diag_val)]
        out += [((int(s), int(p)), self.block) for s, p in zip(self.pair_star, self.pair_p)]
        return out

    def apply(self, M: np.ndarray, inverse: bool = False) -> np.ndarray:
        """Left-multiply the rows of ``M`` by this operator (or its inverse)."""
        vals = self.diag_val.conj() if inverse else self.diag_val
        B = self.block.conj().T if inverse else self.block
        out = np.empty_like(M)
        out[self.diag_idx] = vals.reshape((-1,) + (1,) * (M.ndim - 1)) * M[self.diag_idx]
        rs, rp = M[self.pair_star], M[self.pair_p]
        out[self.pair_star] = B[0, 0] * rs + B[0, 1] * rp
        out[self.pair_p] = B[1, 0] * rs + B[1, 1] * rp
        return out

    def dense(self) -> np.ndarray:
        return self.apply(np.eye(self.dim, dtype=complex))


@lru_cache(maxsize=None)
def crossing_operator(strands: int, index: int, sector: Sector) -> CrossingOperator:
    return CrossingOperator(strands, index, sector)


@dataclass(frozen=True)
class RepMatrix:
    sector: Sector
    basis: tuple[str, ...]
    matrix: np.ndarray

    def element(self, row: str, col: str) -> complex:
        return complex(self.matrix[self._lookup[row], self._lookup[col]])

    @cached_property
    def _lookup(self) -> dict[str, int]:
        return {s: k for k, s in enumerate(self.basis)}


def rep_generator(strands: int, index: int, sector: Sector = Sector.FULL) -> RepMatrix:
    op = crossing_operator(strands, index, sector)
    return RepMatrix(sector, op.basis, op.dense())


def apply_braid(b: BraidWord, sector: Sector, M: np.ndarray) -> np.ndarray:
    """Return ``rho(b) @ M`` without forming rho(b)."""
    for g in reversed(b.letters):
        M = crossing_operator(b.strands, abs(g), sector).apply(M, inverse=g < 0)
    return M


def rep_braid(b: BraidWord, sector: Sector = Sector.FULL) -> RepMatrix:
    """Ordered product rho(g_1) rho(g_2) ... of the letters of ``b``."""
    basis = _sector_basis(b.strands + 1, sector)
    return RepMatrix(sector, basis, apply_braid(b, sector, np.eye(len(basis), dtype=complex)))


@dataclass(frozen=True)
class BraidRelationReport:
    strands: int
    sector: Sector
    yang_baxter: float  # max |s_i s_{i+1} s_i - s_{i+1} s_i s_{i+1}|
    far_commutation: float
    unitarity: float

    def passed(self, tol: float = 1e-10) -> bool:
        return max(self.yang_baxter, self.far_commutation, self.unitarity) <= tol


def braid_relation_check(strands: int, sector: Sector = Sector.FULL) -> BraidRelationReport:
    """Largest entrywise defect of the braid-group relations on one sector."""
    if strands < 2:
        raise ContractError(f"need at least two strands, got {strands}")
    S = [rep_generator(strands, i, sector).matrix for i in range(1, strands)]
    yb = far = uni = 0.0
    for i, a in enumerate(S):
        if a.size:
            uni = max(uni, np.abs(a @ a.conj().T - np.eye(len(a))).max())
        for j in range(i + 1, len(S)):
            b = S[j]
            if not a.size:
                continue
            if j == i + 1:
                yb = max(yb, np.abs(a @ b @ a - b @ a @ b).max())
            else:
                far = max(far, np.abs(a @ b - b @ a).max())
    return BraidRelationReport(strands, sector, float(yb), float(far), float(uni))


# --- density spot checks on the two-dimensional *...* sector of B_4 -------

_SIGMA = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def su2_projection(U: np.ndarray) -> np.ndarray:
    """Divide a 2x2 unitary by the principal square root of its determinant."""
    return U / np.sqrt(np.linalg.det(U))


def su2_angle_axis(U: np.ndarray) -> tuple[float, np.ndarray]:
    """Write ``U = cos(θ/2) I + i sin(θ/2) n·σ`` and return (θ in [0, 2π], n)."""
    theta = 2 * math.acos(max(-1.0, min(1.0, float(np.real(np.trace(U))) / 2)))
    s = math.sin(theta / 2)
    axis = np.array([np.trace(sig @ U) / (2j * s) for sig in _SIGMA])
    return theta, np.real(axis)


def so3_image(U: np.ndarray) -> np.ndarray:
    """The rotation R_jk = Tr(σ_j U σ_k U†) / 2 covering U."""
    return np.array(
        [[0.5 * np.real(np.trace(sj @ U @ sk @ U.conj().T)) for sk in _SIGMA] for sj in _SIGMA]
    )


@dataclass(frozen=True)
class DensityReport:
    angle_sigma1: float
    angle_sigma2: float
    axis_separation: float
    expected_angle: float
    expected_separation: float
    power_distances: tuple[float, ...]
    tol: float

    @property
    def passed(self) -> bool:
        return (
            abs(self.angle_sigma1 - self.expected_angle) <= self.tol
            and abs(self.angle_sigma2 - self.expected_angle) <= self.tol
            and abs(self.axis_separation - self.expected_separation) <= self.tol
            and all(dist > 0.1 for dist in self.power_distances)
        )


def density_spot_check(strands: int = 4, tol: float = 1e-9) -> DensityReport:
    """Check the SU(2)/SO(3) facts behind density of the *...* sector on four strands."""
    if strands != 4:
        raise ContractError("the spot check is defined for the two-dimensional sector of B_4")
    gens = [su2_projection(rep_generator(4, i, Sector.STAR_STAR).matrix) for i in (1, 2)]
    (th1, n1), (th2, n2) = (su2_angle_axis(U) for U in gens)
    sep = math.acos(max(-1.0, min(1.0, float(n1 @ n2))))
    R = np.linalg.matrix_power(so3_image(gens[0]), 5) @ np.linalg.matrix_power(so3_image(gens[1]), 5)
    dists = tuple(
        float(np.linalg.norm(np.linalg.matrix_power(R, j) - np.eye(3), 2)) for j in range(1, 6)
    )
    return DensityReport(th1, th2, sep, 7 * math.pi / 5, math.acos(2 - math.sqrt(5)), dists, tol)
