"""Bloch perturbation series for a degenerate ground space.

For H = H0 + λV with the ground energy of H0 at zero,

    A^(m) = λ^m Σ P0 V S^{l_1} V ... S^{l_{m-1}} V P0
    U^(m) = λ^m Σ S^{l_1} V ... S^{l_m} V P0

where S^l = Σ_{j≠0} P_j / (−E_j)^l for l > 0 and S^0 = −P0. The sums
run over nonnegative tuples with fixed total and partial sums
l_1 + ... + l_p ≥ p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

import numpy as np

from ..errors import ContractError, ConvergenceError
from ..numkernel import hermitian_eig, opnorm
from .hamiltonian import (
    GadgetHamiltonian,
    cat_projector,
    sector_operators,
)

DEGENERACY_TOL = 1e-10


@lru_cache(maxsize=None)
def convex_tuples(length: int, total: int, constrained: int) -> tuple[tuple[int, ...], ...]:
    """Nonnegative ``length``-tuples summing to ``total`` with l_1+…+l_p ≥ p for p ≤ constrained."""
    out = []

    def rec(prefix: list[int], acc: int) -> None:
        p = len(prefix)
        if p == length:
            if acc == total:
                out.append(tuple(prefix))
            return
        for v in range(total - acc + 1):
            if p + 1 <= constrained and acc + v < p + 1:
                continue
            prefix.append(v)
            rec(prefix, acc + v)
            prefix.pop()

    rec([], 0)
    return tuple(out)


def a_tuples(m: int) -> tuple[tuple[int, ...], ...]:
    return convex_tuples(m - 1, m - 1, m - 2)


def u_tuples(m: int) -> tuple[tuple[int, ...], ...]:
    return convex_tuples(m, m, m - 1)


def brute_force_tuple_count(length: int, total: int, constrained: int) -> int:
    """Independent count by filtering every tuple in {0..total}^length."""
    count = 0
    for t in product(range(total + 1), repeat=length):
        if sum(t) != total:
            continue
        if all(sum(t[:p]) >= p for p in range(1, constrained + 1)):
            count += 1
    return count


@dataclass
class BlochSeries:
    order: int
    lam: float
    shift: float  # ground energy of H0, removed before the expansion
    P0: np.ndarray
    Q0: np.ndarray
    S: dict[int, np.ndarray]
    A_terms: list[np.ndarray] = field(default_factory=list)  # A_terms[m-1] = A^(m)
    U_terms: list[np.ndarray] = field(default_factory=list)

    @property
    def A(self) -> np.ndarray:
        return sum(self.A_terms)

    @property
    def U(self) -> np.ndarray:
        return self.P0 + sum(self.U_terms)

    def energies(self) -> np.ndarray:
        """Eigenvalues of the truncated A on the ground space, ascending, shift restored."""
        d = int(round(np.trace(self.P0).real))
        w0, V0 = hermitian_eig(self.P0)
        basis = V0[:, -d:]
        block = basis.conj().T @ self.A @ basis
        return np.sort(np.linalg.eigvals(block).real) + self.shift

    def effective(self) -> np.ndarray:
        """Truncated 𝒰𝒜𝒰†."""
        return self.U @ self.A @ self.U.conj().T

    def convergence_bound(self, norm_v: float, gap: float) -> list[float]:
        """Per-order majorants 2^{2m−1}(‖λV‖/γ)^m for m = 1..order."""
        x = self.lam * norm_v / gap
        return [2 ** (2 * m - 1) * x**m for m in range(1, self.order + 1)]


def _chain(S: dict[int, np.ndarray], V: np.ndarray, ls: tuple[int, ...], right: np.ndarray) -> np.ndarray:
    # S^{l_1} V S^{l_2} V ... S^{l_j} V @ right, built right to left
    out = right
    for l in reversed(ls):
        out = S[l] @ (V @ out)
    return out


def bloch_series(H0, V, lam: float, order: int) -> BlochSeries:
    H0 = np.asarray(H0, dtype=complex)
    V = np.asarray(V, dtype=complex)
    if order < 1:
        raise ContractError(f"order must be positive, got {order}")
    w, U = hermitian_eig(H0)
    e0 = w[0]
    levels = []
    for j, ev in enumerate(w):
        if levels and ev - levels[-1][0] <= DEGENERACY_TOL:
            levels[-1][1].append(j)
        else:
            levels.append((ev, [j]))
    if len(levels) < 2:
        raise ContractError("H0 has a single level; the series is undefined")
    gap = float(levels[1][0] - e0)
    norm = opnorm(V)
    if lam * norm >= gap / 4:
        raise ConvergenceError(
            f"λ‖V‖ = {lam * norm:.4g} is not below γ/4 = {gap / 4:.4g}",
            perturbation_norm=lam * norm,
            gap=gap,
        )
    g = levels[0][1]
    P0 = U[:, g] @ U[:, g].conj().T
    Q0 = np.eye(len(w)) - P0
    excited = np.arange(len(g), len(w))
    Ue = U[:, excited]
    E = w[excited] - e0
    S = {0: -P0}
    for l in range(1, order + 1):
        S[l] = (Ue * (-E) ** (-float(l))) @ Ue.conj().T
    series = BlochSeries(order, lam, float(e0), P0, Q0, S)
    for m in range(1, order + 1):
        A_m = sum(P0 @ V @ _chain(S, V, ls, P0) for ls in a_tuples(m)) if m > 1 else P0 @ V @ P0
        U_m = sum(_chain(S, V, ls, P0) for ls in u_tuples(m))
        series.A_terms.append(lam**m * A_m)
        series.U_terms.append(lam**m * U_m)
    return series


def gadget_series(g: GadgetHamiltonian, order: int | None = None) -> BlochSeries:
    ops = sector_operators(g)
    return bloch_series(ops.H0, ops.V, g.lam, g.k if order is None else order)


# --- leading cross term ------------------------------------------------------


def predicted_coefficient_fraction(k: int) -> Fraction:
    """Coefficient of λ^k in −k(−λ)^k/(k−1)!."""
    return Fraction(-k * (-1) ** k, math.factorial(k - 1))


@dataclass(frozen=True)
class LeadingTermReport:
    k: int
    contributing_tuples: tuple[tuple[int, ...], ...]
    denominator_product: Fraction  # ∏_{j=1}^{k-1} 1/(−j(k−j))
    orderings: int
    coefficient: Fraction  # of λ^k
    formula: Fraction  # −k(−1)^k/(k−1)!
    numeric_coefficient: float | None
    tol: float

    @property
    def passed(self) -> bool:
        ok = self.coefficient == self.formula
        if self.numeric_coefficient is not None:
            ok = ok and abs(self.numeric_coefficient - float(self.formula)) <= self.tol
        return ok


def _symbolic_leading(k: int) -> tuple[tuple[tuple[int, ...], ...], Fraction, int, Fraction]:
    # The cross term flips every ancilla of one register exactly once. After
    # j flips the register sits at energy j(k−j) > 0, so a chain reaching the
    # cross term never meets S^0 = −P0 and each S^l contributes (−j(k−j))^{−l}.
    # A tuple contributes iff every l_i ≥ 1.
    contributing = tuple(ls for ls in a_tuples(k) if all(l >= 1 for l in ls))
    per_tuple = []
    for ls in contributing:
        prod = Fraction(1)
        for j, l in enumerate(ls, start=1):
            prod *= Fraction(1, (-j * (k - j)) ** l)
        per_tuple.append(prod)
    denominators = sum(per_tuple, Fraction(0))
    orderings = sum(1 for _ in permutations(range(k)))
    return contributing, denominators, orderings, denominators * orderings


def leading_term_check(g: GadgetHamiltonian, lam: float | None = None, tol: float = 1e-6) -> LeadingTermReport:
    """Confirm the order-k coefficient of the simulated interaction.

    Symbolic part: exact fractions from the tuple enumeration. Numeric part
    (single-term gadgets): project λ^{−k} A^(k) onto H^comp ⊗ P_+.
    """
    k = g.k
    if k not in (3, 4):
        raise ContractError(f"leading-term check covers k = 3 and 4, got {k}")
    contributing, dens, orderings, coeff = _symbolic_leading(k)
    formula = predicted_coefficient_fraction(k)
    numeric = None
    if g.r == 1:
        lam = g.lam if lam is None else lam
        ops = sector_operators(g)
        A_k = bloch_series(ops.H0, ops.V, lam, k).A_terms[k - 1]
        c = g.target.terms[0].c
        pauli = np.kron(g.target.matrix() / c, cat_projector(g))
        proj = np.real(np.trace(pauli @ A_k)) / np.real(np.trace(pauli @ pauli))
        numeric = float(proj / (c * lam**k))
    return LeadingTermReport(k, contributing, dens, orderings, coeff, formula, numeric, tol)
