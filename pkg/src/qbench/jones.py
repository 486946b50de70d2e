"""Weighted Markov trace on the Fibonacci representation and Jones values.

The trace sums diagonal entries over strings that start with ``*``:
weight 1 for strings ending in ``*`` and φ for strings ending in ``p``,
normalised so that the identity has trace 1. The Jones value of the
trace closure is then ``(-A)^{3w} φ^{n-1}`` times that trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .braid import BraidWord, concat, inverse, random_braid, stabilize, writhe
from .errors import ContractError
from .fibonacci import CONSTANTS, Sector, apply_braid, enumerate_strings, fib, rep_generator

DENSE_LIMIT = 6

# (sector, weight) pairs making up Q_{n+1}
_WEIGHTED_SECTORS = ((Sector.STAR_STAR, 1.0), (Sector.STAR_P, CONSTANTS.phi))


@dataclass(frozen=True)
class WeightedTraceResult:
    value: complex
    normalizer: float
    partial: dict[str, complex] = field(default_factory=dict)


@dataclass(frozen=True)
class JonesValue:
    value: complex
    writhe: int
    strands: int
    prefactor: complex


def trace_normalizer(strands: int) -> float:
    """φ f_n + f_{n-1}, the weighted dimension of Q_{n+1}."""
    return CONSTANTS.phi * fib(strands) + fib(strands - 1)


def _sector_trace(b: BraidWord, sector: Sector, dense: bool) -> complex:
    dim = len(enumerate_strings(b.strands + 1, sector))
    if dim == 0:
        return 0j
    if dense:
        return complex(np.trace(apply_braid(b, sector, np.eye(dim, dtype=complex))))
    total = 0j
    for j in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[j] = 1.0
        total += apply_braid(b, sector, v)[j]
    return total


def weighted_trace(b: BraidWord, dense: bool | None = None) -> WeightedTraceResult:
    """Normalised weighted trace of rho_F(b).

    ``dense`` picks between one batched product over the whole sector and
    a loop over single basis vectors; by default the batched path is used
    for up to ``DENSE_LIMIT`` strands.
    """
    if dense is None:
        dense = b.strands <= DENSE_LIMIT
    norm = trace_normalizer(b.strands)
    partial = {s.value: _sector_trace(b, s, dense) for s, _ in _WEIGHTED_SECTORS}
    value = sum(w * partial[s.value] for s, w in _WEIGHTED_SECTORS) / norm
    return WeightedTraceResult(complex(value), norm, partial)


def jones_prefactor(strands: int, w: int) -> complex:
    return (-CONSTANTS.A) ** (3 * w) * CONSTANTS.D ** (strands - 1)


def jones_trace_closure(b: BraidWord) -> JonesValue:
    w = writhe(b)
    pre = jones_prefactor(b.strands, w)
    return JonesValue(complex(pre * weighted_trace(b).value), w, b.strands, complex(pre))


# --- Temperley-Lieb image --------------------------------------------------


@dataclass(frozen=True)
class TLImage:
    n: int
    E: tuple[np.ndarray, ...]


@dataclass(frozen=True)
class RelationReport:
    far_commutation: float
    braid_like: float
    quadratic: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.far_commutation, self.braid_like, self.quadratic) <= self.tol


def tl_image(n: int) -> TLImage:
    """E_i = A^{-1} rho_F(sigma_i) - A^{-2} 1 on the full sector."""
    if n < 2:
        raise ContractError(f"Temperley-Lieb generators need n >= 2, got {n}")
    A = CONSTANTS.A
    E = []
    for i in range(1, n):
        R = rep_generator(n, i, Sector.FULL).matrix
        E.append(R / A - np.eye(R.shape[0]) / A**2)
    return TLImage(n, tuple(E))


def tl_relation_check(img: TLImage, tol: float = 1e-10) -> RelationReport:
    E, D = img.E, CONSTANTS.D
    far = braid = quad = 0.0
    for i, Ei in enumerate(E):
        quad = max(quad, np.abs(Ei @ Ei - D * Ei).max())
        for j, Ej in enumerate(E):
            if abs(i - j) > 1:
                far = max(far, np.abs(Ei @ Ej - Ej @ Ei).max())
            elif abs(i - j) == 1:
                braid = max(braid, np.abs(Ei @ Ej @ Ei - Ei).max())
    return RelationReport(float(far), float(braid), float(quad), tol)


# --- Markov moves ----------------------------------------------------------


@dataclass(frozen=True)
class MarkovReport:
    conjugation_error: float
    stabilization_error: float
    trials: int
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.conjugation_error, self.stabilization_error) <= self.tol


def markov_move_check(
    b: BraidWord, trials: int = 10, seed: int = 0, tol: float = 1e-9, conjugator_length: int = 6
) -> MarkovReport:
    """Compare trace and Jones values before and after random Markov moves."""
    rng = np.random.default_rng(seed)
    base_tr = weighted_trace(b).value
    base_jones = jones_trace_closure(b).value
    conj = stab = 0.0
    for _ in range(trials):
        g = random_braid(b.strands, conjugator_length, rng)
        moved = concat(concat(g, b), inverse(g))
        conj = max(conj, abs(weighted_trace(moved).value - base_tr))
        sign = int(rng.choice([-1, 1]))
        stab = max(stab, abs(jones_trace_closure(stabilize(b, sign)).value - base_jones))
    return MarkovReport(float(conj), float(stab), trials, tol)
