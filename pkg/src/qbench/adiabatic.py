"""Numerical check of the adiabatic theorem in its explicit 1/T form.

For H(s), s ∈ [0, 1], run for time T from the ground state of H(0), the
final state is within

    (1/T) [ ‖H'(0)‖/γ(0)² + ‖H'(1)‖/γ(1)² + ∫ (5‖H'‖²/γ³ + ‖H''‖/γ²) ds ]

of the ground state of H(1), for a suitable global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline

from .errors import ContractError, ConvergenceError, ParseError
from .numkernel import is_hermitian, random_hermitian

GAP_FLOOR = 1e-8
DEFAULT_NODES = 512


class Schedule:
    """H(s) for s ∈ [0, 1]; subclasses implement :meth:`stack`."""

    dim: int

    def stack(self, s: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, s: float) -> np.ndarray:
        return self.stack(np.array([s]))[0]


@dataclass
class LinearSchedule(Schedule):
    """H(s) = (1 − s) H0 + s H1."""

    H0: np.ndarray
    H1: np.ndarray

    def __post_init__(self):
        self.H0 = np.asarray(self.H0, dtype=complex)
        self.H1 = np.asarray(self.H1, dtype=complex)
        if self.H0.shape != self.H1.shape or self.H0.ndim != 2 or self.H0.shape[0] != self.H0.shape[1]:
            raise ContractError(f"endpoint shapes {self.H0.shape} and {self.H1.shape} do not match")
        for M in (self.H0, self.H1):
            if not is_hermitian(M):
                raise ContractError("schedule endpoints must be Hermitian")
        self.dim = self.H0.shape[0]

    def stack(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)[:, None, None]
        return (1 - s) * self.H0 + s * self.H1


class GridSchedule(Schedule):
    """Cubic-spline interpolation of Hamiltonians sampled on an s-grid."""

    def __init__(self, s_nodes, mats):
        s_nodes = np.asarray(s_nodes, dtype=float)
        mats = np.asarray(mats, dtype=complex)
        if s_nodes[0] != 0 or s_nodes[-1] != 1 or np.any(np.diff(s_nodes) <= 0):
            raise ContractError("grid must increase strictly from 0 to 1")
        for M in mats:
            if not is_hermitian(M):
                raise ContractError("every grid sample must be Hermitian")
        self.dim = mats.shape[1]
        self._re = CubicSpline(s_nodes, mats.real, axis=0)
        self._im = CubicSpline(s_nodes, mats.imag, axis=0)

    def stack(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        M = self._re(s) + 1j * self._im(s)
        return 0.5 * (M + np.conj(np.swapaxes(M, 1, 2)))


def schedule_from_dict(data: dict) -> LinearSchedule:
    """``{"dim": d, "H0": matrix, "H1": matrix}``; complex entries as [re, im] pairs."""

    def mat(x):
        a = np.asarray(x, dtype=float)
        if a.ndim == 3 and a.shape[-1] == 2:
            return a[..., 0] + 1j * a[..., 1]
        return a.astype(complex)

    try:
        dim = int(data["dim"])
        H0, H1 = mat(data["H0"]), mat(data["H1"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed schedule: {exc}") from exc
    if H0.shape != (dim, dim) or H1.shape != (dim, dim):
        raise ContractError(f"schedule matrices must be {dim}x{dim}")
    return LinearSchedule(H0, H1)


def random_linear_schedule(dim: int, rng: np.random.Generator) -> LinearSchedule:
    return LinearSchedule(random_hermitian(dim, rng), random_hermitian(dim, rng))


def _gaps(Hs: np.ndarray, s: np.ndarray) -> np.ndarray:
    w = np.linalg.eigvalsh(Hs)
    gap = w[:, 1] - w[:, 0]
    bad = np.flatnonzero(gap <= GAP_FLOOR)
    if bad.size:
        raise ContractError(f"ground state is degenerate near s = {s[bad[0]]:.6g} (gap {gap[bad[0]]:.3g})")
    return gap


def _bound_coefficient(schedule: Schedule, nodes: int) -> float:
    s = np.linspace(0.0, 1.0, nodes)
    Hs = schedule.stack(s)
    gap = _gaps(Hs, s)
    d1 = np.gradient(Hs, s, axis=0, edge_order=2)
    d2 = np.gradient(d1, s, axis=0, edge_order=2)
    n1 = np.linalg.norm(d1, ord=2, axis=(1, 2))
    n2 = np.linalg.norm(d2, ord=2, axis=(1, 2))
    ends = n1[0] / gap[0] ** 2 + n1[-1] / gap[-1] ** 2
    return float(ends + trapezoid(5 * n1**2 / gap**3 + n2 / gap**2, s))


@dataclass(frozen=True)
class BoundEstimate:
    coefficient: float  # bound · T
    nodes: int

    def at(self, T: float) -> float:
        return self.coefficient / T


def bound_coefficient(
    schedule: Schedule, nodes: int = DEFAULT_NODES, rtol: float = 1e-6, max_nodes: int = 1 << 18
) -> BoundEstimate:
    """T-independent part of the bound, refining the grid until it settles to ``rtol``."""
    prev = _bound_coefficient(schedule, nodes)
    while nodes < max_nodes:
        nodes = 2 * nodes - 1  # keeps the old nodes
        cur = _bound_coefficient(schedule, nodes)
        if abs(cur - prev) <= rtol * abs(cur):
            return BoundEstimate(cur, nodes)
        prev = cur
    raise ConvergenceError(f"bound did not settle to {rtol:g} within {max_nodes} grid nodes")


def goldstone_bound(schedule: Schedule, T: float, **kw) -> float:
    if T <= 0:
        raise ContractError(f"T must be positive, got {T}")
    return bound_coefficient(schedule, **kw).at(T)


def ground_state(H: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(H)
    if w[1] - w[0] <= GAP_FLOOR:
        raise ContractError(f"ground state is degenerate (gap {w[1] - w[0]:.3g})")
    return V[:, 0]


def _expm_herm_stack(M: np.ndarray) -> np.ndarray:
    """exp(−iM) for a stack of Hermitian matrices."""
    w, V = np.linalg.eigh(M)
    return (V * np.exp(-1j * w)[:, None, :]) @ np.conj(np.swapaxes(V, 1, 2))


def _shifted(Hs: np.ndarray) -> np.ndarray:
    # zero each ground energy; this only changes the global phase
    e0 = np.linalg.eigvalsh(Hs)[:, 0]
    return Hs - e0[:, None, None] * np.eye(Hs.shape[1])


def _step_unitaries(schedule: Schedule, T: float, steps: int, method: str) -> np.ndarray:
    h = 1.0 / steps
    left = np.arange(steps) * h
    dt = T * h
    if method == "midpoint":
        return _expm_herm_stack(dt * _shifted(schedule.stack(left + 0.5 * h)))
    if method == "magnus4":
        c = math.sqrt(3) / 6
        H1 = _shifted(schedule.stack(left + (0.5 - c) * h))
        H2 = _shifted(schedule.stack(left + (0.5 + c) * h))
        comm = H2 @ H1 - H1 @ H2
        M = 0.5 * dt * (H1 + H2) - 1j * (math.sqrt(3) / 12) * dt**2 * comm
        return _expm_herm_stack(0.5 * (M + np.conj(np.swapaxes(M, 1, 2))))
    raise ContractError(f"unknown integrator {method!r}; use 'magnus4' or 'midpoint'")


def _apply_sequence(Us: np.ndarray, psi: np.ndarray, chunk: int = 4096) -> tuple[np.ndarray, float]:
    """Apply U_0 first, then U_1, ...; also return the worst norm drift seen."""
    drift = 0.0
    for start in range(0, len(Us), chunk):
        block = Us[start : start + chunk]
        # fold the block into a single operator by pairwise products, preserving order
        while len(block) > 1:
            if len(block) % 2:
                block = np.concatenate([block, np.eye(block.shape[1])[None]], axis=0)
            block = block[1::2] @ block[0::2]
        psi = block[0] @ psi
        drift = max(drift, abs(np.linalg.norm(psi) - 1))
    return psi, drift


@dataclass(frozen=True)
class Evolution:
    psi: np.ndarray
    steps: int
    change: float  # ‖ψ_steps − ψ_{steps/2}‖ at acceptance
    norm_drift: float


def evolve(
    schedule: Schedule,
    T: float,
    steps: int = 100,
    tol: float = 1e-8,
    max_steps: int = 1 << 22,
    method: str = "magnus4",
) -> Evolution:
    """Integrate i dψ/dt = H(t/T) ψ from the ground state of H(0), doubling steps to ``tol``."""
    if steps < 100:
        raise ContractError(f"need at least 100 steps, got {steps}")
    if T < 0:
        raise ContractError(f"T must be nonnegative, got {T}")
    psi0 = ground_state(schedule(0.0))
    prev, drift = _apply_sequence(_step_unitaries(schedule, T, steps, method), psi0)
    while steps < max_steps:
        steps *= 2
        cur, d = _apply_sequence(_step_unitaries(schedule, T, steps, method), psi0)
        drift = max(drift, d)
        change = float(np.linalg.norm(cur - prev))
        if change <= tol:
            return Evolution(cur, steps, change, drift)
        prev = cur
    raise ConvergenceError(f"evolution did not settle to {tol:g} within {max_steps} steps")


def phase_distance(psi: np.ndarray, phi: np.ndarray) -> float:
    """min_θ ‖ψ − e^{iθ} φ‖, evaluated at the optimal θ = arg⟨φ|ψ⟩."""
    ov = np.vdot(phi, psi)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(psi - phase * phi))


@dataclass(frozen=True)
class AdiabaticReport:
    T: float
    distance: float
    bound: float
    steps: int
    nodes: int

    @property
    def passed(self) -> bool:
        return self.distance <= self.bound + 1e-6


def adiabatic_check(schedule: Schedule, Ts, steps: int = 100, method: str = "magnus4") -> list[AdiabaticReport]:
    coeff = bound_coefficient(schedule)
    target = ground_state(schedule(1.0))
    out = []
    for T in Ts:
        ev = evolve(schedule, float(T), steps=steps, method=method)
        out.append(AdiabaticReport(float(T), phase_distance(ev.psi, target), coeff.at(float(T)), ev.steps, coeff.nodes))
    return out
