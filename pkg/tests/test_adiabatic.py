import json

import numpy as np
import pytest

from qbench.adiabatic import (
    GridSchedule,
    LinearSchedule,
    adiabatic_check,
    bound_coefficient,
    evolve,
    goldstone_bound,
    ground_state,
    phase_distance,
    random_linear_schedule,
    schedule_from_dict,
)
from qbench.errors import ContractError, ParseError

X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def test_phase_distance():
    v = np.array([1, 1j]) / np.sqrt(2)
    assert phase_distance(np.exp(0.3j) * v, v) < 1e-15
    assert phase_distance(np.array([1, 0]), np.array([0, 1])) == pytest.approx(np.sqrt(2))


def test_schedule_from_dict():
    s = schedule_from_dict({"dim": 2, "H0": [[0, 1], [1, 0]], "H1": [[[1, 0], [0, 1]], [[0, -1], [-1, 0]]]})
    assert np.allclose(s(1.0), np.array([[1, 1j], [-1j, -1]]))
    with pytest.raises(ParseError):
        schedule_from_dict({"H0": []})
    with pytest.raises(ContractError):
        schedule_from_dict({"dim": 3, "H0": [[0, 1], [1, 0]], "H1": [[0, 1], [1, 0]]})
    with pytest.raises(ContractError):
        LinearSchedule(np.array([[0, 1], [0, 0]]), X)


def test_degenerate_schedule_rejected():
    with pytest.raises(ContractError):
        bound_coefficient(LinearSchedule(Z, -Z))


def test_bound_is_exactly_inverse_T():
    s = LinearSchedule(X, Z)
    c = bound_coefficient(s).coefficient
    for T in (10.0, 100.0, 1000.0):
        assert abs(goldstone_bound(s, T) * T - c) <= 1e-9 * c


def test_integrators_agree():
    s = random_linear_schedule(3, np.random.default_rng(2))
    a = evolve(s, 10.0, method="magnus4").psi
    b = evolve(s, 10.0, method="midpoint").psi
    assert phase_distance(a, b) < 1e-7


def test_sudden_limit():
    # T = 0 leaves the initial state untouched
    s = LinearSchedule(X, Z)
    ev = evolve(s, 0.0)
    assert phase_distance(ev.psi, ground_state(X)) < 1e-12


def test_grid_schedule_matches_linear():
    lin = LinearSchedule(X, Z)
    nodes = np.linspace(0, 1, 5)
    grid = GridSchedule(nodes, lin.stack(nodes))
    assert np.allclose(grid(0.37), lin(0.37))
    with pytest.raises(ContractError):
        GridSchedule([0.0, 0.5], lin.stack(np.array([0.0, 0.5])))


@pytest.mark.parametrize("dim", [2, 3])
def test_bound_holds(dim):
    s = random_linear_schedule(dim, np.random.default_rng(dim))
    reports = adiabatic_check(s, (10, 100))
    assert all(r.passed for r in reports)
    assert reports[1].distance < reports[0].distance


def test_bad_integrator():
    with pytest.raises(ContractError):
        evolve(LinearSchedule(X, Z), 1.0, method="euler")
    with pytest.raises(ContractError):
        evolve(LinearSchedule(X, Z), 1.0, steps=10)
