from fractions import Fraction

import numpy as np
import pytest

from qbench.errors import ContractError, ConvergenceError
from qbench.gadgets import (
    a_tuples,
    bloch_series,
    brute_force_tuple_count,
    build_gadget,
    convex_tuples,
    from_pauli_terms,
    gadget_series,
    leading_term_check,
    u_tuples,
)
from qbench.gadgets.bloch import predicted_coefficient_fraction
from qbench.gadgets.effective import effective_hamiltonian
from qbench.gadgets.hamiltonian import sector_operators
from qbench.numkernel import random_hermitian

CATALAN = [1, 2, 5, 14, 42, 132]


@pytest.mark.parametrize("m", range(1, 7))
def test_catalan_counts(m):
    assert len(u_tuples(m)) == CATALAN[m - 1]
    assert brute_force_tuple_count(m, m, m - 1) == CATALAN[m - 1]
    if m > 1:
        assert len(a_tuples(m)) == CATALAN[m - 2]


def test_tuples_satisfy_constraints():
    for t in convex_tuples(4, 4, 3):
        assert sum(t) == 4
        assert all(sum(t[:p]) >= p for p in range(1, 4))


def test_predicted_fraction():
    assert predicted_coefficient_fraction(3) == Fraction(3, 2)
    assert predicted_coefficient_fraction(4) == Fraction(-2, 3)


@pytest.mark.parametrize("label", ["XYZ", "XYZZ"])
def test_leading_term(label):
    g = build_gadget(from_pauli_terms(len(label), [(label, 1.0)]), 0.01)
    r = leading_term_check(g)
    assert r.passed
    assert r.orderings == 6 if label == "XYZ" else r.orderings == 24


def test_series_on_generic_matrix():
    # nondegenerate ground state: A is 1x1 and its eigenvalue is the ground energy series
    rng = np.random.default_rng(1)
    H0 = np.diag([0.0, 2.0, 3.0, 5.0])
    V = random_hermitian(4, rng)
    lam = 0.3 / np.linalg.norm(V, 2)
    exact = np.linalg.eigvalsh(H0 + lam * V)[0]
    errs = [abs(bloch_series(H0, V, lam, m).energies()[0] - exact) for m in (1, 2, 3, 4)]
    assert errs[3] < errs[1] < errs[0]


def test_series_convergence_guard():
    with pytest.raises(ConvergenceError):
        bloch_series(np.diag([0.0, 1.0]), np.array([[0, 1], [1, 0]]), 0.5, 2)
    with pytest.raises(ContractError):
        bloch_series(np.eye(2), np.eye(2), 0.1, 2)


@pytest.mark.parametrize("label, order", [("XYZ", 3), ("XYZZ", 4)])
def test_error_shrinks_when_lambda_halves(label, order):
    H = from_pauli_terms(len(label), [(label, 1.0)])
    k = len(label)
    errs = []
    for lam in (0.04, 0.02):
        g = build_gadget(H, lam)
        ops = sector_operators(g)
        exact = effective_hamiltonian(ops.H, 1 << H.n).energies
        errs.append(np.abs(gadget_series(g, order).energies() - exact).max())
    assert errs[0] / errs[1] >= 2 ** (k + 0.5)
