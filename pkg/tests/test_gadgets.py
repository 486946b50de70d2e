import json
import math

import numpy as np
import pytest

from qbench.errors import ContractError, ConvergenceError, DegeneracyError, ParseError, ResourceError
from qbench.gadgets import (
    build_gadget,
    decoupled_effective,
    effective_hamiltonian,
    error_ratio,
    error_ratio_scan,
    estimate_shift,
    from_pauli_terms,
    hamiltonian_from_dict,
    load_hamiltonian,
    loglog_slope,
    plus_projector,
    plus_sector,
    predicted_hamiltonian,
    prediction_coefficient,
    sector_operators,
)
from qbench.gadgets.hamiltonian import Factor, KLocalHamiltonian, Term, register_isometry, sector_isometry
from qbench.numkernel import hermitian_eig

XYZ = from_pauli_terms(3, [("XYZ", 1.0)])
XYZ_XYY = from_pauli_terms(3, [("XYZ", 1.0), ("XYY", 1.0)])
XYZZ = from_pauli_terms(4, [("XYZZ", 1.0)])


def test_prediction_coefficient():
    assert prediction_coefficient(3, 0.1) == pytest.approx(3 * 0.1**3 / 2)
    assert prediction_coefficient(4, 0.1) == pytest.approx(-4 * 0.1**4 / 6)


def test_spec_validation():
    with pytest.raises(ContractError):
        KLocalHamiltonian(3, 3, (Term(1.0, (Factor(0, (1, 0, 0)), Factor(1, (0, 1, 0)))),))
    with pytest.raises(ContractError):
        KLocalHamiltonian(2, 2, (Term(1.0, (Factor(0, (1, 1, 0)), Factor(1, (0, 1, 0)))),))
    with pytest.raises(ContractError):
        KLocalHamiltonian(2, 2, (Term(1.0, (Factor(0, (1, 0, 0)), Factor(0, (0, 1, 0)))),))
    with pytest.raises(ParseError):
        hamiltonian_from_dict({"n": 2, "terms": []})
    with pytest.raises(ContractError):
        from_pauli_terms(3, [("XYZ", 1.0), ("XYI", 1.0)])


def test_load_hamiltonian(tmp_path):
    spec = {"n": 3, "k": 3, "terms": [{"c": 2.0, "factors": [
        {"qubit": 0, "axis": [1, 0, 0]}, {"qubit": 1, "axis": [0, 1, 0]}, {"qubit": 2, "axis": [0, 0, 1]}]}]}
    p = tmp_path / "h.json"
    p.write_text(json.dumps(spec))
    H = load_hamiltonian(p)
    assert np.allclose(H.matrix(), 2 * from_pauli_terms(3, [("XYZ", 1.0)]).matrix())
    p.write_text("{not json")
    with pytest.raises(ParseError):
        load_hamiltonian(p)


def test_gadget_structure():
    g = build_gadget(XYZ_XYY, 0.05)
    assert g.num_qubits == 9 and g.gap == 2
    assert g.commutator_norm() == 0
    B, Hp = plus_sector(g)
    P = plus_projector(g).toarray()
    assert np.allclose((B @ B.conj().T).toarray(), P)
    assert np.allclose((B.conj().T @ (g.matrix @ B)).toarray(), Hp)


def test_register_isometry():
    R = register_isometry(3).toarray()
    assert np.allclose(R.conj().T @ R, np.eye(4))
    Xk = np.fliplr(np.eye(8))
    assert np.allclose(Xk @ R, R)


def test_budget():
    big = from_pauli_terms(4, [("XYZZ", 1.0), ("ZZXY", 1.0), ("YYYY", 1.0)])
    with pytest.raises(ResourceError):
        build_gadget(big, 0.01)


def test_negative_coefficient_is_absorbed():
    H = from_pauli_terms(3, [("XYZ", -1.0)])
    g = build_gadget(H, 0.01)
    ops = sector_operators(g)
    e = decoupled_effective(ops.H0, ops.V, 0.01)
    ratio = np.linalg.norm(predicted_hamiltonian(g) - (e.matrix - estimate_shift(e) * e.projector), 2)
    assert ratio / np.linalg.norm(predicted_hamiltonian(g), 2) < 0.05


@pytest.mark.parametrize("H", [XYZ, XYZ_XYY, XYZZ], ids=["xyz", "xyz+xyy", "xyzz"])
@pytest.mark.parametrize("lam", [0.02, 0.05])
def test_decoupled_matches_dense(H, lam):
    g = build_gadget(H, lam)
    ops = sector_operators(g)
    a = decoupled_effective(ops.H0, ops.V, lam)
    b = effective_hamiltonian(ops.H, 1 << H.n)
    assert np.abs(a.matrix - b.matrix).max() < 1e-13
    assert np.abs(a.energies - b.energies).max() < 1e-13


def test_effective_degeneracy_guard():
    H = np.diag([0.0, 1.0, 1.0, 2.0])
    with pytest.raises(DegeneracyError):
        effective_hamiltonian(H, 2)
    assert effective_hamiltonian(H, 3).d == 3


def test_convergence_guard():
    H0 = np.diag([0.0, 1.0])
    V = np.array([[0, 1], [1, 0]], dtype=float)
    with pytest.raises(ConvergenceError) as exc:
        decoupled_effective(H0, V, 0.3)
    assert exc.value.gap == pytest.approx(1.0)
    row = error_ratio(XYZ, 0.6)
    assert not row.converged and math.isnan(row.ratio)


def test_scan_slope_xyz():
    rows = error_ratio_scan(XYZ, np.geomspace(1e-3, 10**-1.5, 6))
    assert all(r.converged for r in rows)
    assert 0.8 <= loglog_slope(rows) <= 1.2


def test_slope_needs_points():
    with pytest.raises(ContractError):
        loglog_slope([])
