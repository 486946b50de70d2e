"""Perturbative gadgets: construction, effective Hamiltonians, Bloch series."""

from .bloch import (
    BlochSeries,
    LeadingTermReport,
    a_tuples,
    bloch_series,
    brute_force_tuple_count,
    convex_tuples,
    gadget_series,
    leading_term_check,
    u_tuples,
)
from .effective import (
    EffectiveHamiltonian,
    ScanRow,
    decoupled_effective,
    effective_hamiltonian,
    error_ratio,
    error_ratio_scan,
    estimate_shift,
    loglog_slope,
    shifted_effective,
)
from .hamiltonian import (
    Factor,
    GadgetHamiltonian,
    KLocalHamiltonian,
    Term,
    build_gadget,
    from_pauli_terms,
    hamiltonian_from_dict,
    load_hamiltonian,
    plus_projector,
    plus_sector,
    predicted_hamiltonian,
    prediction_coefficient,
    sector_operators,
)
