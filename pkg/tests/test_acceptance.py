"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]`` or ``[FAIL]`` line with the measured
quantity next to its tolerance, then asserts.
"""

import math
import time
from itertools import product

import numpy as np
import pytest

from qbench.adiabatic import adiabatic_check, bound_coefficient, goldstone_bound, random_linear_schedule
from qbench.braid import BraidWord, concat, inverse, parse_braid, random_braid
from qbench.bracket import kauffman_bracket
from qbench.dqc1 import (
    ancilla_block_trace,
    clean_ancilla_augment,
    cnot_sandwich,
    dqc1_jones_estimate,
)
from qbench.fibonacci import (
    Sector,
    ZeckendorfCodec,
    braid_relation_check,
    density_spot_check,
    fib,
    split_index,
)
from qbench.gadgets import (
    brute_force_tuple_count,
    build_gadget,
    decoupled_effective,
    error_ratio_scan,
    from_pauli_terms,
    gadget_series,
    loglog_slope,
    u_tuples,
)
from qbench.gadgets.hamiltonian import sector_operators
from qbench.jones import jones_trace_closure, markov_move_check, tl_image, tl_relation_check, weighted_trace
from qbench.numkernel import random_unitary
from qbench.stabilizer import (
    check_detection,
    encode_hamiltonian,
    five_qubit_code,
    four_qubit_code,
    gap_check,
    random_two_local,
    search_3qubit_codes,
)


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} :: {detail}")
        assert ok, detail

    return emit


def _all_words(strands: int, max_len: int):
    gens = [g for i in range(1, strands) for g in (i, -i)]
    for length in range(max_len + 1):
        for letters in product(gens, repeat=length):
            yield BraidWord(strands, letters)


def test_c01_oracle_equivalence(report):
    start = time.perf_counter()
    words = list(_all_words(2, 6)) + list(_all_words(3, 4))
    rng = np.random.default_rng(2024)
    for _ in range(200):
        words.append(random_braid(int(rng.integers(2, 6)), int(rng.integers(0, 9)), rng))
    worst = max(abs(jones_trace_closure(b).value - kauffman_bracket(b).jones) for b in words)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and elapsed < 120
    report(1, "Fibonacci trace vs bracket oracle", ok,
           f"{len(words)} words, max diff {worst:.2e} (tol 1e-9), {elapsed:.1f}s (limit 120s)")


def test_c02_markov_temperley_lieb(report):
    unit = max(abs(weighted_trace(BraidWord(n)).value - 1) for n in range(1, 11))
    rng = np.random.default_rng(7)
    cyc = move = 0.0
    for case in range(50):
        n = int(rng.integers(2, 6))
        a, b = random_braid(n, 6, rng), random_braid(n, 6, rng)
        cyc = max(cyc, abs(weighted_trace(concat(a, b)).value - weighted_trace(concat(b, a)).value))
        m = markov_move_check(a, trials=2, seed=case)
        move = max(move, m.conjugation_error, m.stabilization_error)
    rel = 0.0
    for n in range(2, 7):
        r = tl_relation_check(tl_image(n))
        rel = max(rel, r.far_commutation, r.braid_like, r.quadratic)
    ok = unit <= 1e-12 and cyc <= 1e-9 and move <= 1e-9 and rel <= 1e-10
    report(2, "Markov trace and Temperley-Lieb relations", ok,
           f"|tr(1)-1| {unit:.1e} (1e-12), cyclicity {cyc:.1e} (1e-9), Markov moves {move:.1e} (1e-9), "
           f"E_i relations {rel:.1e} (1e-10)")


def test_c03_braid_relations(report):
    worst = 0.0
    for n in range(2, 9):
        for s in Sector:
            r = braid_relation_check(n, s)
            worst = max(worst, r.yang_baxter, r.far_commutation)
    report(3, "Yang-Baxter and far commutation, all sectors, n <= 8", worst <= 1e-10,
           f"max defect {worst:.1e} (tol 1e-10)")


def test_c04_density(report):
    r = density_spot_check()
    da = max(abs(r.angle_sigma1 - 7 * math.pi / 5), abs(r.angle_sigma2 - 7 * math.pi / 5))
    ds = abs(r.axis_separation - math.acos(2 - math.sqrt(5)))
    report(4, "density spot checks", da <= 1e-9 and ds <= 1e-9,
           f"angles {r.angle_sigma1:.10f}, {r.angle_sigma2:.10f} (7π/5 ± {da:.1e}), "
           f"separation {r.axis_separation:.10f} (± {ds:.1e}), tol 1e-9")


def test_c05_zeckendorf(report):
    bad = 0
    for length in range(1, 21):
        codec = ZeckendorfCodec(length)
        strings = [codec.decode(z) for z in range(codec.size)]
        bad += len(set(strings)) != fib(length + 2)
        bad += sum(codec.index(s) != z for z, s in enumerate(strings))
    pair = split_index("*pp*pp*ppp", 4)
    report(5, "Zeckendorf bijection (length <= 20) and split example", bad == 0 and pair == (6, 5),
           f"{bad} failures, split -> {pair} (expected (6, 5))")


def test_c06_dqc1(report):
    exact_words = ["1", "1 1 1", "-1 -1 -1", "1 -2 1 -2", "1 2 3 -1 2", "2 -3 4 1 -2 5"]
    exact_err = 0.0
    for w in exact_words:
        b = parse_braid(w)
        exact_err = max(exact_err, abs(dqc1_jones_estimate(b).estimate - jones_trace_closure(b).value))
    sigmas = []
    for seed in range(20):
        r = dqc1_jones_estimate(parse_braid("1 1 1"), shots=100_000, seed=seed)
        sigmas.append(abs(r.estimate.real - r.exact.real) / r.stderr_re)
        sigmas.append(abs(r.estimate.imag - r.exact.imag) / r.stderr_im)
    rng = np.random.default_rng(5)
    ident = 0.0
    for _ in range(5):
        U = random_unitary(8, rng)
        P0 = np.kron(np.diag([1.0, 0.0]), np.eye(4))
        ident = max(ident, abs(np.trace(cnot_sandwich(U)) - 4 * np.trace(P0 @ U @ P0 @ U.conj().T)))
        for m in (1, 2):
            ident = max(ident, abs(np.trace(clean_ancilla_augment(U, m)) - (1 << m) * ancilla_block_trace(U, m)))
    ok = exact_err <= 1e-10 and max(sigmas) <= 4 and ident <= 1e-10
    report(6, "DQC1 estimator", ok,
           f"exact-mode diff {exact_err:.1e} (1e-10), worst sampled deviation {max(sigmas):.2f}σ over 20 seeds "
           f"at 1e5 shots (4σ), trace identities {ident:.1e} (1e-10)")


GADGET_TARGETS = {
    "XYZ": from_pauli_terms(3, [("XYZ", 1.0)]),
    "XYZ+XYY": from_pauli_terms(3, [("XYZ", 1.0), ("XYY", 1.0)]),
    "XYZZ": from_pauli_terms(4, [("XYZZ", 1.0)]),
}


def test_c07_gadget_scaling(report):
    start = time.perf_counter()
    lambdas = np.logspace(-3, -1.5, 10)
    slopes = {}
    for name, H in GADGET_TARGETS.items():
        rows = error_ratio_scan(H, lambdas)
        slopes[name] = loglog_slope(rows) if all(r.converged for r in rows) else float("nan")
    elapsed = time.perf_counter() - start
    ok = all(0.8 <= s <= 1.2 for s in slopes.values()) and elapsed < 300
    detail = ", ".join(f"{k} {v:.3f}" for k, v in slopes.items())
    report(7, "gadget error ratio is linear in λ", ok, f"slopes {detail} (range [0.8, 1.2]), {elapsed:.1f}s (limit 300s)")


def _series_error(H, lam):
    g = build_gadget(H, lam)
    ops = sector_operators(g)
    exact = decoupled_effective(ops.H0, ops.V, lam).energies
    return float(np.abs(gadget_series(g).energies() - exact).max())


def test_c08_bloch_series(report):
    catalan = (1, 2, 5, 14, 42)
    counts = [len(u_tuples(m)) for m in range(1, 6)]
    brute = [brute_force_tuple_count(m, m, m - 1) for m in range(1, 6)]
    ratios = {}
    for name, k in (("XYZ", 3), ("XYZZ", 4)):
        H = GADGET_TARGETS[name]
        for hi, lo in ((0.08, 0.04), (0.04, 0.02), (0.02, 0.01)):
            ratios[(k, hi)] = _series_error(H, hi) / _series_error(H, lo)
    ok = counts == list(catalan) == brute and all(r >= 2 ** (k + 0.5) for (k, _), r in ratios.items())
    detail = ", ".join(f"k={k} λ={lam}: {r:.1f} (≥ {2 ** (k + 0.5):.1f})" for (k, lam), r in ratios.items())
    report(8, "Catalan tuple counts and Bloch series convergence", ok, f"counts {counts}, shrink factors {detail}")


def test_c09_stabilizer_codes(report):
    four, five = four_qubit_code(), five_qubit_code()
    d4, d5 = check_detection(four, 1), check_detection(five, 2)
    rng = np.random.default_rng(99)
    fidelity = leak = 0.0
    gap_ok = 0
    for _ in range(20):
        H = random_two_local(2, rng)
        for code in (four, five):
            r = gap_check(encode_hamiltonian(H, code, 10.0))
            fidelity = max(fidelity, r.code_spectrum_error)
            leak = max(leak, r.sector_leakage)
            gap_ok += r.passed
    search = search_3qubit_codes()
    ok = (
        d4.passed and d5.passed and d4.max_detected_norm <= 1e-12 and d5.max_detected_norm <= 1e-12
        and fidelity <= 1e-10 and gap_ok == 40 and not search.successes
    )
    report(9, "stabilizer codes", ok,
           f"detection 4-qubit w1 {d4.checked - len(d4.violations)}/{d4.checked}, 5-qubit w2 "
           f"{d5.checked - len(d5.violations)}/{d5.checked} (≤1e-12); spectrum error {fidelity:.1e} (1e-10); "
           f"gap_check E_p=10 {gap_ok}/40; 3-qubit search {len(search.successes)} successes in {search.pairs_examined} pairs")


def test_c10_adiabatic(report):
    start = time.perf_counter()
    Ts = (10.0, 100.0, 1000.0)
    passed = total = 0
    worst_ratio = 0.0
    scaling = 0.0
    for dim in (2, 3):
        rng = np.random.default_rng(1000 + dim)
        for _ in range(20):
            s = random_linear_schedule(dim, rng)
            for r in adiabatic_check(s, Ts):
                total += 1
                passed += r.passed
                worst_ratio = max(worst_ratio, r.distance / r.bound)
            c = bound_coefficient(s).coefficient
            scaling = max(scaling, max(abs(goldstone_bound(s, T) * T - c) / c for T in Ts))
    elapsed = time.perf_counter() - start
    ok = passed == total and scaling <= 1e-9 and elapsed < 120
    report(10, "adiabatic distance within the 1/T bound", ok,
           f"{passed}/{total} runs within bound (worst distance/bound {worst_ratio:.3f}), "
           f"1/T scaling error {scaling:.1e} (1e-9), {elapsed:.1f}s (limit 120s)")
