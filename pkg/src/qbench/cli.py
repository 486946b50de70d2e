"""Command-line front end.

Exit codes: 0 success, 1 contract or parse error (including bad usage),
2 resource budget exceeded, 3 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Callable, Sequence

import numpy as np

from .braid import parse_braid, writhe
from .errors import ContractError, QBenchError, ResourceError, VerificationError

EXIT_OK, EXIT_CONTRACT, EXIT_RESOURCE, EXIT_VERIFY = 0, 1, 2, 3
ORACLE_TOL = 1e-9


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route it to exit code 1 instead
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ContractError(f"expected comma-separated numbers, got {text!r}") from None


# --- subcommands ---------------------------------------------------------------


def _cmd_jones(args, out) -> int:
    from .bracket import kauffman_bracket
    from .jones import jones_trace_closure

    b = parse_braid(args.braid, args.strands)
    report = {"braid": args.braid, "strands": b.strands, "crossings": len(b), "writhe": writhe(b)}
    fib = jones_trace_closure(b).value
    report.update(fib_re=fib.real, fib_im=fib.imag)
    status = EXIT_OK
    if args.oracle:
        if len(b) > args.max_crossings:
            raise ResourceError(f"{len(b)} crossings exceed --max-crossings {args.max_crossings}")
        oracle = kauffman_bracket(b).jones
        diff = abs(fib - oracle)
        report.update(oracle_re=oracle.real, oracle_im=oracle.imag, difference=diff, tolerance=ORACLE_TOL)
        report["match"] = diff <= ORACLE_TOL
        if not report["match"]:
            status = EXIT_VERIFY
    out.write(_dump(report) + "\n")
    return status


def _cmd_dqc1(args, out) -> int:
    from .dqc1 import dqc1_jones_estimate

    b = parse_braid(args.braid, args.strands)
    if args.shots < 0:
        raise ContractError(f"--shots must be nonnegative, got {args.shots}")
    res = dqc1_jones_estimate(b, shots=args.shots, seed=args.seed)
    report = res.as_dict()
    report["braid"] = args.braid
    report["seed"] = args.seed
    out.write(_dump(report) + "\n")
    return EXIT_OK


def _cmd_gadget_scan(args, out) -> int:
    from .gadgets import error_ratio_scan, load_hamiltonian

    H = load_hamiltonian(args.spec)
    qubits = H.n + H.r * H.k
    if qubits > args.max_qubits:
        raise ResourceError(f"gadget needs {qubits} qubits, over --max-qubits {args.max_qubits}")
    if args.points < 1:
        raise ContractError(f"--points must be positive, got {args.points}")
    lo, hi = args.lambda_min, args.lambda_max
    if not 0 < lo <= hi:
        raise ContractError(f"need 0 < lambda-min <= lambda-max, got {lo}, {hi}")
    grid = np.geomspace(lo, hi, args.points) if args.log else np.linspace(lo, hi, args.points)
    rows = error_ratio_scan(H, grid, method=args.method)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "ratio", "delta", "converged"])
    for r in rows:
        w.writerow([repr(r.lam), repr(r.ratio), repr(r.delta), int(r.converged)])
    out.write(buf.getvalue())
    return EXIT_OK


def _cmd_code_check(args, out) -> int:
    from .gadgets.hamiltonian import read_json
    from .stabilizer import (
        CODES,
        check_detection,
        encode_hamiltonian,
        gap_check,
        local_hamiltonian_from_dict,
        logical_algebra_check,
        random_two_local,
        singleton_check,
    )

    code = CODES[args.code]()
    if args.hamiltonian:
        H2 = local_hamiltonian_from_dict(read_json(args.hamiltonian))
        source = args.hamiltonian
    else:
        H2 = random_two_local(2, np.random.default_rng(args.seed))
        source = "random"
    weight = code.distance - 1
    det = check_detection(code, weight)
    alg = logical_algebra_check(code)
    gap = gap_check(encode_hamiltonian(H2, code, args.penalty))
    algebra_ok = max(alg.anticommutation, alg.squares, alg.idempotence) <= 1e-12 and alg.rank == 2
    report = {
        "code": code.name,
        "n": code.n,
        "distance": code.distance,
        "singleton_bound": singleton_check(code.n, 1, code.distance),
        "detection": {
            "weight": weight,
            "checked": det.checked,
            "violations": [str(E) for E in det.violations],
            "max_detected_norm": det.max_detected_norm,
            "syndrome_consistent": det.anticommutation_consistent,
            "tolerance": 1e-12,
        },
        "logical_algebra": {
            "anticommutation": alg.anticommutation,
            "squares": alg.squares,
            "idempotence": alg.idempotence,
            "rank": alg.rank,
            "tolerance": 1e-12,
        },
        "gap": {
            "hamiltonian": source,
            "seed": args.seed,
            "logical_qubits": H2.n,
            "penalty": gap.E_p,
            "ground": gap.ground,
            "lowest_outside": gap.lowest_outside,
            "gap": gap.gap,
            "code_spectrum_error": gap.code_spectrum_error,
            "sector_leakage": gap.sector_leakage,
            "tolerance": gap.tol,
        },
    }
    report["passed"] = bool(
        det.passed and det.anticommutation_consistent and algebra_ok and gap.passed
    )
    out.write(_dump(report) + "\n")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def _cmd_adiabatic(args, out) -> int:
    from .adiabatic import adiabatic_check, schedule_from_dict
    from .gadgets.hamiltonian import read_json

    Ts = _floats(args.T)
    if not Ts or min(Ts) <= 0:
        raise ContractError("--T needs at least one positive time")
    sched = schedule_from_dict(read_json(args.spec))
    reports = adiabatic_check(sched, Ts, steps=args.steps, method=args.method)
    rows = [
        {
            "T": r.T,
            "distance": r.distance,
            "bound": r.bound,
            "steps": r.steps,
            "nodes": r.nodes,
            "step_tolerance": 1e-8,
            "passed": r.passed,
        }
        for r in reports
    ]
    out.write(_dump(rows) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY


# --- selftest ------------------------------------------------------------------


def _suite_fibrep() -> list[bool]:
    from .fibonacci import Sector, ZeckendorfCodec, braid_relation_check, density_spot_check, split_index

    res = [braid_relation_check(n, s).passed() for n in range(2, 7) for s in Sector]
    for length in range(1, 13):
        codec = ZeckendorfCodec(length)
        res.append(all(codec.index(codec.decode(z)) == z for z in range(codec.size)))
    res.append(split_index("*pp*pp*ppp", 4) == (6, 5))
    res.append(density_spot_check().passed)
    return res


def _suite_jones() -> list[bool]:
    from .braid import BraidWord, random_braid
    from .jones import markov_move_check, tl_image, tl_relation_check, weighted_trace

    res = [abs(weighted_trace(BraidWord(n)).value - 1) <= 1e-12 for n in range(1, 9)]
    res += [tl_relation_check(tl_image(n)).passed for n in range(2, 6)]
    rng = np.random.default_rng(0)
    for case in range(5):
        b = random_braid(int(rng.integers(2, 5)), 5, rng)
        res.append(markov_move_check(b, trials=3, seed=case).passed)
    return res


def _suite_bracket() -> list[bool]:
    from itertools import product

    from .braid import BraidWord
    from .bracket import kauffman_bracket
    from .jones import jones_trace_closure

    res = []
    for length in range(5):
        for letters in product((1, -1, 2, -2), repeat=length):
            b = BraidWord(3, letters)
            res.append(abs(jones_trace_closure(b).value - kauffman_bracket(b).jones) <= ORACLE_TOL)
    return res


def _suite_dqc1() -> list[bool]:
    from .braid import parse_braid
    from .dqc1 import ancilla_block_trace, clean_ancilla_augment, dqc1_jones_estimate
    from .numkernel import random_unitary

    res = []
    for text in ("1 1 1", "1 -2 1 -2", "1 2 3 -1"):
        r = dqc1_jones_estimate(parse_braid(text))
        res.append(abs(r.estimate - r.exact) <= 1e-10)
    U = random_unitary(8, np.random.default_rng(1))
    for m in (1, 2):
        res.append(abs(np.trace(clean_ancilla_augment(U, m)) - (1 << m) * ancilla_block_trace(U, m)) <= 1e-10)
    return res


def _suite_gadgets() -> list[bool]:
    from .gadgets import brute_force_tuple_count, u_tuples, build_gadget, from_pauli_terms, leading_term_check

    catalan = (1, 2, 5, 14, 42)
    res = [len(u_tuples(m)) == c for m, c in zip(range(1, 6), catalan)]
    res += [brute_force_tuple_count(m, m, m - 1) == c for m, c in zip(range(1, 6), catalan)]
    for label in ("XYZ", "XYZZ"):
        g = build_gadget(from_pauli_terms(len(label), [(label, 1.0)]), 0.01)
        res.append(leading_term_check(g).passed)
    return res


def _suite_stabilizer() -> list[bool]:
    from .stabilizer import check_detection, encode_hamiltonian, five_qubit_code, four_qubit_code
    from .stabilizer import gap_check, random_two_local, search_3qubit_codes

    four, five = four_qubit_code(), five_qubit_code()
    res = [check_detection(four, 1).passed, check_detection(five, 2).passed]
    rng = np.random.default_rng(0)
    res += [gap_check(encode_hamiltonian(random_two_local(2, rng), four, 10.0)).passed for _ in range(3)]
    res.append(not search_3qubit_codes().successes)
    return res


def _suite_adiabatic() -> list[bool]:
    from .adiabatic import adiabatic_check, bound_coefficient, goldstone_bound, random_linear_schedule

    rng = np.random.default_rng(0)
    res = []
    for dim in (2, 3):
        s = random_linear_schedule(dim, rng)
        res += [r.passed for r in adiabatic_check(s, (10.0, 100.0))]
        c = bound_coefficient(s).coefficient
        res.append(abs(goldstone_bound(s, 1000.0) * 1000.0 - c) <= 1e-9 * c)
    return res


SUITES: dict[str, Callable[[], list[bool]]] = {
    "fibrep": _suite_fibrep,
    "jonestrace": _suite_jones,
    "bracketoracle": _suite_bracket,
    "dqc1sim": _suite_dqc1,
    "gadgetlab": _suite_gadgets,
    "stabcodes": _suite_stabilizer,
    "adiacheck": _suite_adiabatic,
}


def _cmd_selftest(args, out) -> int:
    names = args.suite or list(SUITES)
    report = {}
    for name in names:
        try:
            results = SUITES[name]()
            report[name] = {"passed": sum(map(bool, results)), "total": len(results)}
        except QBenchError as exc:
            report[name] = {"passed": 0, "total": 1, "error": str(exc)}
    ok = all(r["passed"] == r["total"] for r in report.values())
    out.write(_dump({"suites": report, "passed": ok}) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


# --- wiring --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qbench", description="Numerical experiments on braids, gadgets, codes and adiabatic runs.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")

    s = sub.add_parser("jones", help="Jones value of a trace closure via the Fibonacci representation")
    s.add_argument("--braid", required=True, help='signed generators, e.g. "1 -2 1"')
    s.add_argument("--strands", type=int, default=None)
    s.add_argument("--oracle", action="store_true", help="compare with the Kauffman-bracket state sum")
    s.add_argument("--max-crossings", type=int, default=24, help="budget for the oracle state sum")
    s.set_defaults(func=_cmd_jones)

    s = sub.add_parser("dqc1-jones", help="one-clean-qubit estimate of the Jones value")
    s.add_argument("--braid", required=True)
    s.add_argument("--strands", type=int, default=None)
    s.add_argument("--shots", type=int, default=0, help="0 evaluates the Hadamard tests exactly")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_dqc1)

    s = sub.add_parser(
        "gadget-scan",
        help="gadget error ratio over a coupling sweep",
        description="Writes CSV with columns lambda, ratio (‖H^id − H̃_eff‖/‖H^id‖), "
        "delta (Tr H_eff / d) and converged (1 or 0).",
    )
    s.add_argument("--spec", required=True, help="Hamiltonian JSON file")
    s.add_argument("--lambda-min", type=float, required=True)
    s.add_argument("--lambda-max", type=float, required=True)
    s.add_argument("--points", type=int, default=10)
    s.add_argument("--log", action="store_true", help="logarithmic spacing")
    s.add_argument("--method", choices=("decoupled", "dense"), default="decoupled")
    s.add_argument("--max-qubits", type=int, default=14)
    s.set_defaults(func=_cmd_gadget_scan)

    s = sub.add_parser("code-check", help="stabilizer code detection and penalty-gap report")
    s.add_argument("--code", choices=("four", "five"), required=True)
    s.add_argument("--penalty", type=float, default=10.0, help="penalty energy E_p")
    s.add_argument("--hamiltonian", default=None, help="2-local Hamiltonian JSON; random N=2 if omitted")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_code_check)

    s = sub.add_parser("adiabatic-check", help="evolved-state distance against the 1/T bound")
    s.add_argument("--spec", required=True, help='schedule JSON {"dim", "H0", "H1"}')
    s.add_argument("--T", default="10,100,1000", help="comma-separated run times")
    s.add_argument("--steps", type=int, default=100, help="initial number of time steps")
    s.add_argument("--method", choices=("magnus4", "midpoint"), default="magnus4")
    s.set_defaults(func=_cmd_adiabatic)

    s = sub.add_parser("selftest", help="run the built-in invariant suites")
    s.add_argument("--suite", action="append", choices=sorted(SUITES), help="restrict to one suite (repeatable)")
    s.set_defaults(func=_cmd_selftest)
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        err.write(parser.format_usage() + str(exc) + "\n")
        return EXIT_CONTRACT
    if args.command is None:
        err.write(parser.format_usage())
        return EXIT_CONTRACT
    try:
        return args.func(args, out)
    except ResourceError as exc:
        err.write(f"resource error: {exc}\n")
        return EXIT_RESOURCE
    except VerificationError as exc:
        err.write(f"verification failed: {exc}\n")
        return EXIT_VERIFY
    except (QBenchError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_CONTRACT


def main() -> None:
    sys.exit(run())
