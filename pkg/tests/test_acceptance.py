"""Acceptance criteria, one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Tolerances and runtime budgets are fixed here, not calibrated.
"""

import math
import pathlib
import subprocess
import sys
import time

from qasm2cudaq import kir, sim, suites
from qasm2cudaq.emit import EMISSION_TARGETS, emit, golden_check
from qasm2cudaq.suites import compile_source

from golden_cases import GOLDEN_CASES

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"
SEED = 1234


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    print(f"\n[ACCEPTANCE {num}] {name}: {'PASS' if ok else 'FAIL'} {detail}")
    assert ok, f"criterion {num} ({name}): {detail}"


def test_criterion_1_conditional_reset():
    start = time.perf_counter()
    report = suites.suite_conditional_reset(shots=1000, seed=SEED)
    elapsed = time.perf_counter() - start
    exact = all(case.metric == 1.0 for case in report.cases)
    thresholds = all(case.threshold == 0.999 for case in report.cases)
    ok = report.passed and exact and thresholds and elapsed < 1.0
    _report(1, "conditional reset P(|0>) = 1.0 at >= 0.999, < 1s", ok,
            f"metrics={[c.metric for c in report.cases]} elapsed={elapsed:.2f}s")


def test_criterion_2_teleportation():
    start = time.perf_counter()
    report = suites.suite_teleport(shots=1000, seed=SEED)
    elapsed = time.perf_counter() - start
    ok = report.passed and report.cases[0].metric == 1.0 and elapsed < 1.0
    _report(2, "teleportation 1000/1000 shots return to |0>, < 1s", ok,
            f"fraction={report.cases[0].metric} elapsed={elapsed:.2f}s")


def test_criterion_3_static_correctness():
    start = time.perf_counter()
    report = suites.suite_clifford_differential(case_count=200, seed=SEED, uncompute_cases=20)
    elapsed = time.perf_counter() - start
    oracle_cases = [c for c in report.cases if c.name.startswith("oracle-")]
    uncompute = [c for c in report.cases if c.name.startswith("uncompute-")]
    ok = (
        report.passed
        and len(oracle_cases) == 200
        and len(uncompute) == 20
        and all(c.metric >= 1 - 1e-10 for c in oracle_cases + uncompute)
        and elapsed < 60.0
    )
    worst = min(c.metric for c in oracle_cases + uncompute)
    _report(3, "200 Clifford oracle + 20 uncompute cases at 1-1e-10, < 60s", ok,
            f"worst_fidelity={worst!r} elapsed={elapsed:.1f}s")


def test_criterion_4_compile_once_vqe():
    start = time.perf_counter()
    report = suites.suite_vqe(iterations=50, seed=SEED)
    elapsed = time.perf_counter() - start
    by_name = {c.name: c for c in report.cases}
    ok = (
        report.passed
        and by_name["compile-once-parse"].metric == 1
        and by_name["compile-once-lower"].metric == 1
        and by_name["expval-matches-oracle"].metric <= 1e-9
        and by_name["bound-faster-than-reparse"].passed
        and elapsed < 10.0
    )
    _report(4, "50 bindings, parse/lower == 1, <ZZ> within 1e-9, bound < reparse", ok,
            f"max_err={by_name['expval-matches-oracle'].metric!r} "
            f"speedup={by_name['bound-faster-than-reparse'].metric:.2f}x elapsed={elapsed:.2f}s")


def test_criterion_5_algorithms():
    start = time.perf_counter()
    report = suites.suite_algorithms(seed=SEED, bv_cases=20)
    elapsed = time.perf_counter() - start
    bv = [c for c in report.cases if c.name.startswith("bv-")]
    qft = [c for c in report.cases if c.name.startswith("qft-")]
    ok = (
        report.passed
        and len(bv) == 20
        and all(c.passed for c in bv)
        and all(c.metric >= 1 - 1e-10 for c in qft)
        and elapsed < 5.0
    )
    _report(5, "BV exact recovery x20, QFT n<=6 fidelity >= 1-1e-10, < 5s", ok,
            f"bv={sum(c.passed for c in bv)}/20 qft_worst={min(c.metric for c in qft)!r} "
            f"elapsed={elapsed:.2f}s")


def test_criterion_6_emission_determinism_and_structure():
    start = time.perf_counter()
    failures = []
    for name, source in GOLDEN_CASES.items():
        kernel = compile_source(source)
        for target in EMISSION_TARGETS:
            emitted = emit(kernel, target)
            matched, detail = golden_check(emitted, str(GOLDEN_DIR / target / f"{name}.txt"))
            if not matched:
                failures.append(f"{target}/{name}: {detail}")
    # CondBlock case: each branch body appears exactly once
    ifelse_cpp = emit(compile_source(GOLDEN_CASES["ifelse"]), "cudaq-cpp").text
    ifelse_builder = emit(compile_source(GOLDEN_CASES["ifelse"]), "cudaq-builder").text
    branch_once = (
        ifelse_cpp.count("x(q[1]);") == 1
        and ifelse_cpp.count("h(q[1]);") == 1
        and ifelse_builder.count("kernel.x(q[1])") == 1
        and ifelse_builder.count("kernel.h(q[1])") == 1
    )
    # parameterized case: no numeric literal for any bound angle
    param_kernel = compile_source(GOLDEN_CASES["param_array"])
    bound_values = [0.8675309, 2.71828, 0.57721, 1.41421]
    kir.bind(param_kernel, bound_values)
    no_literals = all(
        repr(v) not in emit(param_kernel, target).text
        for v in bound_values
        for target in EMISSION_TARGETS
    )
    elapsed = time.perf_counter() - start
    ok = not failures and branch_once and no_literals and elapsed < 1.0
    _report(6, "12-case golden corpus byte-equal, branches once, no bound literals", ok,
            f"golden_failures={failures} elapsed={elapsed:.2f}s")


def test_criterion_7_reproducibility(tmp_path):
    source = (
        "OPENQASM 3.0;\n"
        'include "stdgates.inc";\n'
        "qubit q;\n"
        "bit c;\n"
        "h q;\n"
        "c = measure q;\n"
    )
    program = tmp_path / "plus.qasm"
    program.write_text(source)

    def run_cli(workers: int) -> str:
        result = subprocess.run(
            [sys.executable, "-m", "qasm2cudaq.cli", "run", str(program),
             "--shots", "10000", "--seed", "42", "--workers", str(workers)],
            capture_output=True, text=True, check=True,
        )
        return result.stdout

    outputs = [run_cli(1), run_cli(1), run_cli(1), run_cli(4)]
    identical = len(set(outputs)) == 1
    counts = {line.split()[0]: int(line.split()[1]) for line in outputs[0].strip().splitlines()}
    sigma = math.sqrt(10_000 * 0.25)
    balanced = abs(counts["0"] - 5000) <= 6 * sigma and counts["0"] + counts["1"] == 10_000

    # the same guarantee on the per-shot trajectory path (dynamic kernel)
    dynamic = compile_source(source + "if (c == 1) { x q; }\nh q;\nc = measure q;\n")
    bound = kir.bind(dynamic, [])
    h_workers = [sim.sample(bound, 3000, 42, workers=w).counts for w in (1, 2, 4)]
    trajectory_identical = h_workers[0] == h_workers[1] == h_workers[2]

    ok = identical and balanced and trajectory_identical
    _report(7, "bit-identical across 3 runs and 1-vs-N workers, 6-sigma balance", ok,
            f"counts={counts} identical={identical} trajectory_identical={trajectory_identical}")
