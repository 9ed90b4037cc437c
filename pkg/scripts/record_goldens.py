#!/usr/bin/env python3
"""Regenerate the golden emission corpus under tests/golden/<target>/.

Run after any deliberate emission-grammar change, then review the diff.
"""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from golden_cases import GOLDEN_CASES

from qasm2cudaq import EMISSION_TARGETS, compile_source, emit, golden_check


def main() -> int:
    for name, source in GOLDEN_CASES.items():
        kernel = compile_source(source)
        for target in EMISSION_TARGETS:
            emitted = emit(kernel, target)
            path = ROOT / "tests" / "golden" / target / f"{name}.txt"
            ok, detail = golden_check(emitted, str(path), record=True)
            print(f"{target}/{name}: {detail}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
