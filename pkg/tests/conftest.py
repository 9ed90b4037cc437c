import hypothesis
import pytest

from qasm2cudaq import suites

hypothesis.settings.register_profile("ci", deadline=None)
hypothesis.settings.load_profile("ci")

# Conformance corpus: every accepted construct appears at least once.
CORPUS = [
    'OPENQASM 3.0;\ninclude "stdgates.inc";\nqubit q;\nh q;\n',
    'OPENQASM 3.0;\ninclude "stdgates.inc";\nqubit[2] q;\nh q[0];\ncx q[0], q[1];\n',
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "qubit[2] q;\nbit[2] c;\n"
        "h q[0];\n"
        "c[0] = measure q[0];\n"
        "measure q[1] -> c[1];\n"
    ),
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "qubit q;\nbit c;\n"
        "x q; h q;\n"
        "c = measure q;\n"
        "if (c == 1) { x q; }\n"
    ),
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "qubit[2] q;\nbit[2] c;\n"
        "h q;\n"
        "c = measure q;\n"
        "if (c >= 2) { x q[0]; } else { z q[1]; }\n"
    ),
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "const float a = pi/2;\nconst int reps = 2;\n"
        "qubit[3] q;\n"
        "rz(a) q[0];\nrx(pi/4) q[1];\nu(0.1, 0.2, 0.3) q[2];\n"
        "for int i in [0:2] { h q[i]; }\n"
        "for int i in [0:2:2] { s q[i]; }\n"
    ),
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "input float[64] alpha;\ninput array[float[64], 2] theta;\n"
        "qubit[2] q;\n"
        "ry(theta[0]) q[0];\nry(theta[1]) q[1];\nrx(alpha) q[0];\ncx q[0], q[1];\n"
    ),
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "gate pair a, b { h a; cx a, b; }\n"
        "gate turn(t) a { rz(t) a; }\n"
        "qubit[2] q;\n"
        "pair q[0], q[1];\n"
        "inv @ pair q[0], q[1];\n"
        "turn(pi/3) q[0];\n"
    ),
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "qubit[3] q;\n"
        "ctrl @ x q[0], q[1];\n"
        "negctrl @ h q[1], q[2];\n"
        "inv @ s q[0];\n"
        "pow(2) @ t q[1];\n"
        "pow(-1) @ s q[2];\n"
        "ctrl @ inv @ rz(0.5) q[0], q[2];\n"
        "ccx q[0], q[1], q[2];\n"
        "swap q[0], q[2];\n"
    ),
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "qubit[2] q;\nbit c;\n"
        "barrier q[0], q[1];\nbarrier;\n"
        "reset q[0];\n"
        "sdg q[0];\ntdg q[1];\nsx q[0];\n"
        "cy q[0], q[1];\ncz q[0], q[1];\nch q[0], q[1];\n"
        "crz(0.25) q[0], q[1];\ncp(0.75) q[0], q[1];\np(1.5) q[0];\n"
        "c = measure q[1];\n"
    ),
    (
        'OPENQASM 3.0;\ninclude "stdgates.inc";\n'
        "qubit[4] q;\nbit[3] c;\n"
        "h q;\n"
        "for int i in [0:2] { c[i] = measure q[i]; }\n"
        "if (c != 0) { x q[3]; }\n"
        "if (c[1]) { z q[3]; }\n"
    ),
    "OPENQASM 3.0;\nqubit q;\ngate flip a { }\n",
]


@pytest.fixture
def compile_source():
    return suites.compile_source
