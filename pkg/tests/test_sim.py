import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qasm2cudaq import frontend as fe, kir, sema, sim
from qasm2cudaq.errors import BadPauliString, DynamicCircuit
from qasm2cudaq.kir import Gate, Measure
from qasm2cudaq.oracle import fidelity_up_to_global_phase
from qasm2cudaq.sim import ClassicalStore, RngStream, StateVector

HEADER = 'OPENQASM 3.0;\ninclude "stdgates.inc";\n'


def compile_source(source: str) -> kir.Kernel:
    return kir.lower(sema.analyze(fe.parse_source(source)))


def bound(source: str, values=()) -> kir.BoundKernel:
    return kir.bind(compile_source(source), list(values))


class TestRngStream:
    def test_same_seed_same_stream(self):
        a = RngStream(42)
        b = RngStream(42)
        assert [a.next_u64() for _ in range(10)] == [b.next_u64() for _ in range(10)]

    def test_shot_derivation_is_deterministic_and_distinct(self):
        first = [RngStream.for_shot(7, s).next_u64() for s in range(100)]
        second = [RngStream.for_shot(7, s).next_u64() for s in range(100)]
        assert first == second
        assert len(set(first)) == 100

    def test_uniform_in_unit_interval(self):
        rng = RngStream(3)
        draws = [rng.uniform() for _ in range(1000)]
        assert all(0.0 <= u < 1.0 for u in draws)
        assert 0.4 < sum(draws) / len(draws) < 0.6


class TestApplyGate:
    def test_h_on_zero(self):
        state = StateVector.zero(1)
        sim.apply_gate(state, Gate("h", (), (0,), ()))
        np.testing.assert_allclose(state.amps, [math.sqrt(0.5)] * 2, atol=1e-15)

    def test_cnot_truth_table(self):
        # x with pos-control q0 on |01> (q0=1, q1=0) -> |11>
        state = StateVector.zero(2)
        sim.apply_gate(state, Gate("x", (), (0,), ()))
        sim.apply_gate(state, Gate("x", (), (1,), ((0, kir.POS),)))
        expected = np.zeros(4)
        expected[3] = 1
        np.testing.assert_allclose(state.amps, expected, atol=1e-15)

    def test_neg_control_fires_on_zero(self):
        state = StateVector.zero(2)
        sim.apply_gate(state, Gate("x", (), (1,), ((0, kir.NEG),)))
        assert abs(state.amps[2]) == 1.0

    def test_rz_on_plus_expectations(self):
        # brute-force 2x2 oracle: rz(pi/3)|+> leaves <Z>=0, <X>=cos(pi/3)=0.5
        theta = math.pi / 3
        h_mat = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
        rz_mat = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
        psi = rz_mat @ h_mat @ np.array([1, 0], dtype=complex)
        z_expected = float(np.vdot(psi, np.diag([1, -1]) @ psi).real)
        x_expected = float(np.vdot(psi, np.array([[0, 1], [1, 0]]) @ psi).real)
        assert abs(x_expected - 0.5) < 1e-12  # cos(pi/3)

        state = StateVector.zero(1)
        sim.apply_gate(state, Gate("h", (), (0,), ()))
        sim.apply_gate(state, Gate("rz", (theta,), (0,), ()))
        assert abs(sim.expval_pauli(state, "Z") - z_expected) < 1e-12
        assert abs(sim.expval_pauli(state, "X") - x_expected) < 1e-12

    def test_norm_preserved_by_random_gates(self):
        state = StateVector.zero(3)
        rng = np.random.default_rng(5)
        for _ in range(50):
            base = rng.choice(["h", "s", "t", "sx", "rx", "u", "swap"])
            if base == "swap":
                t = tuple(rng.choice(3, size=2, replace=False))
                op = Gate("swap", (), (int(t[0]), int(t[1])), ())
            elif base in ("rx",):
                op = Gate("rx", (float(rng.uniform(-3, 3)),), (int(rng.integers(3)),), ())
            elif base == "u":
                angles = tuple(float(a) for a in rng.uniform(-3, 3, size=3))
                op = Gate("u", angles, (int(rng.integers(3)),), ())
            else:
                op = Gate(base, (), (int(rng.integers(3)),), ())
            sim.apply_gate(state, op)
            assert abs(state.norm() - 1.0) < 1e-10


class TestMeasure:
    def test_measure_zero_state(self):
        state = StateVector.zero(1)
        rng = RngStream(1)
        for _ in range(20):
            assert sim.measure(state, 0, rng) == 0
        np.testing.assert_allclose(state.amps, [1, 0], atol=1e-15)

    def test_bell_collapse(self):
        outcomes = set()
        for shot in range(50):
            state = StateVector.zero(2)
            sim.apply_gate(state, Gate("h", (), (0,), ()))
            sim.apply_gate(state, Gate("x", (), (1,), ((0, kir.POS),)))
            outcome = sim.measure(state, 0, RngStream.for_shot(11, shot))
            outcomes.add(outcome)
            expected = np.zeros(4, dtype=complex)
            expected[3 if outcome else 0] = 1
            assert fidelity_up_to_global_phase(state, expected) > 1 - 1e-12
        assert outcomes == {0, 1}

    def test_minus_state_distribution_6sigma(self):
        # exact p from the amplitude sum: |-> has p(1) = 0.5
        minus = (np.array([1, 0]) - np.array([0, 1])) / math.sqrt(2)
        p1 = float(np.sum(np.abs(minus[1:]) ** 2))
        shots = 10_000
        ones = 0
        for shot in range(shots):
            state = StateVector.zero(1)
            sim.apply_gate(state, Gate("x", (), (0,), ()))
            sim.apply_gate(state, Gate("h", (), (0,), ()))
            ones += sim.measure(state, 0, RngStream.for_shot(99, shot))
        sigma = math.sqrt(shots * p1 * (1 - p1))
        assert abs(ones - shots * p1) <= 6 * sigma
        assert abs(ones / shots - p1) <= 0.02

    def test_writes_to_store(self):
        store = ClassicalStore([("c", 2)])
        state = StateVector.zero(1)
        sim.apply_gate(state, Gate("x", (), (0,), ()))
        sim.measure(state, 0, RngStream(0), store, ("c", 1))
        assert store.read_bit("c", 1) == 1
        assert store.key() == "01"


class TestReset:
    def test_reset_one(self):
        state = StateVector.zero(1)
        sim.apply_gate(state, Gate("x", (), (0,), ()))
        sim.reset(state, 0, RngStream(0))
        np.testing.assert_allclose(state.amps, [1, 0], atol=1e-15)

    def test_reset_plus(self):
        for shot in range(20):
            state = StateVector.zero(1)
            sim.apply_gate(state, Gate("h", (), (0,), ()))
            sim.reset(state, 0, RngStream.for_shot(3, shot))
            marginal = abs(state.amps[1]) ** 2
            assert marginal < 1e-12

    def test_reset_bell_branch_marginal(self):
        # brute force over both branches: q1 ends deterministically 0 or 1
        seen = set()
        for shot in range(40):
            state = StateVector.zero(2)
            sim.apply_gate(state, Gate("h", (), (0,), ()))
            sim.apply_gate(state, Gate("x", (), (1,), ((0, kir.POS),)))
            sim.reset(state, 0, RngStream.for_shot(17, shot))
            idx = np.arange(4)
            p_q1 = float(np.sum(np.abs(state.amps[(idx >> 1) & 1 == 1]) ** 2))
            assert min(p_q1, 1.0 - p_q1) < 1e-12
            seen.add(round(p_q1))
        assert seen == {0, 1}


class TestRunTrajectory:
    def test_empty_kernel(self):
        store, state = sim.run_trajectory(bound("OPENQASM 3.0;\n"), RngStream(0))
        assert store.key() == ""
        np.testing.assert_allclose(state.amps, [1.0])

    def test_conditional_reset_always_zero(self):
        source = (
            f"{HEADER}qubit q;\nbit c;\nh q;\nc = measure q;\nif (c == 1) {{ x q; }}\n"
        )
        bk = bound(source)
        for shot in range(200):
            _, state = sim.run_trajectory(bk, RngStream.for_shot(23, shot))
            assert fidelity_up_to_global_phase(state, np.array([1, 0])) > 1 - 1e-12

    def test_branch_matches_predicate(self):
        source = (
            f"{HEADER}qubit[2] q;\nbit c;\nh q[0];\nc = measure q[0];\n"
            "if (c == 1) { x q[1]; } else { z q[1]; }\n"
        )
        bk = bound(source)
        for shot in range(100):
            trace = []
            store, _ = sim.run_trajectory(bk, RngStream.for_shot(31, shot), trace=trace)
            (pred, snapshot, taken) = trace[0]
            assert taken == (snapshot["c"][0] == 1)

    def test_nested_cond(self):
        source = (
            f"{HEADER}qubit[2] q;\nbit c;\nbit d;\n"
            "x q[0];\nc = measure q[0];\nd = measure q[1];\n"
            "if (c == 1) { if (d == 0) { x q[1]; } }\n"
        )
        _, state = sim.run_trajectory(bound(source), RngStream(0))
        # c=1 always, d=0 always, so q1 flips: final |11>
        assert abs(state.amps[3]) == 1.0


class TestSample:
    def test_reproducible_and_within_6sigma(self):
        source = f"{HEADER}qubit q;\nbit c;\nh q;\nc = measure q;\n"
        bk = bound(source)
        hists = [sim.sample(bk, 10_000, 42) for _ in range(3)]
        assert hists[0].counts == hists[1].counts == hists[2].counts
        sigma = math.sqrt(10_000 * 0.25)
        assert abs(hists[0].counts["0"] - 5000) <= 6 * sigma

    def test_worker_count_does_not_change_histogram(self):
        # dynamic circuit forces the per-shot trajectory path
        source = (
            f"{HEADER}qubit q;\nbit c;\nh q;\nc = measure q;\n"
            "if (c == 1) { x q; }\nc = measure q;\nh q;\nc = measure q;\n"
        )
        bk = bound(source)
        h1 = sim.sample(bk, 2000, 7, workers=1)
        h2 = sim.sample(bk, 2000, 7, workers=2)
        h3 = sim.sample(bk, 2000, 7, workers=3)
        assert h1.counts == h2.counts == h3.counts
        assert h1.total_shots == 2000

    def test_no_classical_bits_empty_key(self):
        hist = sim.sample(bound(f"{HEADER}qubit q;\nh q;\n"), 50, 1)
        assert hist.counts == {"": 50}

    def test_static_and_trajectory_paths_agree_statistically(self):
        # exact probabilities from the brute-force product as the oracle
        static_src = f"{HEADER}qubit[2] q;\nbit[2] c;\nh q[0];\ncx q[0], q[1];\nc = measure q;\n"
        bk = bound(static_src)
        assert not sim._needs_trajectories(bk.kernel)
        # the same physics with a dynamic no-op appended takes the trajectory path
        dyn_src = static_src + "if (c == 0) { barrier; }\n"
        bk_dyn = bound(dyn_src)
        assert sim._needs_trajectories(bk_dyn.kernel)
        shots = 4000
        sigma = math.sqrt(shots * 0.25)
        for hist in (sim.sample(bk, shots, 5), sim.sample(bk_dyn, shots, 5)):
            assert set(hist.counts) == {"00", "11"}
            assert abs(hist.counts["00"] - shots / 2) <= 6 * sigma

    def test_multinomial_respects_measure_order_keys(self):
        source = f"{HEADER}qubit[2] q;\nbit[2] c;\nx q[1];\nc = measure q;\n"
        hist = sim.sample(bound(source), 20, 0)
        assert hist.counts == {"01": 20}  # c[0]=q0=0, c[1]=q1=1, MSB-first


class TestStatevector:
    def test_bell(self):
        state = sim.statevector(bound(f"{HEADER}qubit[2] q;\nh q[0];\ncx q[0], q[1];\n"))
        rt = math.sqrt(0.5)
        np.testing.assert_allclose(state.amps, [rt, 0, 0, rt], atol=1e-15)

    def test_empty_three_qubit(self):
        state = sim.statevector(bound(f"{HEADER}qubit[3] q;\n"))
        expected = np.zeros(8)
        expected[0] = 1
        np.testing.assert_allclose(state.amps, expected)

    def test_qft_on_basis_one(self):
        # brute-force DFT oracle: QFT|001> has amplitudes omega^k / sqrt(8)
        n = 3
        lines = [f"{HEADER}qubit[{n}] q;", "x q[0];"]
        for j in reversed(range(n)):
            lines.append(f"h q[{j}];")
            for k in reversed(range(j)):
                lines.append(f"cp(pi/{1 << (j - k)}) q[{k}], q[{j}];")
        lines.append("swap q[0], q[2];")
        state = sim.statevector(bound("\n".join(lines)))
        omega = np.exp(2j * math.pi / 8)
        expected = np.array([omega**k for k in range(8)]) / math.sqrt(8)
        assert fidelity_up_to_global_phase(state, expected) > 1 - 1e-10

    def test_dynamic_rejected(self):
        with pytest.raises(DynamicCircuit):
            sim.statevector(bound(f"{HEADER}qubit q;\nbit c;\nc = measure q;\n"))
        with pytest.raises(DynamicCircuit):
            sim.statevector(bound(f"{HEADER}qubit q;\nreset q;\n"))

    def test_param_binding_used(self):
        source = f"{HEADER}input array[float[64], 1] t;\nqubit q;\nry(t[0]) q;\n"
        kernel = compile_source(source)
        theta = 1.234
        state = sim.statevector(kir.bind(kernel, [theta]))
        np.testing.assert_allclose(
            state.amps, [math.cos(theta / 2), math.sin(theta / 2)], atol=1e-15
        )


class TestExpvalPauli:
    def test_bell_zz(self):
        state = sim.statevector(bound(f"{HEADER}qubit[2] q;\nh q[0];\ncx q[0], q[1];\n"))
        assert abs(sim.expval_pauli(state, "ZZ") - 1.0) < 1e-12

    @given(st.floats(min_value=-math.pi, max_value=math.pi))
    @settings(max_examples=25)
    def test_ry_zi_is_cos_theta(self, theta):
        state = sim.statevector(bound(f"{HEADER}qubit[2] q;\nry({theta!r}) q[0];\n"))
        assert abs(sim.expval_pauli(state, "ZI") - math.cos(theta)) < 1e-12

    def test_identity_string(self):
        state = sim.statevector(bound(f"{HEADER}qubit[3] q;\nh q[0];\nt q[1];\n"))
        assert abs(sim.expval_pauli(state, "III") - 1.0) < 1e-12

    def test_bad_strings(self):
        state = StateVector.zero(2)
        with pytest.raises(BadPauliString):
            sim.expval_pauli(state, "Z")
        with pytest.raises(BadPauliString):
            sim.expval_pauli(state, "ZQ")

    def test_result_in_range(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            state = StateVector.zero(2)
            for q in range(2):
                angles = tuple(float(a) for a in rng.uniform(-3, 3, size=3))
                sim.apply_gate(state, Gate("u", angles, (q,), ()))
            val = sim.expval_pauli(state, "XY")
            assert -1 - 1e-12 <= val <= 1 + 1e-12


class TestNormalizationInvariant:
    def test_norm_after_every_op_in_trajectories(self):
        source = (
            f"{HEADER}qubit[3] q;\nbit[2] c;\n"
            "h q[0];\ncx q[0], q[1];\nc[0] = measure q[0];\n"
            "if (c[0] == 1) { x q[2]; }\nreset q[1];\nc[1] = measure q[2];\n"
        )
        bk = bound(source)
        for shot in range(25):
            state = StateVector.zero(3)
            store = ClassicalStore(bk.kernel.classical_layout)
            rng = RngStream.for_shot(13, shot)

            def walk(ops):
                for op in ops:
                    if isinstance(op, kir.CondBlock):
                        walk(op.then_body if sim._eval_predicate(op.predicate, store) else [])
                        continue
                    sim._exec_ops([op], state, store, (), rng, None)
                    assert abs(state.norm() - 1.0) <= 1e-10

            walk(bk.kernel.body)
