"""Dense state-vector simulator with per-shot trajectories.

Basis indexing is little-endian: qubit k is bit k of the amplitude index.
Histogram keys render each classical register MSB-first (bit 0 leftmost,
matching OpenQASM bitstring-literal order) and concatenate registers in
declaration order. Gate matrices are documented in docs/gates.md.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import BadPauliString, DegenerateNorm, DynamicCircuit, SimError
from .kir import POS, BoundKernel, CondBlock, Gate, Kernel, Measure, Nop, Predicate, Reset
from .sema import ParamRef

# ---------------------------------------------------------------------------
# RNG: xoshiro256++ seeded via splitmix64; shot s derives its own stream.
# ---------------------------------------------------------------------------

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(state: int) -> tuple[int, int]:
    state = (state + _GOLDEN) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return state, z ^ (z >> 31)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK


class RngStream:
    """Deterministic 64-bit generator; (seed, shot) fully determines the stream."""

    __slots__ = ("s0", "s1", "s2", "s3")

    def __init__(self, seed: int):
        state = seed & _MASK
        state, self.s0 = _splitmix64(state)
        state, self.s1 = _splitmix64(state)
        state, self.s2 = _splitmix64(state)
        state, self.s3 = _splitmix64(state)

    @classmethod
    def for_shot(cls, seed: int, shot: int) -> "RngStream":
        _, derived = _splitmix64((seed + (shot + 1) * _GOLDEN) & _MASK)
        return cls(derived)

    def next_u64(self) -> int:
        result = (_rotl((self.s0 + self.s3) & _MASK, 23) + self.s0) & _MASK
        t = (self.s1 << 17) & _MASK
        self.s2 ^= self.s0
        self.s3 ^= self.s1
        self.s1 ^= self.s2
        self.s0 ^= self.s3
        self.s2 ^= t
        self.s3 = _rotl(self.s3, 45)
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53


# ---------------------------------------------------------------------------
# Simulator state
# ---------------------------------------------------------------------------


@dataclass
class StateVector:
    n: int
    amps: np.ndarray

    @classmethod
    def zero(cls, n: int) -> "StateVector":
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(self.amps.real**2 + self.amps.imag**2)))

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())


class ClassicalStore:
    """Bit registers; never-written bits read as 0."""

    def __init__(self, layout: list[tuple[str, int]]):
        self.layout = list(layout)
        self.bits: dict[str, list[int]] = {name: [0] * width for name, width in layout}

    def write_bit(self, register: str, index: int, value: int) -> None:
        self.bits[register][index] = value

    def read_bit(self, register: str, index: int) -> int:
        return self.bits[register][index]

    def register_uint(self, register: str) -> int:
        """Register as unsigned integer, bit 0 most significant."""
        value = 0
        for bit in self.bits[register]:
            value = (value << 1) | bit
        return value

    def key(self) -> str:
        return "".join(str(b) for name, _ in self.layout for b in self.bits[name])


@dataclass
class ShotHistogram:
    counts: dict[str, int]
    total_shots: int

    def sorted_items(self) -> list[tuple[str, int]]:
        return sorted(self.counts.items())

    def probability(self, key: str) -> float:
        return self.counts.get(key, 0) / self.total_shots


# ---------------------------------------------------------------------------
# Gate matrices (rz = diag(e^{-i th/2}, e^{+i th/2}); u is the standard-library
# 3-angle single-qubit gate; full table in docs/gates.md)
# ---------------------------------------------------------------------------

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_FIXED_1Q: dict[str, np.ndarray] = {
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
    "h": np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=np.complex128),
    "s": np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    "t": np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=np.complex128),
    "sx": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=np.complex128),
}

_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


def _rotation(base: str, angles: tuple[float, ...]) -> np.ndarray:
    if base == "rx":
        (th,) = angles
        c, s = math.cos(th / 2), math.sin(th / 2)
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if base == "ry":
        (th,) = angles
        c, s = math.cos(th / 2), math.sin(th / 2)
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if base == "rz":
        (th,) = angles
        return np.array(
            [[np.exp(-0.5j * th), 0], [0, np.exp(0.5j * th)]], dtype=np.complex128
        )
    if base == "p":
        (th,) = angles
        return np.array([[1, 0], [0, np.exp(1j * th)]], dtype=np.complex128)
    if base == "u":
        th, ph, la = angles
        c, s = math.cos(th / 2), math.sin(th / 2)
        return np.array(
            [
                [c, -np.exp(1j * la) * s],
                [np.exp(1j * ph) * s, np.exp(1j * (ph + la)) * c],
            ],
            dtype=np.complex128,
        )
    raise SimError(f"no matrix for gate '{base}'")


def resolve_angles(op: Gate, params: tuple[float, ...]) -> tuple[float, ...]:
    return tuple(params[a.slot] if isinstance(a, ParamRef) else a for a in op.angles)


def gate_matrix(op: Gate, params: tuple[float, ...] = ()) -> np.ndarray:
    """Unitary of the canonical gate on its targets (controls excluded)."""
    if op.base in _FIXED_1Q:
        mat = _FIXED_1Q[op.base]
    elif op.base == "swap":
        mat = _SWAP
    else:
        mat = _rotation(op.base, resolve_angles(op, params))
    if op.adjoint:
        mat = mat.conj().T
    return mat


def _apply_unitary(
    state: StateVector,
    mat: np.ndarray,
    targets: tuple[int, ...],
    controls: tuple[tuple[int, int], ...],
) -> None:
    """Apply a 2^k unitary on target qubits, restricted to basis states where
    every control qubit matches its polarity. Little-endian: qubit q is axis
    n-1-q of the C-order tensor view; targets[0] is the matrix's high bit."""
    n, k = state.n, len(targets)
    psi = state.amps.reshape((2,) * n)
    ax_c = [n - 1 - q for q, _ in controls]
    ax_t = [n - 1 - q for q in targets]
    moved = np.moveaxis(psi, ax_c + ax_t, range(len(ax_c) + k))
    sel = tuple(pol for _, pol in controls)
    block = moved[sel]
    rest_shape = block.shape[k:]
    flat = block.reshape(1 << k, -1)
    moved[sel] = (mat @ flat).reshape((2,) * k + rest_shape)


def apply_gate(state: StateVector, op: Gate, params: tuple[float, ...] = ()) -> StateVector:
    """Apply one canonical gate op in place; returns the same StateVector."""
    _apply_unitary(state, gate_matrix(op, params), op.targets, op.controls)
    return state


def measure(
    state: StateVector,
    qubit: int,
    rng: RngStream,
    store: ClassicalStore | None = None,
    target_bit: tuple[str, int] | None = None,
) -> int:
    """Projective Z measurement: collapse, renormalize, record the outcome."""
    idx = np.arange(state.amps.size)
    one_mask = (idx >> qubit) & 1 == 1
    p1 = float(np.sum(state.amps.real[one_mask] ** 2 + state.amps.imag[one_mask] ** 2))
    outcome = 1 if rng.uniform() < p1 else 0
    p_outcome = p1 if outcome == 1 else 1.0 - p1
    if p_outcome < 1e-15:
        raise DegenerateNorm(
            f"selected measurement branch {outcome} on qubit {qubit} has probability {p_outcome}"
        )
    state.amps[one_mask != outcome] = 0.0
    state.amps *= 1.0 / math.sqrt(p_outcome)
    if store is not None and target_bit is not None:
        store.write_bit(target_bit[0], target_bit[1], outcome)
    return outcome


def reset(state: StateVector, qubit: int, rng: RngStream) -> StateVector:
    """Force a qubit to |0>: measure, then flip if the outcome was 1."""
    outcome = measure(state, qubit, rng)
    if outcome == 1:
        apply_gate(state, Gate("x", (), (qubit,), ()))
    return state


def _eval_predicate(pred: Predicate, store: ClassicalStore) -> bool:
    if pred.index is not None:
        value = store.read_bit(pred.register, pred.index)
    else:
        value = store.register_uint(pred.register)
    if pred.comparator == "truthy":
        return value != 0
    return {
        "==": value == pred.rhs,
        "!=": value != pred.rhs,
        "<": value < pred.rhs,
        "<=": value <= pred.rhs,
        ">": value > pred.rhs,
        ">=": value >= pred.rhs,
    }[pred.comparator]


def _exec_ops(
    ops: list,
    state: StateVector,
    store: ClassicalStore,
    params: tuple[float, ...],
    rng: RngStream,
    trace: list | None,
) -> None:
    for op in ops:
        if isinstance(op, Gate):
            apply_gate(state, op, params)
        elif isinstance(op, Measure):
            measure(state, op.qubit, rng, store, op.bit)
        elif isinstance(op, Reset):
            reset(state, op.qubit, rng)
        elif isinstance(op, Nop):
            pass
        elif isinstance(op, CondBlock):
            taken = _eval_predicate(op.predicate, store)
            if trace is not None:
                snapshot = {name: list(bits) for name, bits in store.bits.items()}
                trace.append((op.predicate, snapshot, taken))
            _exec_ops(op.then_body if taken else op.else_body, state, store, params, rng, trace)
        else:
            raise SimError(f"unknown op {op!r}")


def run_trajectory(
    bound: BoundKernel, rng: RngStream, trace: list | None = None
) -> tuple[ClassicalStore, StateVector]:
    """Execute one stochastic shot; conditionals read the live classical store."""
    kernel = bound.kernel
    state = StateVector.zero(kernel.qubit_count)
    store = ClassicalStore(kernel.classical_layout)
    _exec_ops(kernel.body, state, store, bound.values, rng, trace)
    return store, state


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def _needs_trajectories(kernel: Kernel) -> bool:
    """True when shots are path-dependent: any feedforward, any reset, any
    operation after a measurement, or a re-measured qubit."""
    measured: set[int] = set()
    for op in kernel.body:
        if isinstance(op, (CondBlock, Reset)):
            return True
        if isinstance(op, Measure):
            if op.qubit in measured:
                return True
            measured.add(op.qubit)
        elif isinstance(op, Gate) and measured:
            return True
    return False


def _gates_only_state(bound: BoundKernel) -> StateVector:
    state = StateVector.zero(bound.kernel.qubit_count)
    for op in bound.kernel.body:
        if isinstance(op, Gate):
            apply_gate(state, op, bound.values)
    return state


def _trajectory_counts(bound: BoundKernel, seed: int, start: int, stop: int) -> Counter:
    counts: Counter = Counter()
    for shot in range(start, stop):
        store, _ = run_trajectory(bound, RngStream.for_shot(seed, shot))
        counts[store.key()] += 1
    return counts


def _sample_static(bound: BoundKernel, shots: int, seed: int) -> ShotHistogram:
    """Static circuits: one simulation, then per-shot draws from the final
    distribution (proven equivalent to trajectories by the oracle suite)."""
    kernel = bound.kernel
    state = _gates_only_state(bound)
    cum = np.cumsum(state.amps.real**2 + state.amps.imag**2)
    measures = [op for op in kernel.body if isinstance(op, Measure)]
    counts: Counter = Counter()
    for shot in range(shots):
        u = RngStream.for_shot(seed, shot).uniform()
        idx = min(int(np.searchsorted(cum, u, side="right")), cum.size - 1)
        store = ClassicalStore(kernel.classical_layout)
        for m in measures:
            store.write_bit(m.bit[0], m.bit[1], (idx >> m.qubit) & 1)
        counts[store.key()] += 1
    return ShotHistogram(dict(counts), shots)


def sample(bound: BoundKernel, shots: int, seed: int, workers: int = 1) -> ShotHistogram:
    """Sample the kernel; identical (seed, shots) gives identical histograms
    regardless of worker count."""
    if shots < 1:
        raise SimError("shots must be >= 1")
    if not _needs_trajectories(bound.kernel):
        return _sample_static(bound, shots, seed)
    if workers <= 1 or shots < 2 * workers:
        counts = _trajectory_counts(bound, seed, 0, shots)
        return ShotHistogram(dict(counts), shots)
    bounds = np.linspace(0, shots, workers + 1, dtype=int)
    merged: Counter = Counter()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_trajectory_counts, bound, seed, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:])
        ]
        for fut in futures:
            merged.update(fut.result())
    return ShotHistogram(dict(merged), shots)


def _scan_static(ops: list) -> None:
    for op in ops:
        if isinstance(op, (Measure, CondBlock, Reset)):
            raise DynamicCircuit(
                f"{type(op).__name__} requires trajectory sampling; use sample()"
            )


def statevector(bound: BoundKernel) -> StateVector:
    """Final state of a static (measurement- and reset-free) kernel."""
    _scan_static(bound.kernel.body)
    state = StateVector.zero(bound.kernel.qubit_count)
    for op in bound.kernel.body:
        if isinstance(op, Gate):
            apply_gate(state, op, bound.values)
    return state


_PAULI = {
    "I": np.eye(2, dtype=np.complex128),
    "X": _FIXED_1Q["x"],
    "Y": _FIXED_1Q["y"],
    "Z": _FIXED_1Q["z"],
}


def expval_pauli(state: StateVector, pauli: str) -> float:
    """<psi|P|psi> for a Pauli string; character k acts on qubit k."""
    if len(pauli) != state.n:
        raise BadPauliString(f"pauli string length {len(pauli)} != {state.n} qubits")
    if any(ch not in _PAULI for ch in pauli):
        raise BadPauliString(f"pauli string may only contain I, X, Y, Z: {pauli!r}")
    transformed = state.copy()
    for qubit, ch in enumerate(pauli):
        if ch != "I":
            _apply_unitary(transformed, _PAULI[ch], (qubit,), ())
    return float(np.vdot(state.amps, transformed.amps).real)
