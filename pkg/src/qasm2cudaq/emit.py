"""CUDA-Q source emission in two frozen formats.

`cudaq-cpp` renders a C++ kernel whose conditionals are native host `if`
statements over stored measurement results; `cudaq-builder` renders a
self-contained Python script using the builder API, attaching conditional
bodies as named callables via `c_if`. Both grammars are frozen in
docs/emission.md; emission is byte-deterministic for a given kernel.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import MissingGolden, UnsupportedForTarget, UnsupportedOp
from .kir import NEG, POS, CondBlock, Gate, Kernel, Measure, Nop, Predicate, Reset
from .sema import ParamRef

EMISSION_TARGETS = ("cudaq-cpp", "cudaq-builder")

# IR base -> emitted gate name (both targets follow CUDA-Q naming)
_GATE_NAME = {"u": "u3", "p": "r1"}

# Builder method sugar for a single positive control without adjoint.
_BUILDER_CTRL_SUGAR = frozenset("x y z h rx ry rz p".split())

_NEGATE_CMP = {"==": "!=", "!=": "==", "<": ">=", ">=": "<", "<=": ">", ">": "<="}


@dataclass
class EmittedSource:
    target: str
    text: str
    param_signature: list[tuple[str, int]]


def _check_target(target: str) -> None:
    if target not in EMISSION_TARGETS:
        raise UnsupportedOp(f"unknown emission target {target!r}; expected one of {EMISSION_TARGETS}")


def _angle_text(a, kernel: Kernel) -> str:
    if isinstance(a, ParamRef):
        for spec in kernel.param_layout:
            if spec.offset <= a.slot < spec.offset + spec.count:
                return spec.name if not spec.array else f"{spec.name}[{a.slot - spec.offset}]"
        raise UnsupportedOp(f"parameter slot {a.slot} outside the kernel's layout")
    return repr(a)


def _layout_comments(kernel: Kernel, comment: str) -> list[str]:
    lines = []
    if kernel.qubit_layout:
        parts = []
        base = 0
        for name, size in kernel.qubit_layout:
            parts.append(f"{name} -> q[{base}]" if size == 1 else f"{name} -> q[{base}..{base + size - 1}]")
            base += size
        lines.append(f"{comment} qubit layout: {', '.join(parts)}")
    if kernel.classical_layout:
        regs = ", ".join(f"{name}[{width}]" for name, width in kernel.classical_layout)
        lines.append(f"{comment} classical registers: {regs}")
    if kernel.param_layout:
        params = ", ".join(f"{p.name}[{p.count}]" if p.array else p.name for p in kernel.param_layout)
        lines.append(f"{comment} runtime parameters: {params}")
    return lines


def _index_measures(ops: list, table: dict[int, int], counter: list[int]) -> None:
    for op in ops:
        if isinstance(op, Measure):
            table[id(op)] = counter[0]
            counter[0] += 1
        elif isinstance(op, CondBlock):
            _index_measures(op.then_body, table, counter)
            _index_measures(op.else_body, table, counter)


def _subtree_measures(ops: list) -> list[Measure]:
    found: list[Measure] = []
    for op in ops:
        if isinstance(op, Measure):
            found.append(op)
        elif isinstance(op, CondBlock):
            found.extend(_subtree_measures(op.then_body))
            found.extend(_subtree_measures(op.else_body))
    return found


class _EmitterBase:
    def __init__(self, kernel: Kernel):
        self.kernel = kernel
        self.lines: list[str] = []
        self.indent = 0
        self.measure_index: dict[int, int] = {}
        _index_measures(kernel.body, self.measure_index, [0])
        # classical bit -> local currently holding its value
        self.bit_local: dict[tuple[str, int], str] = {}
        self.cond_count = 0

    def line(self, text: str = "") -> None:
        self.lines.append(("  " * self.indent + text) if text else "")

    def measure_name(self, op: Measure) -> str:
        return f"m{self.measure_index[id(op)]}"

    def pred_bits(self, pred: Predicate) -> list[tuple[str, int]]:
        if pred.index is not None:
            return [(pred.register, pred.index)]
        width = self.kernel.classical_width(pred.register)
        return [(pred.register, i) for i in range(width)]

    def pack_expr(self, pred: Predicate) -> str:
        """MSB-first pack of a whole register into an integer."""
        width = self.kernel.classical_width(pred.register)
        terms = []
        for j in range(width):
            local = self.bit_local[(pred.register, j)]
            shift = width - 1 - j
            terms.append(local if shift == 0 else f"({local} << {shift})")
        return " | ".join(terms)


# ---------------------------------------------------------------------------
# cudaq-cpp
# ---------------------------------------------------------------------------


class _CppEmitter(_EmitterBase):
    def emit(self) -> str:
        k = self.kernel
        self.lines.extend(["// CUDA-Q C++ kernel (target: cudaq-cpp)"])
        self.lines.extend(_layout_comments(k, "//"))
        self.line()
        self.line("#include <cudaq.h>")
        self.line()
        self.line("struct transpiled_kernel {")
        self.indent += 1
        args = ", ".join(
            f"std::vector<double> {p.name}" if p.array else f"double {p.name}"
            for p in k.param_layout
        )
        self.line(f"void operator()({args}) __qpu__ {{")
        self.indent += 1
        if k.qubit_count:
            self.line(f"cudaq::qvector q({k.qubit_count});")
        self.emit_ops(k.body, top_level=True)
        self.indent -= 1
        self.line("}")
        self.indent -= 1
        self.line("};")
        self.line()
        self.line("int main() {")
        self.indent += 1
        call_args = ["1000", "transpiled_kernel{}"]
        for p in k.param_layout:
            if p.array:
                self.line(f"std::vector<double> {p.name}({p.count}, 0.0);  // runtime parameter values")
            else:
                self.line(f"double {p.name} = 0.0;  // runtime parameter value")
            call_args.append(p.name)
        self.line(f"auto counts = cudaq::sample({', '.join(call_args)});")
        self.line("counts.dump();")
        self.line("return 0;")
        self.indent -= 1
        self.line("}")
        return "\n".join(self.lines) + "\n"

    def emit_ops(self, ops: list, top_level: bool) -> None:
        for op in ops:
            if isinstance(op, Gate):
                self.line(self.gate_text(op))
            elif isinstance(op, Measure):
                name = self.measure_name(op)
                if top_level:
                    self.line(f"auto {name} = mz(q[{op.qubit}]);")
                else:
                    self.line(f"{name} = mz(q[{op.qubit}]);")
                self.bit_local[op.bit] = name
            elif isinstance(op, Reset):
                self.line(f"reset(q[{op.qubit}]);")
            elif isinstance(op, Nop):
                pass
            elif isinstance(op, CondBlock):
                self.emit_cond(op, top_level)
            else:
                raise UnsupportedOp(f"no cudaq-cpp rendering for {type(op).__name__}")

    def emit_cond(self, op: CondBlock, top_level: bool) -> None:
        if top_level:
            inner = _subtree_measures([op])
            bits = [m.bit for m in inner]
            for bit in bits:
                if bits.count(bit) > 1:
                    raise UnsupportedForTarget(
                        f"cudaq-cpp cannot render two conditional measurements of "
                        f"{bit[0]}[{bit[1]}] inside one conditional region"
                    )
            for m in inner:
                name = self.measure_name(m)
                init = self.bit_local.get(m.bit, "0")
                self.line(f"int {name} = {init};")
                self.bit_local[m.bit] = name
        pred = op.predicate
        if pred.index is None:
            cval = f"cval{self.cond_count}"
            self.cond_count += 1
            self.line(f"int {cval} = {self.pack_expr(pred)};")
            subject = cval
        else:
            subject = self.bit_local[(pred.register, pred.index)]
        if pred.comparator == "truthy":
            cond = subject if pred.index is not None else f"{subject} != 0"
        else:
            cond = f"{subject} {pred.comparator} {pred.rhs}"
        self.line(f"if ({cond}) {{")
        self.indent += 1
        self.emit_ops(op.then_body, top_level=False)
        self.indent -= 1
        if op.else_body:
            self.line("} else {")
            self.indent += 1
            self.emit_ops(op.else_body, top_level=False)
            self.indent -= 1
        self.line("}")

    def gate_text(self, op: Gate) -> str:
        name = _GATE_NAME.get(op.base, op.base)
        mods = []
        if op.controls:
            mods.append("cudaq::ctrl")
        if op.adjoint:
            mods.append("cudaq::adj")
        if mods:
            name = f"{name}<{', '.join(mods)}>"
        args = [_angle_text(a, self.kernel) for a in op.angles]
        args += [f"!q[{q}]" if pol == NEG else f"q[{q}]" for q, pol in op.controls]
        args += [f"q[{t}]" for t in op.targets]
        return f"{name}({', '.join(args)});"


# ---------------------------------------------------------------------------
# cudaq-builder
# ---------------------------------------------------------------------------


class _BuilderEmitter(_EmitterBase):
    def __init__(self, kernel: Kernel):
        super().__init__(kernel)
        self.sub_count = 0

    def emit(self) -> str:
        k = self.kernel
        self.lines.append("# CUDA-Q builder kernel (target: cudaq-builder)")
        self.lines.extend(_layout_comments(k, "#"))
        self.line()
        self.line()
        self.line("def build_kernel():")
        self.indent += 1
        self.line("import cudaq")
        self.line()
        if k.param_layout:
            names = ", ".join(p.name for p in k.param_layout)
            types = ", ".join("list[float]" if p.array else "float" for p in k.param_layout)
            self.line(f"kernel, {names} = cudaq.make_kernel({types})")
        else:
            self.line("kernel = cudaq.make_kernel()")
        if k.qubit_count:
            self.line(f"q = kernel.qalloc({k.qubit_count})")
        self.emit_ops(k.body)
        self.line("return kernel")
        self.indent -= 1
        self.line()
        self.line()
        self.line('if __name__ == "__main__":')
        self.indent += 1
        self.line("import cudaq")
        self.line()
        sample_args = ["build_kernel()"]
        for p in k.param_layout:
            sample_args.append(f"[0.0] * {p.count}" if p.array else "0.0")
        sample_args.append("shots_count=1000")
        self.line(f"counts = cudaq.sample({', '.join(sample_args)})")
        self.line("print(counts)")
        self.indent -= 1
        return "\n".join(self.lines) + "\n"

    def emit_ops(self, ops: list) -> None:
        for op in ops:
            if isinstance(op, Gate):
                self.emit_gate(op)
            elif isinstance(op, Measure):
                name = self.measure_name(op)
                self.line(f"{name} = kernel.mz(q[{op.qubit}])")
                self.bit_local[op.bit] = name
            elif isinstance(op, Reset):
                self.line(f"kernel.reset(q[{op.qubit}])")
            elif isinstance(op, Nop):
                pass
            elif isinstance(op, CondBlock):
                self.emit_cond(op)
            else:
                raise UnsupportedOp(f"no cudaq-builder rendering for {type(op).__name__}")

    def emit_cond(self, op: CondBlock) -> None:
        if _subtree_measures([op]):
            raise UnsupportedForTarget(
                "cudaq-builder cannot render measurements inside a conditional body; "
                "use the cudaq-cpp target"
            )
        pred = op.predicate
        cond_id = self.cond_count
        self.cond_count += 1
        if pred.index is None:
            subject = f"cval{cond_id}"
            self.line(f"{subject} = {self.pack_expr(pred)}")
        else:
            subject = self.bit_local[(pred.register, pred.index)]

        def pred_text(comparator: str) -> str:
            if comparator == "truthy":
                return subject if pred.index is not None else f"{subject} != 0"
            return f"{subject} {comparator} {pred.rhs}"

        then_name = f"cond_{cond_id}_then"
        self.line()
        self.line(f"def {then_name}():")
        self.indent += 1
        if op.then_body:
            self.emit_ops(op.then_body)
        else:
            self.line("pass")
        self.indent -= 1
        self.line()
        self.line(f"kernel.c_if({pred_text(pred.comparator)}, {then_name})")
        if op.else_body:
            else_name = f"cond_{cond_id}_else"
            negated = (
                f"{subject} == 0"
                if pred.comparator == "truthy"
                else pred_text(_NEGATE_CMP[pred.comparator])
            )
            self.line()
            self.line(f"def {else_name}():")
            self.indent += 1
            self.emit_ops(op.else_body)
            self.indent -= 1
            self.line()
            self.line(f"kernel.c_if({negated}, {else_name})")

    def emit_gate(self, op: Gate) -> None:
        name = _GATE_NAME.get(op.base, op.base)
        angles = [_angle_text(a, self.kernel) for a in op.angles]
        targets = [f"q[{t}]" for t in op.targets]
        if not op.controls and not op.adjoint:
            self.line(f"kernel.{name}({', '.join(angles + targets)})")
            return
        if (
            len(op.controls) == 1
            and op.controls[0][1] == POS
            and not op.adjoint
            and op.base in _BUILDER_CTRL_SUGAR
        ):
            ctrl = f"q[{op.controls[0][0]}]"
            self.line(f"kernel.c{name}({', '.join(angles + [ctrl] + targets)})")
            return
        self.emit_functional(op, name, angles, targets)

    def emit_functional(self, op: Gate, name: str, angles: list[str], targets: list[str]) -> None:
        """Modifier route: encapsulate the gate in a sub-kernel and attach it
        with kernel.control / kernel.adjoint; negative controls are realized
        by an X sandwich on the control qubit."""
        sub = self._make_sub(name, len(angles), len(targets))
        args = ", ".join(angles + targets)
        if op.adjoint and op.controls:
            wrapper = self._make_wrapper(sub, len(angles), len(targets))
            self._apply_control(op, wrapper, args)
        elif op.adjoint:
            self.line(f"kernel.adjoint({sub}, {args})")
        else:
            self._apply_control(op, sub, args)

    def _make_sub(self, name: str, n_angles: int, n_targets: int) -> str:
        sid = self.sub_count
        self.sub_count += 1
        sub = f"sub_{sid}"
        arg_names = [f"{sub}_a{i}" for i in range(n_angles)] + [
            f"{sub}_q{j}" for j in range(n_targets)
        ]
        types = ["float"] * n_angles + ["cudaq.qubit"] * n_targets
        self.line(f"{sub}, {', '.join(arg_names)} = cudaq.make_kernel({', '.join(types)})")
        self.line(f"{sub}.{name}({', '.join(arg_names)})")
        return sub

    def _make_wrapper(self, inner: str, n_angles: int, n_targets: int) -> str:
        sid = self.sub_count
        self.sub_count += 1
        sub = f"sub_{sid}"
        arg_names = [f"{sub}_a{i}" for i in range(n_angles)] + [
            f"{sub}_q{j}" for j in range(n_targets)
        ]
        types = ["float"] * n_angles + ["cudaq.qubit"] * n_targets
        self.line(f"{sub}, {', '.join(arg_names)} = cudaq.make_kernel({', '.join(types)})")
        self.line(f"{sub}.adjoint({inner}, {', '.join(arg_names)})")
        return sub

    def _apply_control(self, op: Gate, sub: str, args: str) -> None:
        neg = [q for q, pol in op.controls if pol == NEG]
        for q in neg:
            self.line(f"kernel.x(q[{q}])")
        ctrls = [f"q[{q}]" for q, _ in op.controls]
        ctrl_expr = ctrls[0] if len(ctrls) == 1 else f"[{', '.join(ctrls)}]"
        self.line(f"kernel.control({sub}, {ctrl_expr}, {args})")
        for q in reversed(neg):
            self.line(f"kernel.x(q[{q}])")


def emit(kernel: Kernel, target: str) -> EmittedSource:
    """Render a kernel as CUDA-Q source text for the given target."""
    _check_target(target)
    if target == "cudaq-cpp":
        text = _CppEmitter(kernel).emit()
    else:
        text = _BuilderEmitter(kernel).emit()
    signature = [(p.name, p.count) for p in kernel.param_layout]
    return EmittedSource(target=target, text=text, param_signature=signature)


def golden_check(emitted: EmittedSource, golden_file: str, record: bool = False) -> tuple[bool, str]:
    """Byte-exact comparison against a golden file.

    Returns (passed, detail); in record mode a missing or differing file is
    rewritten and the check passes.
    """
    data = emitted.text.encode()
    if not os.path.exists(golden_file):
        if record:
            os.makedirs(os.path.dirname(golden_file) or ".", exist_ok=True)
            with open(golden_file, "wb") as fh:
                fh.write(data)
            return True, "recorded"
        raise MissingGolden(f"golden file {golden_file} does not exist (run in record mode)")
    with open(golden_file, "rb") as fh:
        expected = fh.read()
    if expected == data:
        return True, "identical"
    if record:
        with open(golden_file, "wb") as fh:
            fh.write(data)
        return True, "re-recorded"
    exp_lines = expected.decode(errors="replace").splitlines()
    got_lines = emitted.text.splitlines()
    for i, (exp, got) in enumerate(zip(exp_lines, got_lines), start=1):
        if exp != got:
            return False, f"first difference at line {i}: expected {exp!r}, got {got!r}"
    longer = max(len(exp_lines), len(got_lines))
    return False, f"first difference at line {min(len(exp_lines), len(got_lines)) + 1} of {longer}"
