"""Exception hierarchy shared across the compiler pipeline and simulator."""

from __future__ import annotations


class Qasm2CudaqError(Exception):
    """Base class for every error raised by this package."""


class LexError(Qasm2CudaqError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"lex error at {line}:{col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class ParseError(Qasm2CudaqError):
    def __init__(self, line: int, col: int, expected: str, found: str):
        super().__init__(f"parse error at {line}:{col}: expected {expected}, found {found!r}")
        self.line = line
        self.col = col
        self.expected = expected
        self.found = found


class SemaError(Qasm2CudaqError):
    """Semantic analysis failure; `span` is the (line, col) of the offending node."""

    def __init__(self, message: str, span: tuple[int, int] = (0, 0)):
        super().__init__(f"semantic error at {span[0]}:{span[1]}: {message}")
        self.message = message
        self.span = span


class UndefinedName(SemaError):
    pass


class Redefinition(SemaError):
    pass


class ArityMismatch(SemaError):
    pass


class IndexOutOfRange(SemaError):
    pass


class NonConstLoopBound(SemaError):
    pass


class RecursiveGateDef(SemaError):
    pass


class DuplicateQubitArg(SemaError):
    pass


class NotConst(SemaError):
    pass


class DivByZero(SemaError):
    pass


class ProgramTooLarge(SemaError):
    pass


class LowerError(Qasm2CudaqError):
    pass


class ModifierError(Qasm2CudaqError):
    pass


class SimError(Qasm2CudaqError):
    pass


class DynamicCircuit(SimError):
    pass


class DegenerateNorm(SimError):
    pass


class BadPauliString(SimError):
    pass


class DimensionMismatch(SimError):
    pass


class EmitError(Qasm2CudaqError):
    pass


class UnsupportedOp(EmitError):
    """A canonical op with no rendering in the target; unreachable for valid IR."""


class UnsupportedForTarget(EmitError):
    """A construct the target's emission grammar deliberately does not cover."""


class MissingGolden(EmitError):
    pass


class TooLarge(Qasm2CudaqError):
    pass
