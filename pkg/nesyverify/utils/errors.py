"""Centralized error handling with actionable messages.

Every failure raised by the verifier is a ``NesyError``. MCP tools turn
exceptions into text with ``handle_error``; the CLI maps them to exit codes
with ``exit_code_for``.
"""
from typing import Optional


class NesyError(Exception):
    """Base class for verifier errors."""


class FormulaSyntaxError(NesyError, ValueError):
    """Formula text does not match the expression grammar."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class DimacsError(NesyError, ValueError):
    """Malformed DIMACS CNF input."""


class EnumerationGuardError(NesyError):
    """An exhaustive enumeration would exceed its configured guard."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: {size} exceeds the limit of {limit}")
        self.size = size
        self.limit = limit


class PartitionError(NesyError, ValueError):
    """Existential and counting variables do not partition the formula's variables."""


class CompileError(NesyError, ValueError):
    """Knowledge compilation received invalid input."""


class CircuitError(NesyError, ValueError):
    """An arithmetic circuit violates its structural invariants."""


class CircuitFormatError(CircuitError):
    """Circuit text file could not be parsed."""


class ShapeError(NesyError, ValueError):
    """Tensor or parameter shapes do not chain."""


class TrainingError(NesyError, ValueError):
    """The network cannot be trained by the dense trainer."""


class WeightFileError(NesyError, ValueError):
    """Malformed or inconsistent weight file."""

    def __init__(self, message: str, offset: Optional[int] = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class IdxFormatError(NesyError, ValueError):
    """Malformed IDX image/label file."""


class ManifestError(NesyError, ValueError):
    """System manifest is missing, malformed or inconsistent."""


class BindingError(NesyError, ValueError):
    """Network outputs do not bind consistently to circuit leaves."""


class QueryError(NesyError, ValueError):
    """Verification query is inconsistent with the system."""


def exit_code_for(e: Exception) -> int:
    """CLI exit code for an exception: 2 for usage and input errors, 1 otherwise."""
    if isinstance(e, (FileNotFoundError, IsADirectoryError, PermissionError)):
        return 2
    if isinstance(e, (ValueError, EnumerationGuardError)):
        return 2
    return 1


def handle_error(e: Exception) -> str:
    """Return a human-readable, actionable error message."""
    if isinstance(e, FileNotFoundError):
        name = e.filename or str(e)
        return f"Error: no such file: {name}"

    if isinstance(e, FormulaSyntaxError):
        return (
            f"Error: formula syntax error: {e}. Operators are ! & | -> <-> "
            "with parentheses; identifiers match [A-Za-z_][A-Za-z0-9_]*."
        )

    if isinstance(e, DimacsError):
        return f"Error: invalid DIMACS CNF: {e}. Expected a 'p cnf V C' header and 0-terminated clauses."

    if isinstance(e, EnumerationGuardError):
        return (
            f"Error: {e}. Reduce the instance size or raise the guard "
            "(NESY_BRUTE_MAX_VARS, NESY_EMAJSAT_MAX_VARS, NESY_VERTEX_MAX_LEAVES)."
        )

    if isinstance(e, CircuitFormatError):
        return f"Error: cannot parse circuit file: {e}"

    if isinstance(e, ShapeError):
        return f"Error: shape mismatch: {e}. Check the input shape declared for the network."

    if isinstance(e, (ManifestError, BindingError)):
        return f"Error: invalid system manifest: {e}"

    if isinstance(e, NesyError):
        return f"Error: {e}"

    return f"Error: {type(e).__name__}: {str(e)}"
