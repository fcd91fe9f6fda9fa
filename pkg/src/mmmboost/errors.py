"""Exception hierarchy shared across the package."""


class MmmBoostError(Exception):
    """Base class for all package errors."""


class ArgumentError(MmmBoostError, ValueError):
    """An argument violates a documented precondition."""


class SchemaError(MmmBoostError):
    """A dataset schema is malformed or inconsistent with the data file."""


class RowError(MmmBoostError):
    """A data row cannot be parsed; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DegenerateDataError(MmmBoostError):
    """The data cannot support the requested computation (e.g. a class is empty)."""


class TrainingError(MmmBoostError):
    """Boosting could not produce a usable ensemble; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class BundleFormatError(MmmBoostError):
    """A result bundle violates its JSON schema; carries the failing JSON path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.json_path = path


class InternalError(MmmBoostError):
    """An invariant the implementation relies on was violated."""
