"""Exception hierarchy shared by every CMAF module."""

from __future__ import annotations


class CmafError(Exception):
    """Base class for all errors raised by this package."""


class DocumentSyntaxError(CmafError):
    """The input is not well-formed JSON."""

    def __init__(self, message: str, line: int, column: int, source: str | None = None):
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")


class SchemaError(CmafError):
    """A document field is missing, mistyped, or carries an illegal value."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class InvariantError(CmafError):
    """A document parsed but violates a structural invariant.

    ``findings`` holds every error-severity finding, not only the first.
    """

    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__("; ".join(f"{f.path}: {f.message}" for f in self.findings))


class BindingError(CmafError):
    """An assessment cannot be bound to the given catalog."""


class CatalogMismatchError(BindingError):
    pass


class UnknownControlError(BindingError):
    def __init__(self, unknown: list[str]):
        self.unknown = list(unknown)
        super().__init__("unknown control id(s): " + ", ".join(self.unknown))


class TrendError(CmafError):
    """Two score cards cannot be compared."""


class BenchmarkError(CmafError):
    """Records cannot be anonymized, aggregated or correlated."""
