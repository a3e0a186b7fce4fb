"""Exception hierarchy shared across the package.

Validation findings are data (see taxunify.model.ValidationOutcome); exceptions
are reserved for unusable inputs: unparseable files, broken references, and
metric preconditions that would otherwise divide by zero.
"""

from __future__ import annotations


class TaxunifyError(Exception):
    """Base class for all package errors."""


class ParseError(TaxunifyError):
    """A file or document could not be parsed into its declared shape."""

    def __init__(self, message: str, *, path: str | None = None,
                 line: int | None = None, column: int | None = None):
        location = ""
        if path is not None:
            location = f"{path}: "
        if line is not None:
            location += f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        super().__init__(f"{location}{message}")
        self.path = path
        self.line = line
        self.column = column


class SchemaVersionError(ParseError):
    """Document declares a schemaVersion this code does not speak."""


class UnknownFieldError(ParseError):
    """Strict loading refuses fields outside the documented schema."""


class DuplicateDoiError(TaxunifyError):
    """Two catalog entries normalize to the same DOI."""

    def __init__(self, doi: str, first: str | None = None, second: str | None = None):
        detail = f" (entries {first!r} and {second!r})" if first is not None else ""
        super().__init__(f"duplicate DOI after normalization: {doi!r}{detail}")
        self.doi = doi
        self.first = first
        self.second = second


class ReferentialViolationError(TaxunifyError):
    """Cross-file references do not resolve; carries every dangling id."""

    def __init__(self, dangling: list[str]):
        self.dangling = sorted(dangling)
        super().__init__("unresolved references: " + ", ".join(self.dangling))


class MetricDomainError(TaxunifyError):
    """A metric's denominator would be zero on this input."""


class EmptyPreviousSetError(MetricDomainError):
    """No previous schemes: the per-scheme sums are over an empty set."""


class EmptySchemeError(MetricDomainError):
    """A previous scheme has no nodes."""

    def __init__(self, scheme_id: str):
        super().__init__(f"previous scheme {scheme_id!r} has no nodes")
        self.scheme_id = scheme_id


class EmptyUnifiedError(MetricDomainError):
    """The unified scheme has no nodes."""


class InsufficientDataError(TaxunifyError):
    """No unit carries two or more labels; agreement is undefined."""


class UnknownUnitError(TaxunifyError):
    """A scored unit is missing from the gold standard."""

    def __init__(self, unit_ids: list[str]):
        self.unit_ids = sorted(unit_ids)
        super().__init__("units not in gold standard: " + ", ".join(self.unit_ids))


class LabelOutsideAlphabetError(TaxunifyError):
    """A label is not part of the agreed category set."""

    def __init__(self, label: str, where: str):
        super().__init__(f"label {label!r} in {where} is outside the category set")
        self.label = label
        self.where = where


class OutOfRangeItemError(TaxunifyError):
    """A survey item score is outside the 1..5 Likert range."""

    def __init__(self, index: int, value: object):
        super().__init__(f"item {index} is {value!r}, expected an integer in 1..5")
        self.index = index
        self.value = value
