"""
Exception hierarchy for pmxml

Every layer raises subclasses of PmxmlError. Errors keep their structured
fields so callers (and the CLI) can report them without parsing messages.
"""

from typing import Any, Optional, Sequence


class PmxmlError(Exception):
    """Base class for all pmxml errors"""
    pass


# ============================================================================
# Infoset
# ============================================================================


class WellFormednessError(PmxmlError):
    """Raised when input bytes are not well-formed XML"""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.reason = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


# ============================================================================
# Schema
# ============================================================================


class SchemaInternalError(PmxmlError):
    """Raised when a pattern graph is malformed (e.g. a dangling reference)"""
    pass


class SchemaViolationError(PmxmlError):
    """Raised by decode when the tree does not conform to the grammar"""

    def __init__(self, report: Any):
        self.report = report
        first = report.violations[0] if report.violations else None
        detail = f"{first.path}: {first.rule}: {first.message}" if first else "invalid"
        count = len(report.violations)
        super().__init__(f"document is not schema-valid ({count} violation(s)); first: {detail}")


# ============================================================================
# Model
# ============================================================================


class DecodeError(PmxmlError):
    """Raised when a tree has a structure decode cannot map"""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class ModelError(PmxmlError):
    """Raised when decoded content breaks a model invariant"""
    pass


class DuplicateIdError(ModelError):
    """Raised when two tuples in one value tree carry the same id"""

    def __init__(self, id: int, path1: Sequence[int], path2: Sequence[int]):
        self.id = id
        self.path1 = tuple(path1)
        self.path2 = tuple(path2)
        super().__init__(f"duplicate id {id} at paths {list(self.path1)} and {list(self.path2)}")


class DanglingReferenceError(ModelError):
    """Raised when a reference names an id absent from its value tree"""

    def __init__(self, id: int):
        self.id = id
        super().__init__(f"reference to undefined id {id}")


class MissingIdError(ModelError):
    """Raised when resolving a reference that carries no id"""

    def __init__(self) -> None:
        super().__init__("reference has no id attribute")


class SparseIndexError(ModelError):
    """Raised for duplicate or unsorted sparse indices"""

    def __init__(self, index: int, previous: int):
        self.index = index
        self.previous = previous
        kind = "duplicate" if index == previous else "unsorted"
        super().__init__(f"{kind} sparse index {index} after {previous}")


class AttachmentNameError(ModelError):
    """Raised when two attachments of one object share a name"""

    def __init__(self, name: str):
        self.name = name
        super().__init__(f"attachment name '{name}' is not unique")


class ShapeMismatchError(ModelError):
    """Raised when a matrix's cols attribute disagrees with its dense rows"""
    pass


# ============================================================================
# Codec (dense/sparse conversion)
# ============================================================================


class CodecError(PmxmlError):
    """Base class for container conversion errors"""
    pass


class MissingDimensionError(CodecError):
    """Raised when a sparse container has no derivable length"""

    def __init__(self, what: str = "sparse vector"):
        super().__init__(f"{what} has no dimension and none was supplied")


class IndexOutOfRangeError(CodecError):
    """Raised when a sparse index does not fit the container length"""

    def __init__(self, index: int, length: int):
        self.index = index
        self.length = length
        super().__init__(f"index {index} out of range for length {length}")


class RaggedRowsError(CodecError):
    """Raised when dense rows disagree on their width"""

    def __init__(self, widths: Sequence[int]):
        self.widths = tuple(widths)
        super().__init__(f"rows have differing widths {sorted(set(self.widths))}")


# ============================================================================
# Semantics
# ============================================================================


class SemanticsError(PmxmlError):
    """Base class for errors of the arithmetic layer"""
    pass


class RationalParseError(SemanticsError, ValueError):
    """Raised when a token is not a rational number"""

    def __init__(self, token: str):
        self.token = token
        super().__init__(f"not a rational number: {token!r}")


class ZeroDenominatorError(SemanticsError, ValueError):
    """Raised when a rational token has denominator zero"""

    def __init__(self, token: str):
        self.token = token
        super().__init__(f"zero denominator in {token!r}")


class PointAtInfinityError(SemanticsError):
    """Raised when dehomogenizing a point whose first coordinate is zero"""

    def __init__(self) -> None:
        super().__init__("homogenizing coordinate is zero (point at infinity)")


class DimensionMismatchError(SemanticsError):
    """Raised when paired vectors have different lengths"""

    def __init__(self, left: int, right: int):
        self.left = left
        self.right = right
        super().__init__(f"dimension mismatch: {left} vs {right}")


class ArityError(SemanticsError):
    """Raised when a tuple has the wrong number of entries"""

    def __init__(self, expected: int, actual: int):
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected {expected} entries, got {actual}")


class NegativeRadicandError(SemanticsError):
    """Raised when a quadratic extension has a negative radicand"""

    def __init__(self, c: Any):
        self.c = c
        super().__init__(f"radicand must be nonnegative, got {c}")


class ShapeError(SemanticsError):
    """Raised when a value does not have the nesting an interpreter expects"""

    def __init__(self, message: str, detail: Optional[str] = None):
        self.detail = detail
        super().__init__(message if detail is None else f"{message} ({detail})")
