"""Exception types shared across the package.

Each carries a short machine-readable ``code`` used by the CLI.
"""


class BinOrbitError(Exception):
    code = "ERROR"


class ParseError(BinOrbitError, ValueError):
    code = "PARSE"


class FieldError(BinOrbitError, ValueError):
    """Missing or unusable coefficient field (e.g. a required square root)."""

    code = "FIELD"


class NumericError(BinOrbitError, ArithmeticError):
    """Floating-point stage failed or could not certify its answer."""

    code = "NUMERIC"


class InconsistencyError(BinOrbitError, RuntimeError):
    """An exact identity that must hold did not (wrong stabilizer, bug, ...)."""

    code = "INCONSISTENT"


class DomainError(BinOrbitError, ValueError):
    """Input outside the domain of an operation (cyclic group, too few points, ...)."""

    code = "DOMAIN"
