"""Orbit closures of binary forms under PGL(2).

Exact predegree, degree, boundary and multiplicity computations for the
closure of the orbit of a d-tuple of points on the projective line, with
numeric stabilizers and independent oracles.
"""

__version__ = "0.1.0"

from .algebra import QQ, ExtensionField  # noqa: E402
from .errors import (  # noqa: E402
    BinOrbitError,
    DomainError,
    FieldError,
    InconsistencyError,
    NumericError,
    ParseError,
)
from .forms import BinaryForm, MultiplicityProfile, factorize, hessian, profile  # noqa: E402
from .invariants import OrbitReport, assemble_report, predegree  # noqa: E402
from .parse import parse_form, parse_partition  # noqa: E402

__all__ = [
    "BinOrbitError",
    "BinaryForm",
    "DomainError",
    "ExtensionField",
    "FieldError",
    "InconsistencyError",
    "MultiplicityProfile",
    "NumericError",
    "OrbitReport",
    "ParseError",
    "QQ",
    "assemble_report",
    "factorize",
    "hessian",
    "parse_form",
    "parse_partition",
    "predegree",
    "profile",
]
