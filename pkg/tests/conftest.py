"""Shared corpus and the acceptance summary printed at the end of a run."""
from __future__ import annotations

import pytest

from binorbit.classification import sqrt_minus_3_field
from binorbit.forms import BinaryForm
from binorbit.parse import parse_form

# (label, text, minpoly, stabilizer order or None for s <= 2)
CORPUS = [
    ("three points", "x*y*(x+y)", None, 6),
    ("j=0 quartic", "x^4 + x*y^3", None, 12),
    ("j=1728 quartic", "x*y*(x-y)*(x+y)", None, 8),
    ("generic quartic", "x*(x-y)*(x-3*y)*(x-7*y)", None, 4),
    ("octahedron", "x^5*y - x*y^5", None, 24),
    ("icosahedron", "x^11*y + 11*x^6*y^6 - x*y^11", None, 60),
    ("tetrahedron", "x^4 + 2*t*x^2*y^2 + y^4", "t^2+3", 12),
    ("double point", "x^2*y*(x-y)", None, 2),
    ("generic quintic", "x*(x-y)*(x+2*y)*(x-3*y)*(2*x+5*y)", None, 1),
    ("mixed", "x^3*y^2*(x+y)*(x-2*y)", None, 1),
    ("three-fold", "x^2*y^2*(x+y)^2", None, 6),
    ("surface", "x^3*y^2", None, None),
    ("balanced surface", "x^2*y^2", None, None),
    ("power", "(2*x+3*y)^4", None, None),
    ("cubic field", "x^3 - t*x*y^2 + y^3", "t^3-2", 6),
    ("cubic field quartic", "x^4 - t*x^3*y + y^4", "t^3-2", 4),
]


def corpus_forms():
    return [(label, parse_form(text, minpoly), stab) for label, text, minpoly, stab in CORPUS]


@pytest.fixture(scope="session")
def corpus():
    return corpus_forms()


@pytest.fixture(scope="session")
def K3():
    return sqrt_minus_3_field()


def generic_form(d: int) -> BinaryForm:
    """A fixed simple d-tuple with trivial stabilizer for d >= 5."""
    roots = [0, 1, 3, 7, -2, 11, -5, 19, 4, -9, 23, 13][:d]
    return BinaryForm.from_roots(roots)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, title = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}")
