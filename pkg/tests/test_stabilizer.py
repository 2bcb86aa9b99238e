import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binorbit.classification import SMOOTH_FORMS, GroupId, composite_form, special_form
from binorbit.errors import NumericError
from binorbit.forms import BinaryForm, compose
from binorbit.parse import parse_form
from binorbit.stabilizer import (
    INF,
    MobiusTransform,
    chordal,
    complex_roots,
    find_equivalence,
    mobius_through,
    stabilizer,
)


def test_corpus_orders(corpus):
    for label, F, expected in corpus:
        if expected is not None:
            assert stabilizer(F).order == expected, label


def test_group_closure():
    res = stabilizer(parse_form("x^5*y - x*y^5"))
    els = res.elements
    for g in els:
        for h in els:
            assert min((g @ h).distance(k) for k in els) < 1e-6
    assert sum(1 for g in els if g.is_identity(1e-6)) == 1


def test_mobius_through_and_inverse():
    M = mobius_through(0, 1, INF, 2, 3j, -1)
    assert abs(M(0) - 2) < 1e-12 and abs(M(1) - 3j) < 1e-12 and abs(M(INF) + 1) < 1e-12
    assert (M @ M.inverse()).is_identity()


def test_chordal_metric():
    assert chordal(0, INF) == pytest.approx(1.0)
    assert chordal(1, 1) == 0


def test_singular_matrix_rejected():
    with pytest.raises(NumericError):
        MobiusTransform([[1, 2], [2, 4]])


def test_roots_include_infinity():
    roots = complex_roots(parse_form("x^2*y^3*(x-y)"))
    assert sorted(m for _, m in roots) == [1, 2, 3]
    assert any(z == INF for z, _ in roots)


def test_loose_tolerance_is_rejected():
    F = parse_form("x*(x-y)*(x-3*y)*(x-7*y)")
    with pytest.raises(NumericError):
        stabilizer(F, tol=1e-2)


def test_fewer_than_three_points():
    with pytest.raises(ValueError):
        stabilizer(parse_form("x^2*y"))


def test_equivalence_of_smooth_forms():
    # The A5 special A orbit and the catalogued icosahedral form coincide.
    assert find_equivalence(special_form(GroupId("A5"), "A"), SMOOTH_FORMS[3][0]) is not None
    # xy(x^2 - y^2) (j=1728) is not equivalent to x^4 + xy^3 (j=0).
    assert find_equivalence(parse_form("x*y*(x^2-y^2)"), parse_form("x^4+x*y^3")) is None


@given(st.tuples(*[st.integers(-3, 3)] * 4))
@settings(max_examples=25, deadline=None)
def test_stabilizer_is_invariant(M):
    a, b, c, d = M
    if a * d - b * c == 0:
        return
    F = parse_form("x*(x-y)*(x-3*y)*(x-7*y)*(x+2*y)")
    G = compose(F, ((a, b), (c, d)))
    assert stabilizer(G).order == 1
    assert find_equivalence(F, G) is not None


@pytest.mark.parametrize("G, ex, order", [
    (GroupId("D", 5), (1, 1, 0), 10),
    (GroupId("D", 3), (0, 1, 0), 6),
    (GroupId("S4"), (0, 1, 0), 24),
    (GroupId("A5"), (0, 0, 1), 60),
])
def test_special_orbits(G, ex, order):
    assert stabilizer(composite_form(G, *ex)).order == order


def test_extension_embedding():
    F = parse_form("x^4 + 2*t*x^2*y^2 + y^4", "t^2+3")
    pts = [z for z, _ in complex_roots(F)]
    vals = [z ** 4 + 2 * cmath.sqrt(-3) * z ** 2 + 1 for z in pts]
    assert np.max(np.abs(vals)) < 1e-9
