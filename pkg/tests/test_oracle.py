import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binorbit.classification import GroupId, composite_form
from binorbit.forms import BinaryForm, MultiplicityProfile
from binorbit.invariants import curve_or_surface_degree, predegree
from binorbit.oracle import (
    numeric_hessian_check,
    oracle_pair_count,
    oracle_predegree,
    oracle_surface_degree,
)
from binorbit.parse import parse_form


@given(st.lists(st.integers(1, 8), min_size=1, max_size=8))
@settings(max_examples=100, deadline=None)
def test_oracle_agrees_with_closed_form(ms):
    P = MultiplicityProfile(tuple(ms))
    assert oracle_predegree(P) == predegree(P)


def test_oracle_five_points():
    assert oracle_predegree(MultiplicityProfile((1,) * 5)) == 60


@pytest.mark.parametrize("r, d", [(1, 3), (2, 4), (3, 8), (15, 30)])
def test_pair_count(r, d):
    P = MultiplicityProfile((r, d - r))
    assert oracle_pair_count(P) == 2 * r * (d - r)
    assert oracle_surface_degree(P) == curve_or_surface_degree(P)


def test_pair_count_domain():
    with pytest.raises(ValueError):
        oracle_pair_count(MultiplicityProfile((1, 1, 1)))


def test_numeric_check_octahedron():
    res = numeric_hessian_check(parse_form("x^5*y - x*y^5"))
    assert res.ok, res.message
    assert res.external_numeric == (1,) * 8


def test_numeric_check_internal_cluster():
    res = numeric_hessian_check(parse_form("x^2*y*(x-y)"))
    assert res.ok, res.message
    assert (2, 2) in res.internal


def test_numeric_check_power():
    res = numeric_hessian_check(parse_form("(2*x + 3*y)^5"))
    assert res and res.identically_zero


def test_numeric_check_extension():
    res = numeric_hessian_check(parse_form("x^4 + 2*t*x^2*y^2 + y^4", "t^2+3"))
    assert res.ok, res.message


def test_numeric_check_multiple_external_zero():
    # D_4 composite whose Hessian has repeated external zeros.
    F = composite_form(GroupId("D", 4), 0, 1, 2)
    res = numeric_hessian_check(F)
    assert res.ok, res.message
    assert res.external_numeric == res.external_exact


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=5, unique=True),
       st.lists(st.integers(1, 3), min_size=5, max_size=5))
@settings(max_examples=15, deadline=None)
def test_numeric_check_random(roots, mults):
    F = BinaryForm.from_roots(roots, mults[: len(roots)])
    res = numeric_hessian_check(F)
    assert res.ok or res.inconclusive, res.message
