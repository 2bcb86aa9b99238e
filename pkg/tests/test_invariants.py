import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binorbit.errors import InconsistencyError
from binorbit.forms import BinaryForm, MultiplicityProfile, factorize
from binorbit.invariants import (
    INFINITE,
    BoundaryOrbit,
    assemble_report,
    boundary,
    curve_or_surface_degree,
    orbit_dimension,
    predegree,
    premultiplicity_dfold,
    premultiplicity_pair,
)
from binorbit.parse import parse_form

from conftest import generic_form

profiles = st.lists(st.integers(1, 6), min_size=1, max_size=7).map(lambda m: MultiplicityProfile(tuple(m)))


@pytest.mark.parametrize("ms, expected", [
    ((1, 1, 1), 6),
    ((1, 1, 1, 1), 24),
    ((2, 1, 1), 12),
    ((1,) * 12, 1320),
    ((3, 2), 0),
])
def test_predegree_values(ms, expected):
    assert predegree(MultiplicityProfile(ms)) == expected


@given(profiles)
@settings(max_examples=100, deadline=None)
def test_predegree_counts_ordered_triples(P):
    m = P.multiplicities
    # e1^3 expands into ordered triples; subtract those with a repeated index.
    assert predegree(P) == sum(
        m[i] * m[j] * m[k]
        for i in range(P.s) for j in range(P.s) for k in range(P.s)
        if len({i, j, k}) == 3
    )


@given(profiles, st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_scaling_law(P, m):
    assert predegree(P.scaled(m)) == m ** 3 * predegree(P)


def test_boundary_and_dimension():
    P = MultiplicityProfile((3, 2, 1))
    assert orbit_dimension(P) == 3
    assert [str(O) for O in boundary(P)] == ["DFold", "Pair(1,5)", "Pair(2,4)", "Pair(3,3)"]
    assert boundary(MultiplicityProfile((4,))) == []
    assert BoundaryOrbit.pair(4, 6) == BoundaryOrbit.pair(2, 6)


@pytest.mark.parametrize("r, d", [(1, 5), (2, 5), (3, 6), (1, 2), (7, 30)])
def test_surface_degrees(r, d):
    P = MultiplicityProfile((r, d - r))
    expected = r * r if 2 * r == d else 2 * r * (d - r)
    assert curve_or_surface_degree(P) == expected


def test_curve_degree():
    assert curve_or_surface_degree(MultiplicityProfile((7,))) == 7


def test_three_points():
    rep = assemble_report(parse_form("x*y*(x+y)"), 6)
    assert (rep.dimension, rep.predegree, rep.degree, rep.smooth) == (3, 6, 1, True)


def test_surface_report():
    rep = assemble_report(parse_form("x^3*y^2"), INFINITE)
    assert rep.degree == 12 and rep.dimension == 2
    assert [(str(e.orbit), e.multiplicity) for e in rep.boundary] == [("DFold", 2)]
    assert assemble_report(parse_form("x^2*y^2"), INFINITE).smooth


def test_generic_quartic_frozen():
    rep = assemble_report(parse_form("x*(x-y)*(x-3*y)*(x-7*y)"), 4)
    assert rep.degree == 6
    assert [(e.premultiplicity, e.multiplicity) for e in rep.boundary] == [(12, 3), (8, 2)]


@pytest.mark.parametrize("d", [5, 6, 7, 8])
def test_generic_multiplicities(d):
    F = generic_form(d)
    assert premultiplicity_dfold(F) == 6 * (d - 2)
    assert premultiplicity_pair(F, BoundaryOrbit.pair(1, d)) == 2 * d


def test_wrong_stabilizer_is_inconsistent():
    with pytest.raises(InconsistencyError):
        assemble_report(parse_form("x*y*(x+y)"), 4)


def test_premultiplicity_without_stabilizer():
    rep = assemble_report(generic_form(5), None)
    assert rep.degree is None and rep.smooth is None
    assert [e.premultiplicity for e in rep.boundary] == [18, 10]


@given(st.lists(st.integers(-6, 6), min_size=3, max_size=5, unique=True),
       st.lists(st.integers(1, 3), min_size=5, max_size=5))
@settings(max_examples=30, deadline=None)
def test_pair_premultiplicity_lower_bound(roots, mults):
    # Each point contributes at least 2 (or 4 on the balanced orbit).
    F = BinaryForm.from_roots(roots, mults[: len(roots)])
    P = factorize(F).profile()
    rep = assemble_report(F, None)
    for e in rep.boundary:
        O = e.orbit
        if O.kind == "pair":
            n = sum(1 for m in P.multiplicities if m in (O.r_low, O.r_high))
            assert e.premultiplicity >= n * (4 if O.r_low == O.r_high else 2)
