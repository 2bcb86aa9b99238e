import pytest

from binorbit.classification import (
    SMOOTH_FORMS,
    GroupId,
    abc_multiplicities,
    catalog_sweep,
    composite_form,
    is_smooth,
    is_smooth_codim1,
    local_multiplicities,
    reduce_by_gcd,
    special_catalog,
    special_form,
    sqrt_minus_3_field,
)
from binorbit.errors import DomainError, FieldError
from binorbit.forms import BinaryForm
from binorbit.parse import parse_form

from conftest import generic_form


def test_group_parsing():
    assert GroupId.parse("Dn", 4) == GroupId("D", 4)
    assert GroupId.parse("d5") == GroupId("D", 5)
    assert GroupId.parse("a5").order == 60
    assert GroupId("S4").local_orders == (4, 3, 2)
    for bad in (("Dn", None), ("Q8", None), ("D5", 4)):
        with pytest.raises(DomainError):
            GroupId.parse(*bad)


@pytest.mark.parametrize("group, which, text", [
    (GroupId("S4"), "A", "x^5*y - x*y^5"),
    (GroupId("S4"), "B", "x^8 + 14*x^4*y^4 + y^8"),
    (GroupId("A5"), "A", "x^11*y + 11*x^6*y^6 - x*y^11"),
    (GroupId("D", 4), "A", "x*y"),
    (GroupId("D", 4), "B", "x^4 + y^4"),
    (GroupId("D", 4), "C", "x^4 - y^4"),
])
def test_special_forms(group, which, text):
    assert special_form(group, which) == parse_form(text)


def test_a5_c_form_leading_terms():
    C = special_form(GroupId("A5"), "C")
    assert str(C).startswith("x^30 + 522*x^25*y^5 - 10005*x^20*y^10")


def test_a4_needs_sqrt_minus_3():
    with pytest.raises(FieldError, match=r"t\^2\+3"):
        special_form(GroupId("A4"), "A", BinaryForm((1, 0, 1)).field)
    K = sqrt_minus_3_field()
    A = special_form(GroupId("A4"), "A", K)
    assert A == parse_form("x^4 + 2*t*x^2*y^2 + y^4", "t^2+3")


def test_cyclic_has_no_special_triple():
    with pytest.raises(DomainError):
        special_form(GroupId("C", 3), "A")
    with pytest.raises(DomainError):
        abc_multiplicities(GroupId("C", 3), 1, 1, 1)


@pytest.mark.parametrize("text, g, m", [
    ("(x^3+y^3)^2", "x^3 + y^3", 2),
    ("x^4 + x*y^3", "x^4 + x*y^3", 1),
    ("x^6*y^3*(x+y)^3", "x^2*y*(x+y)", 3),
])
def test_reduce_by_gcd(text, g, m):
    G, k = reduce_by_gcd(parse_form(text))
    assert k == m
    assert G.proportional(parse_form(g))


def test_smoothness_examples():
    assert is_smooth(parse_form("x*y*(x+y)"))
    assert is_smooth(parse_form("x^5*y - x*y^5"), stab=24)
    assert is_smooth(parse_form("x^11*y + 11*x^6*y^6 - x*y^11"))
    assert not is_smooth(generic_form(5), stab=1)
    assert is_smooth(parse_form("x^2*y^2"))
    assert not is_smooth(parse_form("x^3*y"))
    assert is_smooth(parse_form("x^5"))
    # Smoothness is read off after removing a common power.
    assert is_smooth(parse_form("(x^3+y^3)^2"))


def test_codim1():
    assert is_smooth_codim1(special_form(GroupId("A5"), "B"))
    assert not is_smooth_codim1(generic_form(6), stab=1)
    assert not is_smooth_codim1(composite_form(GroupId("D", 5), 1, 1, 0))
    with pytest.raises(DomainError):
        is_smooth_codim1(parse_form("x^2*y"))


@pytest.mark.parametrize("G, ex, values", [
    (GroupId("S4"), (5852, 561, 19656), (1, 1, 3)),
    (GroupId("S4"), (2 * 5852, 2 * 561, 2 * 19656), (1, 1, 3)),
    (GroupId("A5"), (26864005, 431607, 43733250), (1, 1, 3)),
    (GroupId("D", 5), (1, 1, 2), (1, 1, 1)),
    (GroupId("D", 4), (1, 2, 3), (1, 1, 1)),
    (GroupId("D", 4), (1, 2, 2), (2, 1, 1)),
    (GroupId("S4"), (14, 1, 0), (2, 1, None)),
    (GroupId("S4"), (7, 20, 0), (1, 2, None)),
    (GroupId("A5"), (228, 11, 0), (2, 1, None)),
    (GroupId("A4"), (8, 1, 0), (2, 1, None)),
    (GroupId("A4"), (1, 1, 14), (1, 1, 4)),
])
def test_roster_values(G, ex, values):
    assert abc_multiplicities(G, *ex).values == values


def test_a4_warning_only_when_a_equals_b():
    for ex in [(1, 1, 0), (2, 2, 1), (1, 1, 5)]:
        r = abc_multiplicities(GroupId("A4"), *ex)
        assert any("S_4" in w for w in r.warnings) and r.effective is not None
    for ex in [(1, 2, 0), (0, 1, 1), (3, 1, 2)]:
        r = abc_multiplicities(GroupId("A4"), *ex)
        assert not r.warnings and r.effective is None


def test_dn_conditions():
    r = abc_multiplicities(GroupId("D", 6), 0, 1, 1)
    assert r.mult_A is None and r.conditions["A"] == 0


@pytest.mark.parametrize("G, ex", [
    (GroupId("S4"), (5852, 561, 19656)),
    (GroupId("A5"), (26864005, 431607, 43733250)),
    (GroupId("A5"), (1, 2, 3)),
    (GroupId("D", 5), (3, 1, 1)),
    (GroupId("A4"), (1, 1, 14)),
])
def test_local_series_matches_roster(G, ex):
    assert local_multiplicities(G, *ex) == abc_multiplicities(G, *ex).values


def test_catalog_requires_three_points():
    for G, ex in special_catalog(d_max=10):
        dims = G.orbit_degrees
        assert sum(dx for dx, e in zip(dims, ex) if e) >= 3


def test_sweep_small():
    rows = catalog_sweep(exponent_bound=2, groups=[GroupId("D", 3), GroupId("S4")])
    assert rows and all(r.ok for r in rows), [f for r in rows for f in r.failures]


def test_smooth_forms_table():
    assert [n for _, n in SMOOTH_FORMS] == [6, 12, 24, 60]
