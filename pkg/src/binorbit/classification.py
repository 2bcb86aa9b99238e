"""Finite subgroups of PGL(2), their special orbits, and smoothness tests.

A non-cyclic finite group ``G`` has three special orbits ``A``, ``B``, ``C``
on the line.  For ``f = A^a B^b C^c`` the contribution of the points of
``A`` to the multiplicity along the orbit of ``x^a y^(d-a)`` is
``d_A * (2 + h_A) / |G|`` with ``h_A`` the order of the residual Hessian at
a point of ``A``; :func:`abc_multiplicities` evaluates the closed-form
conditions for these numbers and :func:`catalog_sweep` checks them against
the general pipeline.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .algebra import QQ, ExtensionField
from .errors import DomainError, FieldError, InconsistencyError, NumericError
from .forms import BinaryForm, factorize, product_residual_multiplicity
from .invariants import BoundaryOrbit, OrbitReport, assemble_report

__all__ = [
    "AbcMultiplicities",
    "GroupId",
    "SweepRow",
    "SMOOTH_FORMS",
    "abc_multiplicities",
    "catalog_sweep",
    "composite_form",
    "is_smooth",
    "is_smooth_codim1",
    "local_multiplicities",
    "reduce_by_gcd",
    "special_catalog",
    "special_form",
    "sqrt_minus_3_field",
]

ORBITS = ("A", "B", "C")


@dataclass(frozen=True)
class GroupId:
    """``kind`` is one of ``C``, ``D``, ``A4``, ``S4``, ``A5``; ``n`` only for ``C``/``D``."""

    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind in ("C", "D"):
            lo = 1 if self.kind == "C" else 2
            if self.n is None or self.n < lo:
                raise DomainError(f"{self.kind}n needs n >= {lo}")
        elif self.kind in ("A4", "S4", "A5"):
            if self.n is not None:
                raise DomainError(f"{self.kind} takes no parameter")
        else:
            raise DomainError(f"unknown group {self.kind!r}")

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> GroupId:
        """Accepts ``A4``, ``S4``, ``A5``, ``D5``, ``C3``, or ``Dn``/``Cn`` with ``n``."""
        t = text.strip()
        if t.upper() in ("A4", "S4", "A5"):
            return cls(t.upper())
        head, tail = t[:1].upper(), t[1:]
        if head in ("C", "D"):
            if tail in ("n", "N", ""):
                if n is None:
                    raise DomainError(f"group {text!r} needs --n")
                return cls(head, n)
            if tail.isdigit():
                if n is not None and n != int(tail):
                    raise DomainError(f"conflicting n for {text!r}")
                return cls(head, int(tail))
        raise DomainError(f"unknown group {text!r}")

    @property
    def order(self) -> int:
        if self.kind == "C":
            return self.n
        if self.kind == "D":
            return 2 * self.n
        return {"A4": 12, "S4": 24, "A5": 60}[self.kind]

    @property
    def orbit_degrees(self) -> tuple[int, int, int]:
        if self.kind == "C":
            raise DomainError("a cyclic group has only two special orbits")
        if self.kind == "D":
            return (2, self.n, self.n)
        return {"A4": (4, 4, 6), "S4": (6, 8, 12), "A5": (12, 20, 30)}[self.kind]

    @property
    def local_orders(self) -> tuple[int, int, int]:
        """Order of the stabilizer of a point of each special orbit."""
        return tuple(self.order // dx for dx in self.orbit_degrees)

    def __str__(self) -> str:
        return f"{self.kind}{self.n}" if self.n is not None else self.kind


def sqrt_minus_3_field() -> ExtensionField:
    """``Q(t)`` with ``t^2 + 3 = 0``."""
    return ExtensionField(QQ, [3, 0, 1], name="t")


def _is_sqrt_minus_3(K) -> bool:
    return (
        isinstance(K, ExtensionField)
        and K.base is QQ
        and K.modulus == (QQ(3), QQ(0), QQ(1))
    )


# Coefficients a_i of x^(d-i) y^i.
_FORMS = {
    "S4": {
        "A": (0, 1, 0, 0, 0, -1, 0),
        "B": (1, 0, 0, 0, 14, 0, 0, 0, 1),
        "C": (1, 0, 0, 0, -33, 0, 0, 0, -33, 0, 0, 0, 1),
    },
    "A5": {
        "A": (0, 1, 0, 0, 0, 0, 11, 0, 0, 0, 0, -1, 0),
        "B": (1, 0, 0, 0, 0, -228, 0, 0, 0, 0, 494, 0, 0, 0, 0, 228, 0, 0, 0, 0, 1),
        "C": (1, 0, 0, 0, 0, 522, 0, 0, 0, 0, -10005, 0, 0, 0, 0, 0,
              0, 0, 0, 0, -10005, 0, 0, 0, 0, -522, 0, 0, 0, 0, 1),
    },
}


def special_form(group: GroupId, which: str, K=None) -> BinaryForm:
    """The special orbit ``which`` (``A``, ``B`` or ``C``) of ``group``.

    ``A4`` needs a field containing a square root of -3, i.e. an extension
    with modulus ``t^2 + 3`` (see :func:`sqrt_minus_3_field`).
    """
    which = which.upper()
    if which not in ORBITS:
        raise DomainError(f"special orbit must be A, B or C, not {which!r}")
    if group.kind == "C":
        raise DomainError("cyclic groups are not covered (only two special orbits)")
    if group.kind == "A4":
        if K is None or not _is_sqrt_minus_3(K):
            raise FieldError("A4 special forms need sqrt(-3): use a field with modulus t^2+3")
        two_t = K.add(K.gen, K.gen)
        coeffs = {
            "A": (1, 0, two_t, 0, 1),
            "B": (1, 0, K.neg(two_t), 0, 1),
            "C": (0, 1, 0, 0, 0, -1, 0),
        }[which]
        return BinaryForm(coeffs, K)
    K = K or QQ
    if group.kind == "D":
        n = group.n
        if which == "A":
            return BinaryForm((0, 1, 0), K)
        sign = 1 if which == "B" else -1
        return BinaryForm((1,) + (0,) * (n - 1) + (sign,), K)
    return BinaryForm(_FORMS[group.kind][which], K)


def _default_field(group: GroupId, K):
    if K is None and group.kind == "A4":
        return sqrt_minus_3_field()
    return K or QQ


def composite_form(group: GroupId, a: int, b: int, c: int, K=None) -> BinaryForm:
    """``A^a B^b C^c``; the A4 default field is ``Q(sqrt(-3))``."""
    if min(a, b, c) < 0 or a + b + c == 0:
        raise DomainError("exponents must be non-negative and not all zero")
    K = _default_field(group, K)
    out = None
    for which, e in zip(ORBITS, (a, b, c)):
        if e:
            part = special_form(group, which, K) ** e
            out = part if out is None else out * part
    return out


def reduce_by_gcd(F: BinaryForm) -> tuple[BinaryForm, int]:
    """``(g, m)`` with ``F = unit * g^m`` and ``m`` the gcd of the multiplicities."""
    fac = factorize(F)
    js = [j for j, _ in fac.factors]
    if not js:
        return F, 1
    m = math.gcd(*js)
    K = F.field
    g = BinaryForm((K.one,), K)
    for j, part in fac.factors:
        g = g * part ** (j // m)
    return g, m


def _stab_order(F: BinaryForm, stab, tol: float):
    if stab is not None:
        return stab
    from .stabilizer import stabilizer

    return stabilizer(F, tol).order


def is_smooth(F: BinaryForm, stab=None, tol: float = 1e-9) -> bool:
    """Whether the orbit closure of ``F`` is smooth.

    ``stab`` is the stabilizer order (needed for three or more points); when
    omitted it is computed numerically.
    """
    P = factorize(F).profile()
    if P.s == 1:
        return True
    if P.s == 2:
        return P.multiplicities[0] == P.multiplicities[1]
    g, _ = reduce_by_gcd(F)
    return bool(assemble_report(g, _stab_order(g, stab, tol)).smooth)


def is_smooth_codim1(F: BinaryForm, stab=None, tol: float = 1e-9) -> bool:
    """Multiplicity one along every two-dimensional boundary orbit."""
    P = factorize(F).profile()
    if P.s < 3:
        raise DomainError("smoothness in codimension one is only classified for s >= 3")
    g, _ = reduce_by_gcd(F)
    return bool(assemble_report(g, _stab_order(g, stab, tol)).smooth_codim1)


# -- closed-form A/B/C multiplicities ----------------------------------------------

@dataclass
class AbcMultiplicities:
    """Roster values; ``None`` where the exponent is zero.

    ``conditions`` holds the evaluated linear forms that decide whether a
    value is 1.  ``effective`` is set when the composite has a larger
    stabilizer than ``group`` and holds the values relative to it.
    """

    group: GroupId
    exponents: tuple[int, int, int]
    mult_A: int | None
    mult_B: int | None
    mult_C: int | None
    conditions: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    effective: tuple | None = None

    @property
    def values(self) -> tuple:
        return (self.mult_A, self.mult_B, self.mult_C)

    def get(self, which: str):
        return self.values[ORBITS.index(which)]


def _proportional(u: tuple, v: tuple) -> bool:
    if any(x < 0 for x in u) or not any(u):
        return False
    return all(u[i] * v[j] == u[j] * v[i] for i in range(3) for j in range(3))


def _log_order(terms: list[tuple[int, list[Fraction]]], bound: int) -> int:
    """First ``k >= 1`` where ``sum e * log P(u)`` has a nonzero ``u^k`` coefficient.

    Each ``P`` has constant term 1.  Log coefficients come from
    ``k L_k = k P_k - sum_{j<k} j L_j P_{k-j}``.
    """
    total = [Fraction(0)] * (bound + 1)
    for e, P in terms:
        if not e:
            continue
        P = list(P) + [Fraction(0)] * (bound + 1 - len(P))
        L = [Fraction(0)] * (bound + 1)
        for k in range(1, bound + 1):
            acc = k * P[k] - sum(j * L[j] * P[k - j] for j in range(1, k))
            L[k] = acc / k
            total[k] += e * L[k]
    for k in range(1, bound + 1):
        if total[k]:
            return k
    raise InconsistencyError("log series vanishes to the search bound")


def _dihedral_order(n: int, which: str, a: int, b: int, c: int) -> int:
    # Adapted coordinates: the local parameter is x^m around the point, and the
    # orbits become power series in u = x^m with constant term 1.
    bound = 4 * n + 8
    if which == "A":
        plus = [Fraction(1), Fraction(1)]
        minus = [Fraction(1), Fraction(-1)]
        return _log_order([(b, plus), (c, minus)], bound)
    odd = [Fraction(math.comb(n, 2 * j + 1), n) for j in range((n - 1) // 2 + 1)]
    even = [Fraction(math.comb(n, 2 * j)) for j in range(n // 2 + 1)]
    line = [Fraction(1), Fraction(-1)]
    own, other = (b, c) if which == "B" else (c, b)
    return _log_order([(a, line), (own, odd), (other, even)], bound)


def abc_multiplicities(group: GroupId, a: int, b: int, c: int) -> AbcMultiplicities:
    """A/B/C-multiplicities of ``A^a B^b C^c`` from the closed-form conditions."""
    if group.kind == "C":
        raise DomainError("cyclic groups have no A/B/C decomposition")
    ex = (a, b, c)
    if any(e < 0 for e in ex) or not any(ex):
        raise DomainError("exponents must be non-negative and not all zero")
    s = sum(dx for dx, e in zip(group.orbit_degrees, ex) if e)
    if s < 3:
        raise DomainError(f"A^{a} B^{b} C^{c} is supported on {s} point(s); need at least 3")

    cond: dict[str, object] = {}
    vals: dict[str, int] = {}
    warnings: list[str] = []
    effective = None
    kind = group.kind
    if kind == "D":
        n = group.n
        cond["A"] = b - c
        cond["B"] = -a + Fraction((n - 1) * (n - 2), 6) * b + Fraction(n * (n - 1), 2) * c
        cond["C"] = -a + Fraction(n * (n - 1), 2) * b + Fraction((n - 1) * (n - 2), 6) * c
        for X in ORBITS:
            # The closed form only decides "1 or more"; higher values come from the log series.
            vals[X] = 1 if cond[X] != 0 else _dihedral_order(n, X, a, b, c)
    elif kind == "A4":
        cond["A"] = a - 8 * b + 20 * c
        cond["B"] = 8 * a - b - 20 * c
        cond["C"] = a - b
        vals["A"] = 1 if cond["A"] else 2
        vals["B"] = 1 if cond["B"] else 2
        if a != b:
            vals["C"] = 1
        else:
            vals["C"] = 4 if c == 14 * a == 14 * b else 2
            warnings.append("when a=b the stabilizer is S_4; A and B merge into one orbit")
    elif kind == "S4":
        cond["A"] = a - 14 * b + 33 * c
        cond["B"] = 20 * a - 7 * b - 88 * c
        cond["C"] = 45 * a - 84 * b - 11 * c
        vals["A"] = 1 if cond["A"] else 2
        vals["B"] = 1 if cond["B"] else 2
        vals["C"] = 1 if cond["C"] else (3 if _proportional(ex, (5852, 561, 19656)) else 2)
    else:
        cond["A"] = 11 * a - 228 * b + 522 * c
        cond["B"] = 88 * a - 57 * b - 580 * c
        cond["C"] = 99 * a - 285 * b - 58 * c
        vals["A"] = 1 if cond["A"] else 2
        vals["B"] = 1 if cond["B"] else 2
        vals["C"] = 1 if cond["C"] else (3 if _proportional(ex, (26864005, 431607, 43733250)) else 2)

    out = [vals[X] if e else None for X, e in zip(ORBITS, ex)]
    if kind == "A4" and a == b:
        # Relative to S_4 (twice the order): A and B form one orbit of 8 points.
        ab = None
        if a:
            total = out[0] + out[1]
            if total % 2:
                raise InconsistencyError("A and B multiplicities disagree although a=b")
            ab = total // 2
        cm = None
        if c:
            if out[2] % 2:
                raise InconsistencyError("odd C-multiplicity for a=b")
            cm = out[2] // 2
        effective = (ab, ab, cm)
    return AbcMultiplicities(group, ex, *out, conditions=cond, warnings=warnings, effective=effective)


def local_multiplicities(group: GroupId, a: int, b: int, c: int, K=None) -> tuple:
    """``d_X (2 + h_X) / |G|`` with ``h_X`` computed from truncated Taylor series.

    Independent of the closed-form conditions and cheap for huge exponents.
    """
    ex = (a, b, c)
    K = _default_field(group, K)
    parts = []
    for X, e in zip(ORBITS, ex):
        if e:
            parts.append((X, special_form(group, X, K)))
    factors = [(F.affine(), e) for (X, F), e in zip(parts, [e for e in ex if e])]
    d = sum(F.degree * e for (X, F), e in zip(parts, [e for e in ex if e]))
    out = dict.fromkeys(ORBITS)
    dims = dict(zip(ORBITS, group.orbit_degrees))
    for i, (X, F) in enumerate(parts):
        hs = product_residual_multiplicity(factors, i, d, K)
        if len(hs) != 1:
            raise InconsistencyError(f"points of orbit {X} disagree: residual orders {hs}")
        num = dims[X] * (2 + hs[0])
        if num % group.order:
            raise InconsistencyError(f"{X}-contribution {num} not divisible by |G|={group.order}")
        out[X] = num // group.order
    return tuple(out[X] for X in ORBITS)


# -- catalog ------------------------------------------------------------------------

#: The smooth threefold orbit closures, with their stabilizer orders.
SMOOTH_FORMS = (
    (BinaryForm((1, 0, 0, 1)), 6),
    (BinaryForm((1, 0, 0, 1, 0)), 12),
    (BinaryForm((0, 1, 0, 0, 0, -1, 0)), 24),
    (BinaryForm((0, 1, 0, 0, 0, 0, 11, 0, 0, 0, 0, -1, 0)), 60),
)


def _groups(d_max: int | None, n_max: int | None) -> list[GroupId]:
    top = n_max if n_max is not None else (d_max if d_max is not None else 6)
    return [GroupId("D", n) for n in range(2, top + 1)] + [GroupId(k) for k in ("A4", "S4", "A5")]


def special_catalog(d_max: int | None = None, exponent_bound: int | None = None,
                    n_max: int | None = None, reduced: bool = True,
                    groups: Iterable[GroupId] | None = None) -> Iterator[tuple[GroupId, tuple[int, int, int]]]:
    """Composites ``A^a B^b C^c`` with at least 3 points.

    ``d_max`` bounds the degree, ``exponent_bound`` each exponent; with
    ``reduced`` the exponents have gcd 1.
    """
    if d_max is None and exponent_bound is None:
        raise ValueError("give d_max or exponent_bound")
    for G in (groups if groups is not None else _groups(d_max, n_max)):
        dims = G.orbit_degrees
        top = exponent_bound if exponent_bound is not None else d_max
        for ex in itertools.product(range(top + 1), repeat=3):
            if not any(ex):
                continue
            d = sum(e * dx for e, dx in zip(ex, dims))
            if d_max is not None and d > d_max:
                continue
            if sum(dx for dx, e in zip(dims, ex) if e) < 3:
                continue
            if reduced and math.gcd(*ex) != 1:
                continue
            yield G, ex


@dataclass
class SweepRow:
    group: GroupId
    exponents: tuple[int, int, int]
    form: BinaryForm
    roster: AbcMultiplicities
    report: OrbitReport
    stabilizer_order: int | None = None
    smooth: bool | None = None
    smooth_codim1: bool | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _cross_check(G: GroupId, ex, roster: AbcMultiplicities, report: OrbitReport) -> list[str]:
    """Compare pipeline premultiplicities with ``sum(roster_X) * |G|`` per Pair orbit."""
    fails = []
    d = report.profile.d
    seen = set()
    for X, e in zip(ORBITS, ex):
        if not e:
            continue
        O = BoundaryOrbit.pair(e, d)
        if O in seen:
            continue
        seen.add(O)
        members = [Y for Y, f in zip(ORBITS, ex) if f and f in (O.r_low, O.r_high)]
        factor = 2 if O.r_low == O.r_high else 1
        expected = factor * G.order * sum(roster.get(Y) for Y in members)
        got = report.entry(O).premultiplicity
        if got != expected:
            fails.append(
                f"{G} {ex}: premultiplicity along {O} is {got}, roster gives "
                f"{expected} ({'+'.join(members)}, |G|={G.order})"
            )
    return fails


def catalog_sweep(d_max: int | None = None, exponent_bound: int | None = None,
                  n_max: int | None = None, numeric: bool = True, tol: float = 1e-9,
                  reduced: bool = True, groups: Iterable[GroupId] | None = None) -> list[SweepRow]:
    """Run the exact pipeline on every catalog composite and cross-check the roster.

    With ``numeric`` the stabilizer is computed and the multiplicities and
    smoothness flags are filled in; a stabilizer that is not a multiple of
    ``|G|``, or an A4 composite with ``a = b`` whose stabilizer is not of
    order 24, is reported as a failure.
    """
    rows = []
    for G, ex in special_catalog(d_max, exponent_bound, n_max, reduced, groups):
        F = composite_form(G, *ex)
        roster = abc_multiplicities(G, *ex)
        report = assemble_report(F, None)
        row = SweepRow(G, ex, F, roster, report)
        row.failures.extend(_cross_check(G, ex, roster, report))
        if numeric:
            from .stabilizer import stabilizer

            try:
                N = stabilizer(F, tol).order
            except NumericError as exc:
                row.failures.append(f"{G} {ex}: stabilizer failed: {exc}")
                rows.append(row)
                continue
            row.stabilizer_order = N
            if N % G.order:
                row.failures.append(f"{G} {ex}: stabilizer order {N} is not a multiple of {G.order}")
            if G.kind == "A4" and ex[0] == ex[1] and N != 24:
                row.failures.append(f"{G} {ex}: expected an S_4 stabilizer, found order {N}")
            try:
                full = assemble_report(F, N)
            except InconsistencyError as exc:
                row.failures.append(f"{G} {ex}: {exc}")
            else:
                row.report = full
                row.smooth, row.smooth_codim1 = full.smooth, full.smooth_codim1
                if roster.effective is not None and N == 24 and ex[2] != ex[0]:
                    for X, e, v in zip(ORBITS, ex, roster.effective):
                        if e and full.entry(BoundaryOrbit.pair(e, full.profile.d)).multiplicity != v:
                            row.failures.append(f"{G} {ex}: effective {X}-multiplicity {v} disagrees")
        rows.append(row)
    return rows
