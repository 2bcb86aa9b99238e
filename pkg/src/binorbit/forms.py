"""Binary forms, their Hessians, and the local data attached to their points.

A form of degree ``d`` is stored by its coefficients ``a_0, ..., a_d`` where
``a_i`` multiplies ``x^(d-i) y^i``.  Read as a list, that is a polynomial in
``Y = y/x`` (lowest degree first), so products of forms are convolutions.
The affine chart ``y = 1`` gives ``g(x) = F(x, 1)`` with coefficient list
``reversed(a)``; points ``(u : 1)`` are roots of ``g`` and the point
``(1 : 0)`` has multiplicity ``d - deg g``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    QQ,
    ExtensionField,
    NotDivisibleError,
    branch_over,
    poly_exact_divide,
    poly_gcd,
    poly_mul,
    poly_pow,
    poly_strip,
    poly_sub,
    yun_squarefree,
)
from .errors import InconsistencyError

__all__ = [
    "INFINITY",
    "BinaryForm",
    "ExternalHessianProfile",
    "FormFactorization",
    "MultiplicityProfile",
    "ResidualDatum",
    "compose",
    "external_hessian",
    "factorize",
    "form_divide",
    "hessian",
    "profile",
    "residual_data",
    "residual_hessian_multiplicity",
    "product_residual_multiplicity",
]


class _Infinity:
    def __repr__(self) -> str:
        return "INFINITY"


#: Marker for the point ``(1 : 0)`` where an affine factor is expected.
INFINITY = _Infinity()


@dataclass(frozen=True, eq=False)
class BinaryForm:
    coeffs: tuple
    field: object = QQ

    def __post_init__(self):
        K = self.field
        coeffs = tuple(K(c) for c in self.coeffs)
        if not coeffs or all(K.is_zero(c) for c in coeffs):
            raise ValueError("the zero polynomial is not a binary form")
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_affine(cls, g: Sequence, degree: int, K=QQ) -> BinaryForm:
        """Homogenize ``g(x)`` (lowest degree first) to the given degree."""
        if len(g) - 1 > degree:
            raise ValueError("affine polynomial exceeds the form degree")
        a = [K.zero] * (degree + 1)
        for k, c in enumerate(g):
            a[degree - k] = c
        return cls(tuple(a), K)

    @classmethod
    def linear(cls, a, b, K=QQ) -> BinaryForm:
        """``a*x + b*y``."""
        return cls((a, b), K)

    @classmethod
    def from_roots(cls, roots: Sequence, multiplicities: Sequence[int] | None = None, K=QQ) -> BinaryForm:
        """Product of ``(x - r*y)^m``; a root ``INFINITY`` contributes ``y^m``."""
        multiplicities = multiplicities or [1] * len(roots)
        out = [K.one]
        for r, m in zip(roots, multiplicities):
            lin = [K.zero, K.one] if r is INFINITY else [K.one, K.neg(K(r))]
            out = poly_mul(out, poly_pow(lin, m, K), K)
        d = sum(multiplicities)
        return cls(tuple(out) + (K.zero,) * (d + 1 - len(out)), K)

    # -- basic views ------------------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def affine(self) -> list:
        """``F(x, 1)`` as a polynomial in ``x``, lowest degree first."""
        return poly_strip(list(reversed(self.coeffs)), self.field)

    def y_poly(self) -> list:
        return poly_strip(list(self.coeffs), self.field)

    def multiplicity_at_infinity(self) -> int:
        return self.degree - (len(self.affine()) - 1)

    def swap(self) -> BinaryForm:
        """``F(y, x)``."""
        return BinaryForm(tuple(reversed(self.coeffs)), self.field)

    def __mul__(self, other: BinaryForm) -> BinaryForm:
        if not isinstance(other, BinaryForm):
            return NotImplemented
        _same_field(self, other)
        prod = poly_mul(list(self.coeffs), list(other.coeffs), self.field)
        prod += [self.field.zero] * (self.degree + other.degree + 1 - len(prod))
        return BinaryForm(tuple(prod), self.field)

    def __pow__(self, n: int) -> BinaryForm:
        if n < 0:
            raise ValueError("negative power of a form")
        p = poly_pow(list(self.coeffs), n, self.field)
        p += [self.field.zero] * (self.degree * n + 1 - len(p))
        return BinaryForm(tuple(p), self.field)

    def scale(self, c) -> BinaryForm:
        K = self.field
        return BinaryForm(tuple(K.mul(K(c), a) for a in self.coeffs), K)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def proportional(self, other: BinaryForm) -> bool:
        """Equality up to a nonzero scalar (cross-multiplied coefficients)."""
        if self.degree != other.degree:
            return False
        K = self.field
        a, b = self.coeffs, other.coeffs
        k = next(i for i, c in enumerate(a) if not K.is_zero(c))
        if K.is_zero(b[k]):
            return False
        return all(
            K.is_zero(K.sub(K.mul(a[i], b[k]), K.mul(b[i], a[k]))) for i in range(len(a))
        )

    def evaluate(self, x, y):
        K = self.field
        d = self.degree
        x, y = K(x), K(y)
        acc = K.zero
        for i, c in enumerate(self.coeffs):
            term = c
            for _ in range(d - i):
                term = K.mul(term, x)
            for _ in range(i):
                term = K.mul(term, y)
            acc = K.add(acc, term)
        return acc

    def __str__(self) -> str:
        K = self.field
        d = self.degree
        terms = []
        for i, c in enumerate(self.coeffs):
            if K.is_zero(c):
                continue
            mono = "*".join(
                s for s in (_power("x", d - i), _power("y", i)) if s
            )
            cs = K.to_str(c)
            compound = "+" in cs or " - " in cs
            if not mono:
                terms.append(f"({cs})" if compound else cs)
            elif cs == "1":
                terms.append(mono)
            elif cs == "-1":
                terms.append("-" + mono)
            else:
                terms.append(f"({cs})*{mono}" if compound else f"{cs}*{mono}")
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def __repr__(self) -> str:
        return f"BinaryForm({self}, field={self.field!r})"


def _power(v: str, k: int) -> str:
    return "" if k == 0 else v if k == 1 else f"{v}^{k}"


def _same_field(F: BinaryForm, G: BinaryForm) -> None:
    if F.field != G.field:
        raise ValueError("forms live over different fields")


def form_divide(F: BinaryForm, G: BinaryForm) -> BinaryForm:
    """Exact quotient ``F / G``; raises :class:`NotDivisibleError`."""
    _same_field(F, G)
    K = F.field
    e = F.degree - G.degree
    if e < 0:
        raise NotDivisibleError("divisor has larger degree")
    q = poly_exact_divide(F.y_poly(), G.y_poly(), K)
    if len(q) - 1 > e:
        # Y-polynomials divide but the x-powers do not.
        raise NotDivisibleError("form is not divisible (power of x)")
    return BinaryForm(tuple(q) + (K.zero,) * (e + 1 - len(q)), K)


def hessian(F: BinaryForm) -> BinaryForm | None:
    """``F_xx F_yy - F_xy^2``, of degree ``2d - 4``; ``None`` when identically zero."""
    d = F.degree
    if d < 2:
        raise ValueError("the Hessian needs degree at least 2")
    K = F.field
    a = F.coeffs
    fxx = [K.mul(K((d - i) * (d - i - 1)), a[i]) for i in range(d - 1)]
    fyy = [K.mul(K(i * (i - 1)), a[i]) for i in range(2, d + 1)]
    fxy = [K.mul(K((d - i) * i), a[i]) for i in range(1, d)]
    h = poly_sub(poly_mul(fxx, fyy, K), poly_mul(fxy, fxy, K), K)
    if not h:
        return None
    return BinaryForm(tuple(h) + (K.zero,) * (2 * d - 3 - len(h)), K)


def compose(F: BinaryForm, M: Sequence[Sequence]) -> BinaryForm:
    """``F(a x + b y, c x + d y)`` for ``M = ((a, b), (c, d))``."""
    K = F.field
    (a, b), (c, dd) = M
    p = [K(a), K(b)]
    q = [K(c), K(dd)]
    d = F.degree
    ppow = [[K.one]]
    qpow = [[K.one]]
    for _ in range(d):
        ppow.append(poly_mul(ppow[-1], p, K))
        qpow.append(poly_mul(qpow[-1], q, K))
    out = [K.zero] * (d + 1)
    for i, ai in enumerate(F.coeffs):
        if K.is_zero(ai):
            continue
        term = poly_mul(ppow[d - i], qpow[i], K)
        for k, t in enumerate(term):
            out[k] = K.add(out[k], K.mul(ai, t))
    return BinaryForm(tuple(out), K)


# -- factorization and profiles ---------------------------------------------------

@dataclass(frozen=True)
class MultiplicityProfile:
    """Multiset of point multiplicities, sorted in decreasing order."""

    multiplicities: tuple[int, ...]

    def __post_init__(self):
        ms = tuple(sorted((int(m) for m in self.multiplicities), reverse=True))
        if any(m < 1 for m in ms):
            raise ValueError("multiplicities must be positive")
        object.__setattr__(self, "multiplicities", ms)

    @property
    def d(self) -> int:
        return sum(self.multiplicities)

    @property
    def s(self) -> int:
        return len(self.multiplicities)

    @property
    def p2(self) -> int:
        return sum(m * m for m in self.multiplicities)

    @property
    def p3(self) -> int:
        return sum(m ** 3 for m in self.multiplicities)

    def distinct(self) -> list[int]:
        return sorted(set(self.multiplicities))

    def scaled(self, m: int) -> MultiplicityProfile:
        return MultiplicityProfile(tuple(m * x for x in self.multiplicities))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.multiplicities)) + "}"


@dataclass(frozen=True)
class FormFactorization:
    """``F = unit * prod(part ** j)``.

    ``factors`` has one squarefree part per multiplicity ``j``; ``affine``
    holds the same decomposition in the chart ``y = 1`` and
    ``at_infinity`` the multiplicity of ``(1 : 0)``.
    """

    factors: tuple[tuple[int, BinaryForm], ...]
    unit: object
    affine: tuple[tuple[int, list], ...]
    at_infinity: int
    field: object = QQ

    def profile(self) -> MultiplicityProfile:
        ms = []
        for j, q in self.affine:
            ms.extend([j] * (len(q) - 1))
        if self.at_infinity:
            ms.append(self.at_infinity)
        return MultiplicityProfile(tuple(ms))

    def points(self):
        """Yield ``(multiplicity, affine factor or INFINITY)``."""
        for j, q in self.affine:
            yield j, q
        if self.at_infinity:
            yield self.at_infinity, INFINITY


def factorize(F: BinaryForm) -> FormFactorization:
    K = F.field
    g = F.affine()
    v = F.degree - (len(g) - 1)
    affine = yun_squarefree(g, K) if len(g) > 1 else []
    parts = {j: BinaryForm.from_affine(q, len(q) - 1, K) for j, q in affine}
    if v:
        y = BinaryForm((K.zero, K.one), K)
        parts[v] = parts[v] * y if v in parts else y
    return FormFactorization(
        factors=tuple(sorted(parts.items())),
        unit=g[-1],
        affine=tuple(affine),
        at_infinity=v,
        field=K,
    )


def profile(F: BinaryForm) -> MultiplicityProfile:
    return factorize(F).profile()


# -- Hessian splitting ----------------------------------------------------------

@dataclass(frozen=True)
class ExternalHessianProfile:
    """Part of the Hessian away from the points of the form.

    ``parts`` lists ``(k, n)``: ``n`` external points (counted over the
    algebraic closure) where the Hessian vanishes to order ``k``.
    """

    external_part: BinaryForm
    parts: tuple[tuple[int, int], ...]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(sorted((k for k, n in self.parts for _ in range(n)), reverse=True))

    @property
    def sum_k(self) -> int:
        return sum(k * n for k, n in self.parts)

    @property
    def sum_k2(self) -> int:
        return sum(k * k * n for k, n in self.parts)


def _coprime(F: BinaryForm, G: BinaryForm) -> bool:
    if F.multiplicity_at_infinity() and G.multiplicity_at_infinity():
        return False
    f, g = F.affine(), G.affine()
    if len(f) < 2 or len(g) < 2:
        return True
    return len(poly_gcd(f, g, F.field)) == 1


def external_hessian(F: BinaryForm, fac: FormFactorization | None = None) -> ExternalHessianProfile:
    """Strip the ``(2j-2)``-fold internal zeros off the Hessian of ``F``."""
    fac = fac or factorize(F)
    if fac.profile().s < 2:
        raise ValueError("hessian identically zero (form is a d-th power)")
    H = hessian(F)
    if H is None:
        raise InconsistencyError("Hessian vanished for a form with two distinct points")
    K = F.field
    internal = BinaryForm((K.one,), K)
    for j, part in fac.factors:
        if j > 1:
            internal = internal * part ** (2 * j - 2)
    try:
        E = form_divide(H, internal)
    except NotDivisibleError as exc:
        raise InconsistencyError(
            "Hessian does not carry a (2r-2)-fold zero at an r-fold point"
        ) from exc
    squarefree = BinaryForm((K.one,), K)
    for _, part in fac.factors:
        squarefree = squarefree * part
    if E.degree and not _coprime(E, squarefree):
        raise InconsistencyError("Hessian vanishes to excess order at a point of the form")
    parts = []
    if E.degree:
        for k, q in factorize(E).points():
            parts.append((k, 1 if q is INFINITY else len(q) - 1))
    merged: dict[int, int] = {}
    for k, n in parts:
        merged[k] = merged.get(k, 0) + n
    return ExternalHessianProfile(E, tuple(sorted(merged.items())))


# -- residual tuples ------------------------------------------------------------

@dataclass(frozen=True)
class ResidualDatum:
    """Order ``hess_mult`` of the residual Hessian at the roots of ``modulus``.

    ``modulus`` is a monic factor (over the form's field) of the
    multiplicity-``r`` part, or ``INFINITY``; ``weight`` is the number of
    points it stands for.
    """

    r: int
    modulus: object
    hess_mult: int
    weight: int


def _scale(E, a, n: int):
    B = E.base
    c = B(n)
    return tuple(B.mul(x, c) for x in a)


def _taylor_coefficients(E, g: list):
    """Yield ``g^(k)(u)/k!`` at the generator ``u`` of ``E``, by repeated synthetic division."""
    coeffs = [E(c) for c in g]
    while coeffs:
        acc = coeffs[-1]
        quot = [None] * (len(coeffs) - 1)
        for k in range(len(coeffs) - 2, -1, -1):
            quot[k] = acc
            acc = E.add(E.mul_gen(acc), coeffs[k])
        yield acc
        coeffs = quot
    while True:
        yield E.zero


def _hessian_order(E, t, e: int) -> int:
    """Order at ``u`` of the Hessian of a form whose local series is ``t``.

    ``t`` iterates the Taylor coefficients of ``C_p(x, 1)`` at ``u`` and
    ``e`` is the degree of ``C_p``.  Uses
    ``H(C_p)(x, 1) = (e-1) * (e*G*G'' - (e-1)*G'^2)`` with ``G = C_p(x, 1)``.
    """
    t = iter(t)
    c = [next(t), next(t)]
    for k in range(2 * e - 3):
        c.append(next(t))
        acc = E.zero
        for i in range(k + 1):
            j = k - i
            acc = E.add(acc, _scale(E, E.mul(c[i], c[j + 2]), e * (j + 1) * (j + 2)))
            acc = E.sub(acc, _scale(E, E.mul(c[i + 1], c[j + 1]), (e - 1) * (i + 1) * (j + 1)))
        if E.is_zero(acc):
            continue
        E.inv(acc)  # zero divisor -> SplitSignal -> caller branches
        return k
    raise InconsistencyError("Hessian of the residual tuple vanishes identically")


def _residual_order(E, g: list, d: int, r: int) -> int:
    taylor = _taylor_coefficients(E, g)
    for _ in range(r):
        if not E.is_zero(next(taylor)):
            raise NotDivisibleError(f"point is not a {r}-fold point of the form")
    return _hessian_order(E, taylor, d - r)


def _residual(F: BinaryForm, q, r: int) -> list[ResidualDatum]:
    K = F.field
    G = F
    if q is INFINITY:
        G = F.swap()
        q = [K.zero, K.one]
    g = G.affine()
    E0 = ExtensionField(K, q, name="u", check=False)
    branches = branch_over(E0, lambda E: _residual_order(E, g, F.degree, r))
    if G is not F:
        return [ResidualDatum(r, INFINITY, h, 1) for _, h in branches]
    return [ResidualDatum(r, list(E.modulus), h, E.degree) for E, h in branches]


def residual_hessian_multiplicity(F: BinaryForm, q, r: int) -> list[ResidualDatum]:
    """Order of vanishing at ``p`` of the Hessian of ``C_p = F / L_p^r``.

    ``q`` is a squarefree factor of the multiplicity-``r`` part of
    ``F(x, 1)`` (its roots are the points ``p``), or ``INFINITY`` when
    ``y^r`` exactly divides ``F``.  The computation runs over
    ``K[u]/(q)`` at the generic root ``u``; whenever the answer differs
    between roots the modulus splits and one datum is returned per branch.
    """
    if profile(F).s < 3:
        raise ValueError("residual Hessian needs at least 3 distinct points")
    return _residual(F, q, r)


def residual_data(F: BinaryForm, fac: FormFactorization | None = None) -> list[ResidualDatum]:
    """Residual data for every point of ``F`` (requires ``s >= 3``)."""
    fac = fac or factorize(F)
    if fac.profile().s < 3:
        raise ValueError("residual Hessian needs at least 3 distinct points")
    out = []
    for j, q in fac.points():
        out.extend(_residual(F, q, j))
    return out


# -- residuals of products with large exponents ----------------------------------

def _series_pow(E, a: list, e: int, n: int) -> list:
    """First ``n`` coefficients of ``(a(eps) / a(0))^e``; ``a[0]`` must be a unit.

    Normalising the constant term keeps coefficient sizes polynomial in
    ``e``; the dropped unit only rescales the Hessian.
    """
    a0_inv = E.inv(a[0])
    a = [E.mul(x, a0_inv) for x in a]
    B = E.base
    b = [E.one]
    for k in range(1, n):
        acc = E.zero
        for j in range(1, min(k, len(a) - 1) + 1):
            w = (e + 1) * j - k
            if w:
                acc = E.add(acc, _scale(E, E.mul(a[j], b[k - j]), w))
        b.append(E.mul(acc, E(B.inv(B(k)))))
    return b


def _series_mul(E, a: list, b: list, n: int) -> list:
    out = [E.zero] * n
    for i, ai in enumerate(a[:n]):
        if E.is_zero(ai):
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] = E.add(out[i + j], E.mul(ai, b[j]))
    return out


def _product_order(E, factors, at: int, d: int) -> int:
    r = factors[at][1]
    n = 8
    while True:
        series = [E.one] + [E.zero] * (n - 1)
        for idx, (g, e) in enumerate(factors):
            taylor = _taylor_coefficients(E, g)
            a = [next(taylor) for _ in range(n + 1)]
            if idx == at:
                if not E.is_zero(a[0]):
                    raise InconsistencyError("chosen point is not a root of its factor")
                a = a[1:]
            else:
                a = a[:n]
            series = _series_mul(E, series, _series_pow(E, a, e, n), n)
        try:
            return _hessian_order(E, series, d - r)
        except StopIteration:
            n *= 2


def product_residual_multiplicity(factors, at: int, degree: int, K=QQ) -> list[int]:
    """Residual Hessian orders for ``F = prod(g_i ** e_i)`` at the finite roots of ``g_at``.

    ``factors`` is a list of ``(affine squarefree polynomial, exponent)``
    with pairwise coprime polynomials and ``degree`` the degree of the
    homogeneous product.  Only truncated Taylor series are formed, so huge
    exponents cost nothing extra.  Returns the sorted distinct orders
    found over the branches of ``K[u]/(g_at)``.
    """
    g = poly_strip([K(c) for c in factors[at][0]], K)
    if len(g) < 2:
        raise ValueError("the chosen factor has no finite roots")
    E0 = ExtensionField(K, g, name="u", check=False)
    branches = branch_over(E0, lambda E: _product_order(E, factors, at, degree))
    return sorted({h for _, h in branches})
