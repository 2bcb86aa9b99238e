"""Enumerative invariants of PGL(2)-orbit closures of binary forms.

Everything here is exact integer bookkeeping on top of :mod:`binorbit.forms`;
the stabilizer order is an input (see :mod:`binorbit.stabilizer`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import InconsistencyError
from .forms import (
    BinaryForm,
    ExternalHessianProfile,
    FormFactorization,
    MultiplicityProfile,
    ResidualDatum,
    external_hessian,
    factorize,
    residual_data,
)

__all__ = [
    "INFINITE",
    "BoundaryOrbit",
    "OrbitReport",
    "assemble_report",
    "boundary",
    "curve_or_surface_degree",
    "orbit_dimension",
    "predegree",
    "premultiplicity_dfold",
    "premultiplicity_pair",
    "surface_multiplicity_dfold",
]

#: Stabilizer order of a form supported on at most two points.
INFINITE = "INFINITE"

Stab = Union[int, str]


@dataclass(frozen=True, order=True)
class BoundaryOrbit:
    """Orbit of ``x^d`` (``kind="dfold"``) or of ``x^r y^(d-r)`` (``kind="pair"``)."""

    kind: str
    r_low: int = 0
    r_high: int = 0

    @classmethod
    def dfold(cls) -> BoundaryOrbit:
        return cls("dfold")

    @classmethod
    def pair(cls, r: int, d: int) -> BoundaryOrbit:
        lo, hi = sorted((r, d - r))
        if lo < 1:
            raise ValueError("pair orbit needs two distinct points")
        return cls("pair", lo, hi)

    @property
    def dimension(self) -> int:
        return 1 if self.kind == "dfold" else 2

    def __str__(self) -> str:
        return "DFold" if self.kind == "dfold" else f"Pair({self.r_low},{self.r_high})"


def orbit_dimension(P: MultiplicityProfile) -> int:
    return min(P.s, 3)


def predegree(P: MultiplicityProfile) -> int:
    """``d^3 - 3 d sum(m^2) + 2 sum(m^3)``; zero for ``s <= 2``."""
    d = P.d
    return d ** 3 - 3 * d * P.p2 + 2 * P.p3


def curve_or_surface_degree(P: MultiplicityProfile) -> int:
    if P.s == 1:
        return P.d
    if P.s == 2:
        r, rest = P.multiplicities
        return r * r if r == rest else 2 * r * rest
    raise ValueError(f"profile {P} spans a threefold; use predegree / stabilizer order")


def boundary(P: MultiplicityProfile) -> list[BoundaryOrbit]:
    if P.s == 1:
        return []
    if P.s == 2:
        return [BoundaryOrbit.dfold()]
    pairs = {BoundaryOrbit.pair(r, P.d) for r in P.distinct()}
    return [BoundaryOrbit.dfold()] + sorted(pairs)


def surface_multiplicity_dfold(P: MultiplicityProfile) -> int:
    if P.s != 2:
        raise ValueError("only defined for forms supported on two points")
    r, rest = P.multiplicities
    return 1 if r == rest else 2


def premultiplicity_dfold(F: BinaryForm, ext: ExternalHessianProfile | None = None,
                          fac: FormFactorization | None = None) -> int:
    """``sum k_i^2 + 4s - 8`` over the external zeros of the Hessian."""
    fac = fac or factorize(F)
    s = fac.profile().s
    if s < 3:
        raise ValueError("premultiplicities are defined for s >= 3; use the surface/curve path")
    ext = ext or external_hessian(F, fac)
    return ext.sum_k2 + 4 * s - 8


def premultiplicity_pair(F: BinaryForm, O: BoundaryOrbit,
                         residuals: list[ResidualDatum] | None = None,
                         fac: FormFactorization | None = None) -> int:
    """Sum of point contributions along the orbit of ``x^r y^(d-r)``.

    Points of multiplicity ``r_low`` and of multiplicity ``r_high`` both land
    in this (unordered) orbit.
    """
    fac = fac or factorize(F)
    P = fac.profile()
    if O not in boundary(P) or O.kind != "pair":
        raise ValueError(f"{O} is not a two-dimensional boundary orbit of this form")
    if residuals is None:
        residuals = residual_data(F, fac)
    total = 0
    for datum in residuals:
        if datum.r not in (O.r_low, O.r_high):
            continue
        if O.r_low == O.r_high:
            total += datum.weight * (4 + 2 * datum.hess_mult)
        else:
            total += datum.weight * (2 + datum.hess_mult)
    return total


@dataclass
class BoundaryEntry:
    orbit: BoundaryOrbit
    premultiplicity: int | None
    multiplicity: int | None


@dataclass
class OrbitReport:
    profile: MultiplicityProfile
    dimension: int
    predegree: int
    stabilizer_order: Stab
    degree: int | None
    boundary: list[BoundaryEntry]
    smooth: bool | None
    smooth_codim1: bool | None
    external_hessian: ExternalHessianProfile | None = None
    residuals: list[ResidualDatum] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def entry(self, orbit: BoundaryOrbit) -> BoundaryEntry:
        for e in self.boundary:
            if e.orbit == orbit:
                return e
        raise KeyError(str(orbit))


def _exact_quotient(num: int, den: int, what: str) -> int:
    if num % den:
        raise InconsistencyError(
            f"{what} {num} is not divisible by the stabilizer order {den}"
        )
    return num // den


def assemble_report(F: BinaryForm, stab: Stab | None) -> OrbitReport:
    """Full invariant bundle.  ``stab`` may be ``None`` to skip the division step."""
    fac = factorize(F)
    P = fac.profile()
    dim = orbit_dimension(P)
    if P.s <= 2:
        if P.s == 1:
            entries = []
            smooth = codim1 = True
        else:
            mult = surface_multiplicity_dfold(P)
            entries = [BoundaryEntry(BoundaryOrbit.dfold(), None, mult)]
            smooth = codim1 = mult == 1
        return OrbitReport(P, dim, 0, INFINITE, curve_or_surface_degree(P), entries,
                           smooth, codim1)
    if stab == INFINITE:
        raise InconsistencyError("a form on three or more points has a finite stabilizer")
    ext = external_hessian(F, fac)
    residuals = residual_data(F, fac)
    pre = predegree(P)
    entries = []
    for O in boundary(P):
        if O.kind == "dfold":
            pm = premultiplicity_dfold(F, ext, fac)
        else:
            pm = premultiplicity_pair(F, O, residuals, fac)
        mult = None if stab is None else _exact_quotient(pm, stab, f"premultiplicity along {O}")
        entries.append(BoundaryEntry(O, pm, mult))
    if stab is None:
        return OrbitReport(P, dim, pre, None, None, entries, None, None, ext, residuals)
    degree = _exact_quotient(pre, stab, "predegree")
    smooth = all(e.multiplicity == 1 for e in entries)
    codim1 = all(e.multiplicity == 1 for e in entries if e.orbit.kind == "pair")
    return OrbitReport(P, dim, pre, stab, degree, entries, smooth, codim1, ext, residuals)
