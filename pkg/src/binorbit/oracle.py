"""Independent checks: brute-force point counts and a numeric Hessian path.

Nothing here reuses the closed forms of :mod:`binorbit.invariants`; the
numeric Hessian is built from partial derivatives in floating point and
its zeros are counted with the argument principle.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np
from gmpy2 import mpc, mpfr, mpq

from .errors import NumericError
from .forms import BinaryForm, MultiplicityProfile, external_hessian, factorize, hessian
from .stabilizer import INF, complex_roots, default_embedding

__all__ = [
    "HessianCheck",
    "numeric_hessian_check",
    "oracle_pair_count",
    "oracle_predegree",
    "oracle_surface_degree",
]


def oracle_predegree(P: MultiplicityProfile) -> int:
    """Sum of ``m_i m_j m_k`` over ordered triples of distinct indices."""
    m = P.multiplicities
    total = 0
    for i in range(len(m)):
        for j in range(len(m)):
            if j == i:
                continue
            for k in range(len(m)):
                if k != i and k != j:
                    total += m[i] * m[j] * m[k]
    return total


def oracle_pair_count(P: MultiplicityProfile) -> int:
    """Sum of ``m_i m_j`` over ordered pairs of distinct indices (two points only)."""
    if P.s != 2:
        raise ValueError("pair count is only defined for forms on two points")
    m = P.multiplicities
    return sum(m[i] * m[j] for i, j in itertools.permutations(range(2), 2))


def oracle_surface_degree(P: MultiplicityProfile) -> int:
    """Pair count divided by the degree of the covering (2 when ``r = d/2``)."""
    count = oracle_pair_count(P)
    r, rest = P.multiplicities
    return count // 2 if r == rest else count


# -- numeric Hessian ----------------------------------------------------------------

@dataclass
class HessianCheck:
    """Outcome of :func:`numeric_hessian_check`; truthy when it passed."""

    ok: bool
    inconclusive: bool = False
    identically_zero: bool = False
    internal: list[tuple[int, int]] = field(default_factory=list)  # (point multiplicity, zeros found)
    external_numeric: tuple[int, ...] = ()
    external_exact: tuple[int, ...] = ()
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


# A fixed rational change of coordinates; generic enough to move every point
# of the corpus off infinity.
_MOVE = ((1, mpq(2, 7)), (mpq(-3, 5), 1))


def _refine(poly: list, z, steps: int = 200):
    """Newton on a polynomial (highest degree first) from a rough start."""
    n = len(poly) - 1
    d = [c * (n - i) for i, c in enumerate(poly[:-1])]
    eps = mpfr(2) ** (-gmpy2.get_context().precision + 20)
    for _ in range(steps):
        step = _eval(poly, z) / _eval(d, z)
        z -= step
        if abs(step) <= eps * (1 + abs(z)):
            break
    return z


def _coefficients(F: BinaryForm) -> list:
    K = F.field
    if hasattr(K, "modulus"):
        if K.base.depth != 0:
            raise NumericError("numeric Hessian check supports one extension level")
        minpoly = [mpc(c) for c in reversed(K.modulus)]
        t = _refine(minpoly, mpc(default_embedding(K)[0]))
        out = []
        for a in F.coeffs:
            v = mpc(0)
            for c in reversed(a):
                v = v * t + c
            out.append(v)
        return out
    return [mpc(a) for a in F.coeffs]


def _compose(a: list, d: int) -> list:
    (p, q), (r, s) = _MOVE
    # F(p X + q Y, r X + s Y), coefficients of X^(d-i) Y^i.
    out = [mpc(0)] * (d + 1)
    for i, c in enumerate(a):
        if c == 0:
            continue
        poly = [mpc(1)]
        for (u, v), times in (((p, q), d - i), ((r, s), i)):
            for _ in range(times):
                poly = [
                    (poly[k] * u if k < len(poly) else 0) + (poly[k - 1] * v if k else 0)
                    for k in range(len(poly) + 1)
                ]
        for k, v in enumerate(poly):
            out[k] += c * v
    return out


def _hessian_coeffs(a: list, d: int) -> list:
    def conv(u, v):
        out = [mpc(0)] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            if x != 0:
                for j, y in enumerate(v):
                    out[i + j] += x * y
        return out

    fxx = [a[i] * (d - i) * (d - i - 1) for i in range(d - 1)]
    fyy = [a[i] * i * (i - 1) for i in range(2, d + 1)]
    fxy = [a[i] * (d - i) * i for i in range(1, d)]
    A, B = conv(fxx, fyy), conv(fxy, fxy)
    return [x - y for x, y in zip(A, B)]


def _eval(h: list, z):
    # Horner with coefficients highest degree first; for a form this is H(z, 1).
    acc = mpc(0)
    for c in h:
        acc = acc * z + c
    return acc


def _winding(h: list, center, radius, tol: float) -> int | None:
    """Zeros of ``H(x, 1)`` inside the circle, or ``None`` if the contour is unsafe."""
    n = max(32, 2 * len(h))
    two_pi_i = 2 * gmpy2.const_pi() * mpc(0, 1)
    while n <= 8192:
        vals = [_eval(h, center + radius * gmpy2.exp(two_pi_i * k / n)) for k in range(n)]
        mags = [abs(v) for v in vals]
        if min(mags) <= tol * max(mags):
            return None
        steps = [float(gmpy2.phase(vals[(k + 1) % n] / vals[k])) for k in range(n)]
        if max(abs(x) for x in steps) < 1.0:
            return round(sum(steps) / (2 * math.pi))
        n *= 2
    return None


def _counts(h: list, center, radius, tol: float, levels: int = 4) -> list:
    """Winding counts on circles shrinking by a factor 4 each time."""
    out = []
    for _ in range(levels):
        out.append(_winding(h, center, radius, tol))
        radius /= 4
    return out


def _newton_point(a: list, z, m: int):
    """Refine a point of multiplicity ``m`` as a simple root of ``g^(m-1)``."""
    g = list(a)
    for _ in range(m - 1):
        n = len(g) - 1
        g = [c * (n - i) for i, c in enumerate(g[:-1])]
    return _refine(g, z)


def _deflate(h: list, z, k: int) -> list:
    for _ in range(k):
        out = [h[0]]
        for c in h[1:-1]:
            out.append(c + out[-1] * z)
        h = out
    return h


def _cluster(points: list[complex], link: float) -> list[list[complex]]:
    clusters: list[list[complex]] = []
    for w in points:
        hit = [c for c in clusters if min(abs(w - x) for x in c) < link]
        merged = [w] + [x for c in hit for x in c]
        clusters = [c for c in clusters if not any(c is hc for hc in hit)] + [merged]
    return clusters


def numeric_hessian_check(F: BinaryForm, tol: float = 1e-8) -> HessianCheck:
    """Cluster the zeros of a numerically computed Hessian and compare with exact data.

    Internal zeros are counted at each point of ``F`` (expected ``2r - 2``);
    the remaining zeros are grouped and their sizes compared with the exact
    external profile.  Ambiguous clustering yields ``inconclusive=True``.
    """
    fac = factorize(F)
    P = fac.profile()
    d = F.degree
    bits = 100 + 20 * d
    with gmpy2.context(gmpy2.get_context(), precision=bits):
        a = _compose(_coefficients(F), d)
        if d < 2:
            return HessianCheck(ok=hessian(F) is None, identically_zero=True,
                                message="degree below 2")
        h = _hessian_coeffs(a, d)
        scale = max(abs(c) for c in a) ** 2 * d ** 4
        hmax = max(abs(c) for c in h)
        if hmax <= tol * scale:
            exact_zero = hessian(F) is None
            return HessianCheck(ok=exact_zero, identically_zero=True,
                                message="" if exact_zero else "numeric Hessian vanishes, exact one does not")
        if P.s < 2:
            return HessianCheck(ok=False, message="exact form is a power but numeric Hessian is not zero")
        D = 2 * d - 4
        if abs(h[0]) <= tol * hmax:
            return HessianCheck(ok=False, inconclusive=True, message="Hessian zero near infinity after moving")

        # Points of F in the moved chart: z -> M^{-1} z.
        (p, q), (r, s) = _MOVE
        det = p * s - q * r
        pts = []
        for z, m in complex_roots(F):
            if z == INF:
                X, Y = mpc(1), mpc(0)
            else:
                X, Y = mpc(z), mpc(1)
            u, v = (s * X - q * Y) / det, (-r * X + p * Y) / det
            pts.append((u / v, m))

        result = HessianCheck(ok=False, external_exact=external_hessian(F, fac).multiplicities)
        pts = [(_newton_point(a, z, m), m) for z, m in pts]
        internal_total = 0
        seps = []
        ext_poly = h
        for i, (z, m) in enumerate(pts):
            sep = min((abs(z - w) for j, (w, _) in enumerate(pts) if j != i), default=mpfr(1))
            seps.append(sep)
            counts = _counts(h, z, 0.3 * sep, tol)
            if None in counts[-2:] or counts[-1] != counts[-2]:
                result.inconclusive = True
                result.message = f"internal count at a {m}-fold point did not stabilise: {counts}"
                return result
            result.internal.append((m, counts[-1]))
            internal_total += counts[-1]
            ext_poly = _deflate(ext_poly, z, counts[-1])

        # External zeros: approximate roots of the deflated Hessian, grouped from
        # coarse to fine (a k-fold zero smears over ~eps^(1/k)); a grouping is
        # accepted when every group's winding count is constant on nested circles.
        approx = [complex(w) for w in np.roots(np.array([complex(c) for c in ext_poly]))]
        sizes = None
        scale = float(min(seps))
        for link in (0.2 * scale, 0.05 * scale, 0.01 * scale, 1e-3 * scale):
            clusters = _cluster(approx, link)
            centers = [mpc(complex(np.mean(c))) for c in clusters]
            others = centers + [z for z, _ in pts]
            found = []
            for i, c0 in enumerate(centers):
                gap = min((abs(c0 - o) for j, o in enumerate(others) if j != i),
                          default=mpfr(1))
                counts = _counts(h, c0, 0.3 * gap, tol)
                if any(k != len(clusters[i]) for k in counts):
                    break
                found.append(len(clusters[i]))
            else:
                sizes = found
                break
        if sizes is None:
            result.inconclusive = True
            result.message = "external zeros could not be grouped consistently"
            return result
        result.external_numeric = tuple(sorted(sizes, reverse=True))
        if internal_total + sum(sizes) != D:
            result.inconclusive = True
            result.message = f"zeros accounted for: {internal_total + sum(sizes)} of {D}"
            return result
        bad = [(m, k) for m, k in result.internal if k != 2 * m - 2]
        if bad:
            result.message = f"internal zero counts {bad} differ from 2r-2"
        elif result.external_numeric != result.external_exact:
            result.message = (
                f"external profile {result.external_numeric} != exact {result.external_exact}"
            )
        else:
            result.ok = True
        return result
