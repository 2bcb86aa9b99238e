"""Finite PGL(2)-stabilizers of point configurations, numerically.

Points of the projective line are handled as unit vectors in ``C^2`` (so the
point at infinity needs no special casing) and compared in the chordal
metric ``|z0 w1 - z1 w0|``.  Multiplicities always come from the exact
squarefree decomposition; only the root locations are floating point.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NumericError
from .forms import BinaryForm, INFINITY, factorize

__all__ = [
    "INF",
    "MobiusTransform",
    "StabilizerResult",
    "chordal",
    "complex_roots",
    "default_embedding",
    "find_equivalence",
    "mobius_through",
    "stabilizer",
]

#: The point at infinity as a ``SpherePoint``.
INF = complex(math.inf, 0.0)

DEFAULT_TOL = 1e-9


def _is_inf(z) -> bool:
    return z is INFINITY or cmath.isinf(z)


def _homog(z) -> np.ndarray:
    if _is_inf(z):
        return np.array([1.0 + 0j, 0j])
    v = np.array([complex(z), 1.0 + 0j])
    return v / np.linalg.norm(v)


def _dehomog(v: np.ndarray) -> complex:
    if abs(v[1]) <= 1e-300 or abs(v[1]) < 1e-15 * abs(v[0]):
        return INF
    return complex(v[0] / v[1])


def chordal(z, w) -> float:
    """Chordal distance (at most 1) between two points of the sphere."""
    a, b = _homog(z), _homog(w)
    return float(abs(a[0] * b[1] - a[1] * b[0]))


class MobiusTransform:
    """Invertible 2x2 complex matrix up to scalars.

    Stored with unit Frobenius norm and its largest entry (first in
    row-major order) real positive.
    """

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=complex).reshape(2, 2)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        norm = np.linalg.norm(m)
        if norm == 0 or abs(det) < 1e-14 * norm * norm:
            raise NumericError("singular matrix is not a Mobius transformation")
        m = m / norm
        flat = m.ravel()
        k = int(np.argmax(np.abs(flat) > np.abs(flat).max() * (1 - 1e-9)))
        m = m * (abs(flat[k]) / flat[k])
        self.matrix = m

    def __call__(self, z):
        return _dehomog(self.matrix @ _homog(z))

    def __matmul__(self, other: MobiusTransform) -> MobiusTransform:
        return MobiusTransform(self.matrix @ other.matrix)

    def inverse(self) -> MobiusTransform:
        (a, b), (c, d) = self.matrix
        return MobiusTransform([[d, -b], [-c, a]])

    def distance(self, other: MobiusTransform) -> float:
        """Frobenius distance minimized over the scalar phase."""
        ov = np.vdot(other.matrix, self.matrix)
        phase = ov / abs(ov) if abs(ov) > 0 else 1.0
        return float(np.linalg.norm(self.matrix - phase * other.matrix))

    def is_identity(self, tol: float = 1e-9) -> bool:
        return self.distance(MobiusTransform(np.eye(2))) < tol

    def to_json(self) -> list:
        return [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix]

    def __repr__(self) -> str:
        rows = ", ".join(
            "[" + ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in row) + "]" for row in self.matrix
        )
        return f"MobiusTransform([{rows}])"


def mobius_through(z1, z2, z3, w1, w2, w3, min_separation: float = 1e-9) -> MobiusTransform:
    """The unique transformation with ``z_i -> w_i``."""
    zs = [_homog(z) for z in (z1, z2, z3)]
    ws = [_homog(w) for w in (w1, w2, w3)]
    for pts in (zs, ws):
        for a, b in itertools.combinations(pts, 2):
            if abs(a[0] * b[1] - a[1] * b[0]) < min_separation:
                raise NumericError("points too close to define a Mobius transformation")
    return MobiusTransform(_frame(*ws) @ np.linalg.inv(_frame(*zs)))


def _frame(p1: np.ndarray, p2: np.ndarray, p3: np.ndarray) -> np.ndarray:
    # Matrix sending 0 -> p1, 1 -> p2, infinity -> p3.
    basis = np.column_stack([p3, p1])
    lam, mu = np.linalg.solve(basis, p2)
    return np.column_stack([lam * p3, mu * p1])


# -- roots ----------------------------------------------------------------------

def default_embedding(K) -> list[complex]:
    """Complex values for the generators of ``K`` (innermost first).

    For each level the root of the minimal polynomial with the largest
    imaginary part (then real part) is used.
    """
    out: list[complex] = []
    levels = []
    F = K
    while getattr(F, "depth", 0) > 0:
        levels.append(F)
        F = F.base
    for E in reversed(levels):
        coeffs = [E.base.to_complex(c, out) for c in E.modulus]
        roots = np.roots(coeffs[::-1])
        best = max(roots, key=lambda z: (round(z.imag, 9), round(z.real, 9)))
        out.append(complex(best))
    return out


def _relative_residual(coeffs: np.ndarray, z: complex) -> float:
    scale = np.polyval(np.abs(coeffs), abs(z))
    value = abs(np.polyval(coeffs, z))
    return float(value / scale) if scale > 0 else float(value)


def _numeric_roots(coeffs: list[complex]) -> list[complex]:
    # coeffs lowest degree first, squarefree.
    c = np.array(coeffs, dtype=complex)
    if len(c) < 2:
        return []
    roots = np.roots(c[::-1])
    rev = c[::-1]
    d1 = np.polyder(c[::-1])
    rc = c.copy()  # reversed chart: w = 1/z, polynomial coefficients reversed
    d1r = np.polyder(rc)
    out = []
    deg = len(c) - 1
    for z in roots:
        z = complex(z)
        if abs(z) <= 1.0:
            for _ in range(8):
                step = np.polyval(rev, z) / np.polyval(d1, z)
                z -= step
                if abs(step) < 1e-16 * max(1.0, abs(z)):
                    break
            resid = _relative_residual(rev, z)
        else:
            w = 1 / z
            for _ in range(8):
                step = np.polyval(rc, w) / np.polyval(d1r, w)
                w -= step
                if abs(step) < 1e-16 * max(1.0, abs(w)):
                    break
            resid = _relative_residual(rc, w)
            z = INF if w == 0 else 1 / w
        if not resid < 1e-9 * max(1, deg):
            raise NumericError(f"root polishing failed: relative residual {resid:.3g}")
        out.append(z)
    return out


def complex_roots(F: BinaryForm, embedding: Sequence[complex] | None = None) -> list[tuple[complex, int]]:
    """Numeric points of ``F`` with their exact multiplicities."""
    K = F.field
    if embedding is None:
        embedding = default_embedding(K)
    fac = factorize(F)
    out = []
    for j, q in fac.affine:
        coeffs = [K.to_complex(c, embedding) for c in q]
        out.extend((z, j) for z in _numeric_roots(coeffs))
    if fac.at_infinity:
        out.append((INF, fac.at_infinity))
    return out


# -- stabilizer -------------------------------------------------------------------

@dataclass
class StabilizerResult:
    order: int
    elements: list[MobiusTransform]
    min_separation: float
    certification: float
    worst_accepted: float
    best_rejected: float


def _point_matrix(roots) -> tuple[np.ndarray, np.ndarray]:
    V = np.column_stack([_homog(z) for z, _ in roots])
    mults = np.array([m for _, m in roots])
    return V, mults


def _min_separation(V: np.ndarray) -> float:
    D = np.abs(np.outer(V[0], V[1]) - np.outer(V[1], V[0]))
    np.fill_diagonal(D, np.inf)
    return float(D.min()) if D.size > 1 else math.inf


def _match_residual(M: np.ndarray, V: np.ndarray, W: np.ndarray, same: np.ndarray) -> float:
    # How far M maps the points V onto the points W (respecting multiplicity).
    img = M @ V
    img = img / np.linalg.norm(img, axis=0)
    D = np.abs(np.outer(img[0], W[1]) - np.outer(img[1], W[0]))
    D = np.where(same, D, 2.0)
    nn = D.argmin(axis=1)
    if len(set(nn.tolist())) != len(nn):
        return 1.0
    return float(D[np.arange(len(nn)), nn].max())


def _choose_base(mults: np.ndarray, V: np.ndarray) -> tuple[int, int, int]:
    classes: dict[int, list[int]] = {}
    for i, m in enumerate(mults.tolist()):
        classes.setdefault(m, []).append(i)
    best_cost, best_combo = None, None
    for combo in itertools.combinations_with_replacement(sorted(classes), 3):
        cost, used = 1, {}
        for m in combo:
            avail = len(classes[m]) - used.get(m, 0)
            if avail <= 0:
                cost = None
                break
            cost *= avail
            used[m] = used.get(m, 0) + 1
        if cost is not None and (best_cost is None or cost < best_cost):
            best_cost, best_combo = cost, combo
    pools = [classes[m][:8] for m in best_combo]
    best, best_sep = None, -1.0
    for triple in itertools.product(*pools):
        if len(set(triple)) < 3:
            continue
        sep = min(
            abs(V[0, i] * V[1, j] - V[1, i] * V[0, j])
            for i, j in itertools.combinations(triple, 2)
        )
        if sep > best_sep:
            best, best_sep = triple, sep
    return best


def _candidates(base, mults_src, mults_dst):
    by_mult: dict[int, list[int]] = {}
    for i, m in enumerate(mults_dst.tolist()):
        by_mult.setdefault(m, []).append(i)
    pools = [by_mult.get(int(mults_src[b]), []) for b in base]
    for t in itertools.product(*pools):
        if len(set(t)) == 3:
            yield t


def _frames(P1: np.ndarray, P2: np.ndarray, P3: np.ndarray) -> np.ndarray:
    # Batched _frame: rows of P1, P2, P3 are points; returns (N, 2, 2).
    det = P3[:, 0] * P1[:, 1] - P1[:, 0] * P3[:, 1]
    lam = (P2[:, 0] * P1[:, 1] - P1[:, 0] * P2[:, 1]) / det
    mu = (P3[:, 0] * P2[:, 1] - P2[:, 0] * P3[:, 1]) / det
    out = np.empty((len(det), 2, 2), dtype=complex)
    out[:, :, 0] = lam[:, None] * P3
    out[:, :, 1] = mu[:, None] * P1
    return out


#: Candidates whose test points land farther than this from any point are
#: dropped before the full match; their distance still bounds the best rejection.
_PREFILTER = 1e-3


def _search(V, mults, W, mults_w, base, tol, stop_at_first=False):
    same = mults[:, None] == mults_w[None, :]
    cand = np.array(list(_candidates(base, mults, mults_w)), dtype=int).reshape(-1, 3)
    accepted, worst_acc, best_rej = [], 0.0, math.inf
    if not len(cand):
        return accepted, worst_acc, best_rej
    Pz_inv = np.linalg.inv(_frame(*(V[:, b] for b in base)))
    Ms = _frames(W[:, cand[:, 0]].T, W[:, cand[:, 1]].T, W[:, cand[:, 2]].T) @ Pz_inv
    # Cheap lower bound on the match residual from a few non-base points.
    lower = np.zeros(len(cand))
    for i in [i for i in range(V.shape[1]) if i not in base][:3]:
        img = Ms @ V[:, i]
        img = img / np.linalg.norm(img, axis=1, keepdims=True)
        Wi = W[:, same[i]]
        D = np.abs(np.outer(img[:, 0], Wi[1]) - np.outer(img[:, 1], Wi[0]))
        lower = np.maximum(lower, D.min(axis=1))
    dropped = lower > _PREFILTER
    if dropped.any():
        best_rej = float(lower[dropped].min())
    for M in Ms[~dropped]:
        res = _match_residual(M, V, W, same)
        if res <= tol:
            accepted.append(MobiusTransform(M))
            worst_acc = max(worst_acc, res)
            if stop_at_first:
                break
        else:
            best_rej = min(best_rej, res)
    return accepted, worst_acc, best_rej


def stabilizer(F: BinaryForm, tol: float = DEFAULT_TOL, base: Sequence[int] | None = None,
               embedding: Sequence[complex] | None = None) -> StabilizerResult:
    """Group of Mobius transformations permuting the points of ``F`` (with multiplicities).

    ``base`` optionally fixes the indices (into :func:`complex_roots`) of the
    base triple.  Fails with :class:`NumericError` when some rejected
    candidate comes within ``10 * tol`` of acceptance.
    """
    roots = complex_roots(F, embedding)
    if len(roots) < 3:
        raise ValueError("stabilizer is infinite for forms on fewer than 3 points")
    V, mults = _point_matrix(roots)
    sep = _min_separation(V)
    if sep < 100 * tol:
        raise NumericError(f"roots are not separated at tolerance {tol:g} (min distance {sep:.3g})")
    if base is None:
        base = _choose_base(mults, V)
    base = tuple(base)
    if len(set(base)) != 3:
        raise ValueError("base triple must consist of three distinct points")
    accepted, worst, best_rej = _search(V, mults, V, mults, base, tol)
    if not accepted:
        raise NumericError("identity was not recognized; tolerance too tight")
    if best_rej < 10 * tol:
        raise NumericError(
            f"ambiguous tolerance: a rejected candidate has residual {best_rej:.3g} "
            f"within 10x of tol={tol:g}"
        )
    elements: list[MobiusTransform] = []
    for M in accepted:
        if all(M.distance(E) > 1e-6 for E in elements):
            elements.append(M)
    cert = best_rej / max(worst, 1e-300)
    return StabilizerResult(len(elements), elements, sep, cert, worst, best_rej)


def find_equivalence(F: BinaryForm, G: BinaryForm, tol: float = DEFAULT_TOL) -> MobiusTransform | None:
    """A transformation carrying the points of ``F`` onto those of ``G``, if any."""
    rf, rg = complex_roots(F), complex_roots(G)
    if sorted(m for _, m in rf) != sorted(m for _, m in rg):
        return None
    if len(rf) < 3:
        raise ValueError("equivalence search needs at least 3 distinct points")
    V, mv = _point_matrix(rf)
    W, mw = _point_matrix(rg)
    base = _choose_base(mv, V)
    found, _, _ = _search(V, mv, W, mw, base, tol, stop_at_first=True)
    return found[0] if found else None
