"""Exact arithmetic substrate.

Rationals are ``gmpy2.mpq``.  Algebraic extensions are quotients
``K[z]/(m(z))`` by a *squarefree* (not necessarily irreducible) monic
modulus; inverting a zero divisor raises :class:`SplitSignal` carrying the
coprime factorization of the modulus so the caller can rerun on each
branch (dynamic evaluation).

Polynomials are plain lists of field elements, lowest degree first, with no
trailing zeros; the zero polynomial is ``[]``.  Every polynomial routine
takes the coefficient field ``K`` as its last argument.
"""
from __future__ import annotations

import operator
from typing import Callable, Sequence

from gmpy2 import mpq

__all__ = [
    "QQ",
    "ExtensionField",
    "NotDivisibleError",
    "RationalField",
    "SplitSignal",
    "branch_over",
    "field_invert",
    "poly_add",
    "poly_degree",
    "poly_diff",
    "poly_divmod",
    "poly_eval",
    "poly_exact_divide",
    "poly_gcd",
    "poly_gcdex",
    "poly_monic",
    "poly_mul",
    "poly_neg",
    "poly_pow",
    "poly_scale",
    "poly_strip",
    "poly_sub",
    "yun_squarefree",
]


class SplitSignal(ArithmeticError):
    """A zero divisor was inverted in ``field``.

    ``factor_a * factor_b == field.modulus``; both factors are monic,
    nonconstant and coprime.
    """

    def __init__(self, field: ExtensionField, factor_a: list, factor_b: list):
        super().__init__(
            f"modulus of {field!r} splits into factors of degree "
            f"{len(factor_a) - 1} and {len(factor_b) - 1}"
        )
        self.field = field
        self.factor_a = factor_a
        self.factor_b = factor_b


class NotDivisibleError(ArithmeticError):
    """Exact division left a nonzero remainder."""


class RationalField:
    """The field of rational numbers; elements are ``mpq``."""

    depth = 0
    degree = 1
    zero = mpq(0)
    one = mpq(1)

    add = staticmethod(operator.add)
    sub = staticmethod(operator.sub)
    mul = staticmethod(operator.mul)
    neg = staticmethod(operator.neg)

    def __call__(self, value) -> mpq:
        if isinstance(value, tuple):
            raise TypeError("cannot coerce an extension element into QQ")
        return mpq(value)

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0

    def inv(self, a) -> mpq:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def to_str(self, a) -> str:
        return str(a)

    def to_complex(self, a, embedding=None) -> complex:
        return complex(float(a))

    def to_json(self, a):
        return str(a)

    def from_json(self, v) -> mpq:
        return mpq(v)

    def __repr__(self) -> str:
        return "QQ"

    def __reduce__(self):
        return "QQ"


QQ = RationalField()


class ExtensionField:
    """``base[z]/(modulus)`` for a monic squarefree ``modulus`` over ``base``.

    Elements are tuples of ``n = deg(modulus)`` base elements (coordinates on
    ``1, z, ..., z^(n-1)``), always fully reduced, so tuple equality is value
    equality.
    """

    def __init__(self, base, modulus: Sequence, name: str = "t", check: bool = True):
        modulus = poly_strip([base(c) for c in modulus], base)
        if len(modulus) < 2:
            raise ValueError("extension modulus must be nonconstant")
        modulus = poly_monic(modulus, base)
        self.base = base
        self.modulus = tuple(modulus)
        self.name = name
        self.degree = len(modulus) - 1
        self.depth = base.depth + 1
        n = self.degree
        self.zero = (base.zero,) * n
        self.one = (base.one,) + (base.zero,) * (n - 1)
        if n == 1:
            self.gen = (base.neg(modulus[0]),)
        else:
            self.gen = (base.zero, base.one) + (base.zero,) * (n - 2)
        if check:
            g = poly_gcd(modulus, poly_diff(modulus, base), base)
            if len(g) > 1:
                raise ValueError(f"extension modulus {self._mod_str()} is not squarefree")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExtensionField):
            return NotImplemented
        return self is other or (self.base == other.base and self.modulus == other.modulus)

    def __hash__(self) -> int:
        return hash((self.depth, self.modulus))

    # -- coercion -----------------------------------------------------------
    def __call__(self, value):
        if isinstance(value, tuple) and len(value) == self.degree and self._is_own(value):
            return value
        c = self.base(value)
        return (c,) + (self.base.zero,) * (self.degree - 1)

    def _is_own(self, value) -> bool:
        # Base elements of an extension base are tuples too; tell them apart by shape.
        if self.base.depth == 0:
            return True
        return isinstance(value[0], tuple) and len(value[0]) == self.base.degree

    def from_poly(self, p: Sequence):
        """Reduce a polynomial in the generator (over ``base``) to an element."""
        p = [self.base(c) for c in p]
        return self._reduce(p)

    def to_poly(self, a) -> list:
        return poly_strip(list(a), self.base)

    def _reduce(self, p: list):
        B, m, n = self.base, self.modulus, self.degree
        p = list(p)
        for k in range(len(p) - 1, n - 1, -1):
            c = p[k]
            if not B.is_zero(c):
                off = k - n
                for i in range(n):
                    if not B.is_zero(m[i]):
                        p[off + i] = B.sub(p[off + i], B.mul(c, m[i]))
        p = p[:n]
        if len(p) < n:
            p.extend([B.zero] * (n - len(p)))
        return tuple(p)

    # -- ring operations ----------------------------------------------------
    def add(self, a, b):
        return tuple(map(self.base.add, a, b))

    def sub(self, a, b):
        return tuple(map(self.base.sub, a, b))

    def neg(self, a):
        return tuple(map(self.base.neg, a))

    def mul(self, a, b):
        B = self.base
        n = self.degree
        if n == 1:
            return (B.mul(a[0], b[0]),)
        prod = [B.zero] * (2 * n - 1)
        for i, ai in enumerate(a):
            if B.is_zero(ai):
                continue
            for j, bj in enumerate(b):
                if not B.is_zero(bj):
                    prod[i + j] = B.add(prod[i + j], B.mul(ai, bj))
        return self._reduce(prod)

    def mul_gen(self, a):
        """Multiply by the generator (cheaper than a general product)."""
        B, m, n = self.base, self.modulus, self.degree
        if n == 1:
            return (B.mul(a[0], self.gen[0]),)
        top = a[-1]
        out = [B.zero] + list(a[:-1])
        if not B.is_zero(top):
            for i in range(n):
                if not B.is_zero(m[i]):
                    out[i] = B.sub(out[i], B.mul(top, m[i]))
        return tuple(out)

    def is_zero(self, a) -> bool:
        return all(self.base.is_zero(c) for c in a)

    def inv(self, a):
        """Inverse of ``a``; raises :class:`SplitSignal` on a zero divisor."""
        B = self.base
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        s, g = poly_gcdex(self.to_poly(a), list(self.modulus), B)
        if len(g) > 1:
            other = poly_exact_divide(list(self.modulus), g, B)
            raise SplitSignal(self, g, poly_monic(other, B))
        return self.from_poly(poly_scale(s, B.inv(g[0]), B))

    def with_modulus(self, modulus: Sequence) -> ExtensionField:
        # Factors of a squarefree modulus are squarefree.
        return ExtensionField(self.base, modulus, self.name, check=False)

    # -- presentation -------------------------------------------------------
    def to_str(self, a) -> str:
        terms = []
        for k in range(self.degree - 1, -1, -1):
            c = a[k]
            if self.base.is_zero(c):
                continue
            cs = self.base.to_str(c)
            if self.base.depth > 0 and k > 0 and ("+" in cs or " - " in cs):
                cs = f"({cs})"
            if k == 0:
                terms.append(cs)
            else:
                mono = self.name if k == 1 else f"{self.name}^{k}"
                terms.append(mono if cs == "1" else f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
        if not terms:
            return "0"
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    def _mod_str(self) -> str:
        B = self.base
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.modulus[k]
            if B.is_zero(c):
                continue
            cs = B.to_str(c)
            if B.depth > 0 and ("+" in cs or " - " in cs):
                cs = f"({cs})"
            mono = "" if k == 0 else self.name if k == 1 else f"{self.name}^{k}"
            if not mono:
                terms.append(cs)
            else:
                terms.append(mono if cs == "1" else f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
        out = terms[0]
        for t in terms[1:]:
            out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
        return out

    @property
    def modulus_str(self) -> str:
        return self._mod_str()

    def to_complex(self, a, embedding: Sequence[complex]) -> complex:
        """Evaluate numerically; ``embedding`` lists generator values, innermost first."""
        z = embedding[self.depth - 1]
        acc = 0j
        for c in reversed(a):
            acc = acc * z + self.base.to_complex(c, embedding)
        return acc

    def to_json(self, a):
        return [self.base.to_json(c) for c in a]

    def from_json(self, v):
        return tuple(self.base.from_json(c) for c in v)

    def __repr__(self) -> str:
        return f"{self.base!r}[{self.name}]/({self._mod_str()})"


def field_invert(e, K):
    """Inverse of ``e`` in ``K``; see :meth:`ExtensionField.inv`."""
    return K.inv(e)


# -- dense univariate polynomials ---------------------------------------------

def poly_strip(f: list, K) -> list:
    n = len(f)
    while n and K.is_zero(f[n - 1]):
        n -= 1
    return f[:n] if n != len(f) else f


def poly_degree(f: Sequence) -> int:
    """Degree, with ``-1`` for the zero polynomial."""
    return len(f) - 1


def poly_add(f: Sequence, g: Sequence, K) -> list:
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = K.add(out[i], c)
    return poly_strip(out, K)


def poly_neg(f: Sequence, K) -> list:
    return [K.neg(c) for c in f]


def poly_sub(f: Sequence, g: Sequence, K) -> list:
    return poly_add(f, poly_neg(g, K), K)


def poly_scale(f: Sequence, c, K) -> list:
    if K.is_zero(c):
        return []
    return poly_strip([K.mul(a, c) for a in f], K)


def poly_mul(f: Sequence, g: Sequence, K) -> list:
    if not f or not g:
        return []
    out = [K.zero] * (len(f) + len(g) - 1)
    add, mul, is_zero = K.add, K.mul, K.is_zero
    for i, a in enumerate(f):
        if is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = add(out[i + j], mul(a, b))
    return poly_strip(out, K)


def poly_pow(f: Sequence, n: int, K) -> list:
    result = [K.one]
    base = list(f)
    while n:
        if n & 1:
            result = poly_mul(result, base, K)
        n >>= 1
        if n:
            base = poly_mul(base, base, K)
    return result


def poly_diff(f: Sequence, K) -> list:
    return poly_strip([K.mul(K(i), f[i]) for i in range(1, len(f))], K)


def poly_eval(f: Sequence, x, K):
    acc = K.zero
    for c in reversed(f):
        acc = K.add(K.mul(acc, x), c)
    return acc


def poly_monic(f: Sequence, K) -> list:
    if not f:
        return []
    lc = f[-1]
    if lc == K.one:
        return list(f)
    return poly_scale(f, K.inv(lc), K)


def poly_divmod(f: Sequence, g: Sequence, K) -> tuple[list, list]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], poly_strip(r, K)
    inv_lc = K.inv(g[-1])
    q = [K.zero] * (len(r) - dg)
    sub, mul, is_zero = K.sub, K.mul, K.is_zero
    for k in range(len(r) - 1, dg - 1, -1):
        c = r[k]
        if is_zero(c):
            continue
        c = mul(c, inv_lc)
        q[k - dg] = c
        off = k - dg
        for i in range(dg + 1):
            if not is_zero(g[i]):
                r[off + i] = sub(r[off + i], mul(c, g[i]))
    return poly_strip(q, K), poly_strip(r[:dg], K)


def poly_exact_divide(f: Sequence, g: Sequence, K) -> list:
    """Quotient ``f / g``; raises :class:`NotDivisibleError` on a remainder."""
    q, r = poly_divmod(f, g, K)
    if r:
        raise NotDivisibleError(
            f"degree-{len(f) - 1} polynomial is not divisible by degree-{len(g) - 1} divisor"
        )
    return q


def _primitive_int(f: Sequence) -> list[int]:
    from gmpy2 import gcd, lcm, mpz
    den = mpz(1)
    for c in f:
        den = lcm(den, c.denominator)
    ints = [mpz(c * den) for c in f]
    g = mpz(0)
    for c in ints:
        g = gcd(g, c)
        if g == 1:
            break
    return [c // g for c in ints]


def _gcd_qq(f: Sequence, g: Sequence) -> list:
    # Primitive remainder sequence over Z keeps coefficient growth in check.
    from gmpy2 import gcd as igcd
    a, b = _primitive_int(f), _primitive_int(g)
    if len(a) < len(b):
        a, b = b, a
    while b:
        db = len(b) - 1
        lc = b[-1]
        r = list(a)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c == 0:
                continue
            r = [x * lc for x in r]
            off = k - db
            for i in range(db + 1):
                r[off + i] -= c * b[i]
        r = r[:db]
        while r and r[-1] == 0:
            r.pop()
        if r:
            cont = 0
            for c in r:
                cont = igcd(cont, c)
                if cont == 1:
                    break
            r = [c // cont for c in r]
        a, b = b, r
    return poly_monic([mpq(c) for c in a], QQ)


def poly_gcd(f: Sequence, g: Sequence, K) -> list:
    """Monic gcd.  Over an extension this may raise :class:`SplitSignal`."""
    f = poly_strip(list(f), K)
    g = poly_strip(list(g), K)
    if not f and not g:
        raise ValueError("gcd(0, 0) is undefined")
    if not f:
        return poly_monic(g, K)
    if not g:
        return poly_monic(f, K)
    if K is QQ and len(f) > 8 and len(g) > 8:
        return _gcd_qq(f, g)
    a, b = poly_monic(f, K), poly_monic(g, K)
    while b:
        _, r = poly_divmod(a, b, K)
        a, b = b, poly_monic(r, K)
    return a


def poly_gcdex(f: Sequence, g: Sequence, K) -> tuple[list, list]:
    """Return ``(s, h)`` with ``h = gcd(f, g)`` (not normalized) and ``s*f = h mod g``."""
    a, b = list(f), list(g)
    s0, s1 = [K.one], []
    while b:
        q, r = poly_divmod(a, b, K)
        a, b = b, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1, K), K)
    return s0, a


def yun_squarefree(f: Sequence, K) -> list[tuple[int, list]]:
    """Squarefree decomposition ``[(multiplicity, monic factor), ...]``.

    Factors are pairwise coprime and squarefree; their product (with
    multiplicities) equals ``f`` up to the leading coefficient.  Sorted by
    multiplicity.
    """
    f = poly_strip(list(f), K)
    if not f:
        raise ValueError("squarefree decomposition of the zero polynomial")
    if len(f) == 1:
        return []
    f = poly_monic(f, K)
    df = poly_diff(f, K)
    a = poly_gcd(f, df, K)
    b = poly_exact_divide(f, a, K)
    c = poly_exact_divide(df, a, K)
    d = poly_sub(c, poly_diff(b, K), K)
    out = []
    i = 1
    while len(b) > 1:
        a = poly_gcd(b, d, K) if d else poly_monic(b, K)
        b = poly_exact_divide(b, a, K)
        if len(a) > 1:
            out.append((i, a))
        if len(b) > 1:
            c = poly_exact_divide(d, a, K)
            d = poly_sub(c, poly_diff(b, K), K)
        i += 1
    return out


def branch_over(field: ExtensionField, compute: Callable[[ExtensionField], object]) -> list[tuple]:
    """Run ``compute`` over ``field``, splitting on zero divisors.

    Returns ``[(branch_field, result), ...]`` covering the roots of the
    original modulus exactly once.  Splits raised by a *different* field
    (e.g. the base) propagate.
    """
    out = []
    pending = [field]
    while pending:
        E = pending.pop()
        try:
            out.append((E, compute(E)))
        except SplitSignal as sig:
            if sig.field is not E:
                raise
            pending.append(E.with_modulus(sig.factor_b))
            pending.append(E.with_modulus(sig.factor_a))
    return out
