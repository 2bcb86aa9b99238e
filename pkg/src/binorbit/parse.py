"""Text input for binary forms.

Grammar (whitespace is free)::

    form   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*'? factor)*
    factor := atom ('^' uint)?
    atom   := INT ['/' INT] | 'x' | 'y' | 't' | '(' form ')'

``t`` is the generator of an algebraic extension and may only appear when
its minimal polynomial is given.
"""
from __future__ import annotations

import re
from collections import defaultdict

from .algebra import QQ, ExtensionField
from .errors import FieldError, ParseError
from .forms import BinaryForm

__all__ = ["parse_field", "parse_form", "parse_partition"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([xyt])|(\S))")

Mono = tuple  # exponents (i, j, k) of x, y, t


def _tokens(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        num, var, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            out.append(("num", num, start))
        elif var is not None:
            out.append(("var", var, start))
        elif op in "+-*^()/":
            out.append(("op", op, start))
        else:
            raise ParseError(f"unexpected character {op!r} at position {start}")
        pos = m.end()
    return out


def _mul(p: dict, q: dict) -> dict:
    out: dict = defaultdict(lambda: QQ.zero)
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            key = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            out[key] = out[key] + c1 * c2
    return {m: c for m, c in out.items() if c != 0}


def _add(p: dict, q: dict, sign: int = 1) -> dict:
    out = dict(p)
    for m, c in q.items():
        out[m] = out.get(m, QQ.zero) + sign * c
    return {m: c for m, c in out.items() if c != 0}


def _pow(p: dict, n: int) -> dict:
    out = {(0, 0, 0): QQ.one}
    while n:
        if n & 1:
            out = _mul(out, p)
        p = _mul(p, p)
        n >>= 1
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"unexpected {tok[1]!r} at position {tok[2]}")
        self.i += 1
        return tok

    def parse(self) -> dict:
        if not self.toks:
            raise ParseError("empty expression")
        p = self.form()
        if self.peek() is not None:
            tok = self.peek()
            raise ParseError(f"unexpected {tok[1]!r} at position {tok[2]}")
        return p

    def form(self) -> dict:
        sign = 1
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            sign = -1 if tok[1] == "-" else 1
        acc = _add({}, self.term(), sign)
        while (tok := self.peek()) and tok[0] == "op" and tok[1] in "+-":
            self.i += 1
            acc = _add(acc, self.term(), -1 if tok[1] == "-" else 1)
        return acc

    def _starts_factor(self, tok) -> bool:
        return tok is not None and (tok[0] in ("num", "var") or tok[1] == "(")

    def term(self) -> dict:
        acc = self.factor()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] == "*":
                self.i += 1
                acc = _mul(acc, self.factor())
            elif self._starts_factor(tok):
                acc = _mul(acc, self.factor())
            else:
                return acc

    def factor(self) -> dict:
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.i += 1
            exp = self.take("num")
            return _pow(base, int(exp[1]))
        return base

    def atom(self) -> dict:
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            num = QQ(int(val))
            nxt = self.peek()
            if nxt and nxt[0] == "op" and nxt[1] == "/":
                self.i += 1
                den = int(self.take("num")[1])
                if den == 0:
                    raise ParseError(f"division by zero at position {nxt[2]}")
                num = num / den
            return {(0, 0, 0): num} if num != 0 else {}
        if kind == "var":
            return {{"x": (1, 0, 0), "y": (0, 1, 0), "t": (0, 0, 1)}[val]: QQ.one}
        if val == "(":
            inner = self.form()
            self.take("op", ")")
            return inner
        raise ParseError(f"unexpected {val!r} at position {pos}")


def _mono_str(m: Mono) -> str:
    parts = []
    for v, e in zip("xyt", m):
        if e:
            parts.append(v if e == 1 else f"{v}^{e}")
    return "*".join(parts) or "1"


def parse_field(minpoly: str | None):
    """``QQ`` or ``QQ[t]/(minpoly)``; the modulus must be squarefree."""
    if minpoly is None:
        return QQ
    p = _Parser(minpoly).parse()
    bad = [m for m in p if m[0] or m[1]]
    if bad:
        raise ParseError(f"minimal polynomial must be in t only; found {_mono_str(bad[0])}")
    deg = max((m[2] for m in p), default=0)
    if deg < 1:
        raise FieldError("minimal polynomial must have positive degree in t")
    coeffs = [p.get((0, 0, k), QQ.zero) for k in range(deg + 1)]
    try:
        return ExtensionField(QQ, coeffs, name="t")
    except ValueError as exc:
        raise FieldError(str(exc)) from exc


def parse_form(text: str, minpoly: str | None = None, field=None) -> BinaryForm:
    """Expand ``text`` into a :class:`BinaryForm` over ``QQ`` or ``QQ(t)``."""
    K = field if field is not None else parse_field(minpoly)
    p = _Parser(text).parse()
    if not p:
        raise ParseError("expression expands to the zero polynomial")
    uses_t = any(m[2] for m in p)
    if uses_t and K is QQ:
        raise FieldError("the generator t appears but no minimal polynomial was given (use --minpoly)")
    by_degree: dict[int, list[Mono]] = defaultdict(list)
    for m in p:
        by_degree[m[0] + m[1]].append(m)
    if len(by_degree) > 1:
        listing = "; ".join(
            f"degree {d}: " + ", ".join(sorted(_mono_str(m) for m in ms))
            for d, ms in sorted(by_degree.items())
        )
        raise ParseError(f"form is not homogeneous in x, y ({listing})")
    (d,) = by_degree
    if d == 0:
        raise ParseError("a binary form needs positive degree in x, y")
    coeffs = []
    for i in range(d + 1):
        tpoly: dict[int, object] = {}
        for m, c in p.items():
            if m[1] == i:
                tpoly[m[2]] = c
        if K is QQ:
            coeffs.append(tpoly.get(0, QQ.zero))
        else:
            top = max(tpoly, default=0)
            coeffs.append(K.from_poly([tpoly.get(k, QQ.zero) for k in range(top + 1)]))
    if all(K.is_zero(c) for c in coeffs):
        raise ParseError("expression reduces to zero modulo the minimal polynomial")
    return BinaryForm(tuple(coeffs), K)


def parse_partition(text: str) -> tuple[int, ...]:
    """``"3,1,1"`` (commas or spaces) as a tuple of positive integers."""
    parts = [s for s in re.split(r"[,\s]+", text.strip()) if s]
    try:
        values = tuple(int(s) for s in parts)
    except ValueError:
        raise ParseError(f"partition must list positive integers, got {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise ParseError(f"partition must list positive integers, got {text!r}")
    return values
