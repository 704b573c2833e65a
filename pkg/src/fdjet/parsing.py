"""Text grammar for series, maps, vector fields and ideals, and the matching printers.

Scalars use variables ``x, y, z`` (aliases of ``z1, z2, z3``) or ``z1 .. zn``,
integer literals, ``+ - * / ^`` (``**`` also accepted) and parentheses. Division
needs a unit denominator and is expanded to the cutoff. A map is a parenthesized
comma-separated tuple; a vector field is a sum of ``(a)*d/dz_i`` terms.
"""
from __future__ import annotations

import re
from typing import Sequence

from .errors import ParseError
from .linalg import Q, Rational
from .series import (
    DiffeoJet,
    Monomial,
    Terms,
    TruncatedSeries,
    _add_terms,
    _inverse_terms,
    _mul_terms,
    mono_key,
    unit,
)

_ALIASES = {"x": 1, "y": 2, "z": 3}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<dvar>d/d(?:z\d+|[xyz]))
  | (?P<num>\d+)
  | (?P<var>z\d+|[xyz])
  | (?P<pow>\*\*|\^)
  | (?P<op>[-+*/(),])
    """,
    re.VERBOSE,
)


def _var_index(name: str) -> int:
    if name in _ALIASES:
        return _ALIASES[name]
    idx = int(name[1:])
    if idx < 1:
        raise ParseError(f"variable index must start at 1: {name}")
    return idx


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def infer_n(text: str) -> int:
    """Largest variable index appearing in ``text`` (at least 1)."""
    best = 1
    for kind, val, _ in tokenize(text):
        if kind == "var":
            best = max(best, _var_index(val))
        elif kind == "dvar":
            best = max(best, _var_index(val[3:]))
    return best


class _Field:
    """Intermediate value for vector-field expressions: one term dict per component."""

    def __init__(self, comps: list[Terms]):
        self.comps = comps


class _Parser:
    def __init__(self, text: str, n: int, cutoff: int | None):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.n = n
        self.cutoff = cutoff

    # -- token helpers
    def peek(self):
        return self.toks[self.i]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val: str):
        tok = self.next()
        if tok[1] != val:
            raise ParseError(f"expected {val!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def at_end(self):
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])

    # -- value helpers
    def const(self, c) -> Terms:
        c = Q(c)
        return {(0,) * self.n: c} if c else {}

    def add(self, a, b, sign, pos):
        if isinstance(a, _Field) != isinstance(b, _Field):
            raise ParseError("cannot add a scalar and a vector field", pos)
        if isinstance(a, _Field):
            return _Field([_add_terms(x, y, sign) for x, y in zip(a.comps, b.comps)])
        return _add_terms(a, b, sign)

    def mul(self, a, b, pos):
        if isinstance(a, _Field) and isinstance(b, _Field):
            raise ParseError("cannot multiply two vector fields", pos)
        if isinstance(a, _Field):
            a, b = b, a
        if isinstance(b, _Field):
            return _Field([_mul_terms(a, c, self.cutoff) for c in b.comps])
        return _mul_terms(a, b, self.cutoff)

    def invert(self, a, pos) -> Terms:
        if isinstance(a, _Field):
            raise ParseError("cannot divide by a vector field", pos)
        zero = (0,) * self.n
        if not a.get(zero):
            raise ParseError("denominator is not a unit (zero constant term)", pos)
        if self.cutoff is None:
            if any(m != zero for m in a):
                raise ParseError("division by a non-constant needs a truncation level", pos)
            return {zero: 1 / Q(a[zero])}
        return _inverse_terms(a, self.n, self.cutoff)

    # -- grammar
    def expr(self):
        tok = self.peek()
        if tok[1] in "+-" and tok[0] == "op":
            self.next()
            val = self.term()
            if tok[1] == "-":
                val = self.mul(self.const(-1), val, tok[2])
        else:
            val = self.term()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.next()
                rhs = self.term()
                val = self.add(val, rhs, 1 if tok[1] == "+" else -1, tok[2])
            else:
                return val

    def term(self):
        val = self.unary()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.next()
                val = self.mul(val, self.unary(), tok[2])
            elif tok[0] == "op" and tok[1] == "/":
                self.next()
                den = self.unary()
                val = self.mul(val, self.invert(den, tok[2]), tok[2])
            elif tok[0] in ("num", "var", "dvar") or tok[1] == "(":
                # implicit multiplication, e.g. 2x or 3(x+y)
                val = self.mul(val, self.unary(), tok[2])
            else:
                return val

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.next()
            val = self.unary()
            return val if tok[1] == "+" else self.mul(self.const(-1), val, tok[2])
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] != "pow":
            return base
        self.next()
        sign = 1
        paren = False
        if self.peek()[1] == "(":
            self.next()
            paren = True
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.next()[1] == "-" else 1
        etok = self.next()
        if etok[0] != "num":
            raise ParseError("exponent must be an integer literal", etok[2])
        if paren:
            self.expect(")")
        e = sign * int(etok[1])
        if isinstance(base, _Field):
            raise ParseError("cannot raise a vector field to a power", tok[2])
        if e < 0:
            base = self.invert(base, tok[2])
            e = -e
        out = self.const(1)
        for _ in range(e):
            out = self.mul(out, base, tok[2])
            if not out:
                break
        return out

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return self.const(int(val))
        if kind == "var":
            idx = _var_index(val)
            if idx > self.n:
                raise ParseError(f"variable {val} out of range for n={self.n}", pos)
            if self.cutoff is not None and self.cutoff < 1:
                return {}
            return {unit(self.n, idx - 1): Q(1)}
        if kind == "dvar":
            idx = _var_index(val[3:])
            if idx > self.n:
                raise ParseError(f"{val} out of range for n={self.n}", pos)
            comps: list[Terms] = [{} for _ in range(self.n)]
            comps[idx - 1] = self.const(1)
            return _Field(comps)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)

    def tuple_(self) -> list:
        self.expect("(")
        items = [self.expr()]
        while self.peek()[1] == ",":
            self.next()
            items.append(self.expr())
        self.expect(")")
        self.at_end()
        return items


def _scalar(val, pos=0) -> Terms:
    if isinstance(val, _Field):
        raise ParseError("expected a scalar expression, found a vector field", pos)
    return val


def parse_series(text: str, n: int, cutoff: int) -> TruncatedSeries:
    p = _Parser(text, n, cutoff)
    val = _scalar(p.expr())
    p.at_end()
    return TruncatedSeries(n, cutoff, val)


def parse_polynomial(text: str, n: int) -> TruncatedSeries:
    """Exact polynomial; returned with cutoff equal to its degree."""
    p = _Parser(text, n, None)
    val = _scalar(p.expr())
    p.at_end()
    degree = max((sum(m) for m in val), default=0)
    return TruncatedSeries(n, degree, val)


def split_tuple(text: str) -> int:
    """Number of top-level components of a parenthesized tuple."""
    depth = 0
    count = 1
    for ch in text.strip()[1:-1]:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            count += 1
    return count


def parse_map(text: str, cutoff: int, n: int | None = None) -> DiffeoJet:
    """Parse ``(f1, ..., fn)`` into a DiffeoJet; n defaults to the tuple length."""
    text = text.strip()
    if not text.startswith("("):
        raise ParseError("a map must be a parenthesized tuple", 0)
    n = split_tuple(text) if n is None else n
    p = _Parser(text, n, cutoff)
    items = [_scalar(v) for v in p.tuple_()]
    if len(items) != n:
        raise ParseError(f"map has {len(items)} components, expected {n}", 0)
    return DiffeoJet([TruncatedSeries(n, cutoff, t) for t in items])


def parse_vector_field_components(text: str, n: int, cutoff: int) -> list[TruncatedSeries]:
    p = _Parser(text, n, cutoff)
    val = p.expr()
    p.at_end()
    if isinstance(val, _Field):
        comps = val.comps
    elif not val:
        comps = [{} for _ in range(n)]
    else:
        raise ParseError("expected a vector field (terms of the form (a)*d/dz)", 0)
    return [TruncatedSeries(n, cutoff, c) for c in comps]


# ------------------------------------------------------------------ printing


def var_names(n: int) -> list[str]:
    return ["x", "y", "z"][:n] if n <= 3 else [f"z{i + 1}" for i in range(n)]


def format_monomial(m: Monomial, names: Sequence[str]) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def _format_terms(items, names) -> str:
    pieces: list[str] = []
    for m, c in items:
        mono = format_monomial(m, names)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(pieces) if pieces else "0"


def format_series(f: TruncatedSeries) -> str:
    return _format_terms(f.items(), var_names(f.n))


def format_map(phi: DiffeoJet) -> str:
    return "(" + ", ".join(format_series(c) for c in phi) + ")"


def format_field_components(comps: Sequence[TruncatedSeries]) -> str:
    if not comps:
        return "0"
    names = var_names(comps[0].n)
    parts = [f"({format_series(c)})*d/d{name}" for c, name in zip(comps, names) if not c.is_zero()]
    return " + ".join(parts) if parts else "0"


def sort_terms(terms: Terms) -> list[tuple[Monomial, Rational]]:
    return [(m, terms[m]) for m in sorted(terms, key=mono_key)]
