"""Truncated multivariate power series and jets of formal diffeomorphisms.

A ``TruncatedSeries`` is an element of Q[[z_1..z_n]] modulo terms of degree > cutoff,
stored sparsely as ``{exponent tuple: rational}``. Coefficients are gmpy2 ``mpq``
values, which compare and hash like ``fractions.Fraction`` but multiply much faster. A ``DiffeoJet`` is an n-tuple of
such series with zero constant term and invertible linear part; composition is
``(phi o psi)(z) = phi(psi(z))``.
"""
from __future__ import annotations

from functools import cached_property
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from . import linalg
from .errors import DimensionMismatchError, LevelError, NotADiffeomorphismError
from .linalg import Q, Rational

Monomial = tuple[int, ...]
Terms = dict[Monomial, Rational]


def mono_key(m: Monomial) -> tuple:
    """Graded-lex sort key, ascending: lower degree first, then x before y."""
    return (sum(m), tuple(-e for e in m))


def monomials(n: int, degree: int) -> list[Monomial]:
    """All exponent tuples of the given total degree, in graded-lex order."""
    if n == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(n - 1, degree - first):
            out.append((first,) + rest)
    return out


def monomial_basis(n: int, lo: int, hi: int) -> list[Monomial]:
    return [m for d in range(lo, hi + 1) for m in monomials(n, d)]


def count_monomials(n: int, lo: int, hi: int) -> int:
    """Number of monomials in n variables with degree in [lo, hi]."""
    if hi < lo:
        return 0
    below = comb(n + lo - 1, n) if lo > 0 else 0
    return comb(n + hi, n) - below


def unit(n: int, i: int) -> Monomial:
    return tuple(int(j == i) for j in range(n))


# ------------------------------------------------------------------ term kernels


def _add_terms(a: Mapping, b: Mapping, scale=1) -> Terms:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + scale * c
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _mul_terms(a: Mapping, b: Mapping, cutoff: int | None) -> Terms:
    if not a or not b:
        return {}
    bb = sorted(((sum(m), m, c) for m, c in b.items()), key=lambda t: t[0])
    out: Terms = {}
    for ma, ca in a.items():
        da = sum(ma)
        for db, mb, cb in bb:
            if cutoff is not None and da + db > cutoff:
                break
            m = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _truncate_terms(a: Mapping, cutoff: int) -> Terms:
    return {m: c for m, c in a.items() if sum(m) <= cutoff}


def _order(a: Mapping) -> float | int:
    return min((sum(m) for m in a), default=float("inf"))


def _inverse_terms(a: Mapping, n: int, cutoff: int) -> Terms:
    """Multiplicative inverse of a unit (nonzero constant term) modulo degree > cutoff."""
    zero = (0,) * n
    c0 = a.get(zero, 0)
    if not c0:
        raise ZeroDivisionError("series is not a unit")
    # 1/(c0 (1 - h)) = (1/c0) sum h^m with h of order >= 1
    inv0 = 1 / Q(c0)
    h = {m: -c * inv0 for m, c in a.items() if m != zero}
    out: Terms = {zero: inv0}
    power: Terms = {zero: Q(1)}
    for _ in range(cutoff):
        power = _mul_terms(power, h, cutoff)
        if not power:
            break
        out = _add_terms(out, power, inv0)
    return out


def _substitute_terms(f: Mapping, comps: Sequence[Mapping], n: int, cutoff: int,
                      images: dict | None = None) -> Terms:
    """f(comps) truncated; comps must have zero constant term.

    ``images`` caches monomial images and may be shared between calls with the same comps.
    """
    zero = (0,) * n
    if images is None:
        images = {}
    images.setdefault(zero, {zero: Q(1)})

    def image(m: Monomial) -> Terms:
        got = images.get(m)
        if got is None:
            i = max(j for j, e in enumerate(m) if e)
            prev = m[:i] + (m[i] - 1,) + m[i + 1:]
            got = _mul_terms(image(prev), comps[i], cutoff)
            images[m] = got
        return got

    out: Terms = {}
    for m in sorted(f, key=mono_key):
        c = f[m]
        for mm, v in image(m).items():
            out[mm] = out.get(mm, 0) + c * v
    return {m: c for m, c in out.items() if c}


# ------------------------------------------------------------------ series


class TruncatedSeries:
    """Immutable sparse truncated power series with exact rational coefficients."""

    def __init__(self, n: int, cutoff: int, terms: Mapping[Monomial, object] | None = None):
        if n < 1:
            raise ValueError("need at least one variable")
        if cutoff < 0:
            raise LevelError(f"negative cutoff {cutoff}")
        clean: Terms = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != n or min(m) < 0:
                raise DimensionMismatchError(f"bad multi-index {m} for n={n}")
            c = Q(c)
            if c and sum(m) <= cutoff:
                clean[m] = clean.get(m, 0) + c
        self.n = n
        self.cutoff = cutoff
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, n: int, cutoff: int, terms: Terms) -> "TruncatedSeries":
        obj = cls.__new__(cls)
        obj.n, obj.cutoff, obj.terms = n, cutoff, terms
        return obj

    @classmethod
    def zero(cls, n: int, cutoff: int) -> "TruncatedSeries":
        return cls._raw(n, cutoff, {})

    @classmethod
    def constant(cls, c, n: int, cutoff: int) -> "TruncatedSeries":
        return cls(n, cutoff, {(0,) * n: c})

    @classmethod
    def variable(cls, i: int, n: int, cutoff: int) -> "TruncatedSeries":
        return cls(n, cutoff, {unit(n, i): 1})

    # -- inspection
    @cached_property
    def order(self) -> float | int:
        return _order(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, m: Monomial) -> Rational:
        return self.terms.get(tuple(m), Q(0))

    @property
    def constant_term(self) -> Rational:
        return self.coefficient((0,) * self.n)

    def homogeneous_part(self, d: int) -> "TruncatedSeries":
        return TruncatedSeries._raw(self.n, self.cutoff, {m: c for m, c in self.terms.items() if sum(m) == d})

    def items(self) -> Iterator[tuple[Monomial, Rational]]:
        """Terms in graded-lex order."""
        for m in sorted(self.terms, key=mono_key):
            yield m, self.terms[m]

    def _check(self, other: "TruncatedSeries") -> None:
        if self.n != other.n or self.cutoff != other.cutoff:
            raise DimensionMismatchError(
                f"series mismatch: (n={self.n}, k={self.cutoff}) vs (n={other.n}, k={other.cutoff})"
            )

    # -- arithmetic
    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.n, self.cutoff)
        self._check(other)
        return TruncatedSeries._raw(self.n, self.cutoff, _add_terms(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.n, self.cutoff, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(other, self.n, self.cutoff)
        self._check(other)
        return TruncatedSeries._raw(self.n, self.cutoff, _add_terms(self.terms, other.terms, -1))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            self._check(other)
            return TruncatedSeries._raw(self.n, self.cutoff, _mul_terms(self.terms, other.terms, self.cutoff))
        c = Q(other)
        if not c:
            return TruncatedSeries.zero(self.n, self.cutoff)
        return TruncatedSeries._raw(self.n, self.cutoff, {m: c * v for m, v in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return self * (1 / Q(other))

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = TruncatedSeries.constant(1, self.n, self.cutoff)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def inverse(self) -> "TruncatedSeries":
        return TruncatedSeries._raw(self.n, self.cutoff, _inverse_terms(self.terms, self.n, self.cutoff))

    def derivative(self, i: int) -> "TruncatedSeries":
        """Partial derivative in z_i. The cutoff is kept (top-degree info is lost, not invented)."""
        out: Terms = {}
        for m, c in self.terms.items():
            if m[i]:
                out[m[:i] + (m[i] - 1,) + m[i + 1:]] = c * m[i]
        return TruncatedSeries._raw(self.n, self.cutoff, out)

    def truncate(self, level: int) -> "TruncatedSeries":
        if level > self.cutoff:
            raise LevelError(f"cannot project level {self.cutoff} series to level {level}")
        if level < 0:
            raise LevelError(f"negative level {level}")
        return TruncatedSeries._raw(self.n, level, _truncate_terms(self.terms, level))

    def lift(self, level: int) -> "TruncatedSeries":
        """Re-tag at a higher cutoff, treating the stored terms as exact (a polynomial)."""
        if level < self.cutoff:
            return self.truncate(level)
        return TruncatedSeries._raw(self.n, level, dict(self.terms))

    # -- comparison
    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.n == other.n and self.cutoff == other.cutoff and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, self.cutoff, frozenset(self.terms.items())))

    def __repr__(self):
        from .parsing import format_series

        return f"TruncatedSeries({format_series(self)!r}, n={self.n}, cutoff={self.cutoff})"

    def __str__(self):
        from .parsing import format_series

        return format_series(self)


def ts_add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f + g


def ts_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    return f * g


# ------------------------------------------------------------------ diffeomorphism jets


class DiffeoJet:
    """Jet at level ``cutoff`` of a formal diffeomorphism of (C^n, 0)."""

    def __init__(self, components: Sequence[TruncatedSeries], *, check: bool = True):
        comps = tuple(components)
        if not comps:
            raise DimensionMismatchError("a map needs at least one component")
        n, k = comps[0].n, comps[0].cutoff
        if len(comps) != n:
            raise DimensionMismatchError(f"{len(comps)} components for n={n} variables")
        for c in comps:
            if c.n != n or c.cutoff != k:
                raise DimensionMismatchError("components disagree on n or cutoff")
        self.components = comps
        self.n = n
        self.cutoff = k
        if check:
            if k < 1:
                raise LevelError("a diffeomorphism jet needs cutoff >= 1")
            for i, c in enumerate(comps):
                if c.constant_term:
                    raise NotADiffeomorphismError(f"component {i + 1} has nonzero constant term")
            if not linalg.determinant(self.linear_part()):
                raise NotADiffeomorphismError("linear part is singular")

    @classmethod
    def identity(cls, n: int, cutoff: int) -> "DiffeoJet":
        return cls([TruncatedSeries.variable(i, n, cutoff) for i in range(n)], check=False)

    @classmethod
    def linear(cls, matrix: Sequence[Sequence], cutoff: int) -> "DiffeoJet":
        n = len(matrix)
        return cls([
            TruncatedSeries(n, cutoff, {unit(n, j): matrix[i][j] for j in range(n)}) for i in range(n)
        ])

    def linear_part(self) -> linalg.Matrix:
        """D_0 phi: row i holds the degree-1 coefficients of component i."""
        return [[c.coefficient(unit(self.n, j)) for j in range(self.n)] for c in self.components]

    def is_identity(self) -> bool:
        return self == DiffeoJet.identity(self.n, self.cutoff)

    def __getitem__(self, i: int) -> TruncatedSeries:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, DiffeoJet):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __matmul__(self, other: "DiffeoJet") -> "DiffeoJet":
        return map_compose(self, other)

    def __repr__(self):
        from .parsing import format_map

        return f"DiffeoJet({format_map(self)!r}, cutoff={self.cutoff})"

    def __str__(self):
        from .parsing import format_map

        return format_map(self)


def _check_pair(a, b) -> None:
    if a.n != b.n or a.cutoff != b.cutoff:
        raise DimensionMismatchError(
            f"operands disagree: (n={a.n}, k={a.cutoff}) vs (n={b.n}, k={b.cutoff})"
        )


def ts_substitute(f: TruncatedSeries, phi: DiffeoJet) -> TruncatedSeries:
    """f o phi, truncated at the shared cutoff."""
    _check_pair(f, phi)
    return _substitute_raw(f, phi.components)


def _substitute_raw(f: TruncatedSeries, comps: Sequence[TruncatedSeries], images: dict | None = None) -> TruncatedSeries:
    terms = _substitute_terms(f.terms, [c.terms for c in comps], f.n, f.cutoff, images)
    return TruncatedSeries._raw(f.n, f.cutoff, terms)


def map_compose(phi: DiffeoJet, psi: DiffeoJet) -> DiffeoJet:
    """(phi o psi)(z) = phi(psi(z))."""
    _check_pair(phi, psi)
    return DiffeoJet([_substitute_raw(c, psi.components) for c in phi.components], check=False)


def compose_all(maps: Iterable[DiffeoJet], n: int | None = None, cutoff: int | None = None) -> DiffeoJet:
    """Left-to-right composite m1 o m2 o ... ; empty input needs n and cutoff."""
    out = None
    for m in maps:
        out = m if out is None else map_compose(out, m)
    if out is None:
        if n is None or cutoff is None:
            raise ValueError("empty composite needs n and cutoff")
        return DiffeoJet.identity(n, cutoff)
    return out


def map_inverse(phi: DiffeoJet) -> DiffeoJet:
    """Inverse jet, solving phi(g) = z one degree per pass."""
    n, k = phi.n, phi.cutoff
    try:
        ainv = linalg.mat_inv(phi.linear_part())
    except ZeroDivisionError:
        raise NotADiffeomorphismError("linear part is singular") from None
    lin = [TruncatedSeries(n, k, {unit(n, j): ainv[i][j] for j in range(n)}) for i in range(n)]
    # phi = A z + h(z);  g = A^{-1} (z - h(g))
    higher = [TruncatedSeries._raw(n, k, {m: c for m, c in comp.terms.items() if sum(m) >= 2}) for comp in phi]
    coords = [TruncatedSeries.variable(i, n, k) for i in range(n)]
    g = list(lin)
    for _ in range(k - 1):
        hg = [_substitute_raw(h, g) for h in higher]
        rhs = [z - v for z, v in zip(coords, hg)]
        g = [sum((rhs[j] * ainv[i][j] for j in range(n) if ainv[i][j]), TruncatedSeries.zero(n, k)) for i in range(n)]
    return DiffeoJet(g, check=False)


def map_power(phi: DiffeoJet, e: int) -> DiffeoJet:
    """Integer iterate phi^e by repeated squaring (negative e uses the inverse)."""
    if e < 0:
        return map_power(map_inverse(phi), -e)
    out = DiffeoJet.identity(phi.n, phi.cutoff)
    base = phi
    while e:
        if e & 1:
            out = map_compose(out, base)
        e >>= 1
        if e:
            base = map_compose(base, base)
    return out


def commutator(a: DiffeoJet, b: DiffeoJet) -> DiffeoJet:
    """[a, b] = a o b o a^-1 o b^-1."""
    return compose_all([a, b, map_inverse(a), map_inverse(b)])


def project(phi: DiffeoJet, level: int) -> DiffeoJet:
    """pi_{k,l}: drop all terms of degree > level."""
    if level > phi.cutoff:
        raise LevelError(f"cannot project a level-{phi.cutoff} jet to level {level}")
    if level < 1:
        raise LevelError("diffeomorphism jets live at level >= 1")
    return DiffeoJet([c.truncate(level) for c in phi], check=False)
