"""Vector-field jets, exp/log between nilpotent fields and unipotent jets, and
the pullback matrix of a jet on m/m^{k+1}.

A vector field ``X = sum X_i d/dz_i`` acts on series as a derivation. Its
exponential is the jet whose i-th component is ``exp(X)(z_i) = sum X^m(z_i)/m!``,
so the pullback ``f -> f o exp(X)`` equals the operator ``exp(X)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import linalg
from .errors import DimensionMismatchError, LevelError, NotAJetError, NotNilpotentError, NotUnipotentError
from .linalg import Q, Rational
from .series import (
    DiffeoJet,
    Monomial,
    TruncatedSeries,
    _substitute_raw,
    _substitute_terms,
    count_monomials,
    mono_key,
    monomial_basis,
    unit,
)


class VectorFieldJet:
    """Formal vector field with components in m, truncated at ``cutoff``."""

    def __init__(self, components: Sequence[TruncatedSeries]):
        comps = tuple(components)
        if not comps:
            raise DimensionMismatchError("a vector field needs at least one component")
        n, k = comps[0].n, comps[0].cutoff
        if len(comps) != n:
            raise DimensionMismatchError(f"{len(comps)} components for n={n} variables")
        for i, c in enumerate(comps):
            if c.n != n or c.cutoff != k:
                raise DimensionMismatchError("components disagree on n or cutoff")
            if c.constant_term:
                raise ValueError(f"component {i + 1} has a nonzero constant term")
        self.components = comps
        self.n = n
        self.cutoff = k

    @classmethod
    def zero(cls, n: int, cutoff: int) -> "VectorFieldJet":
        return cls([TruncatedSeries.zero(n, cutoff)] * n)

    @classmethod
    def from_vector(cls, vec: dict, n: int, cutoff: int) -> "VectorFieldJet":
        comps: list[dict] = [{} for _ in range(n)]
        for (i, m), c in vec.items():
            comps[i][m] = c
        return cls([TruncatedSeries(n, cutoff, t) for t in comps])

    def to_vector(self) -> dict:
        """Coefficients keyed by (component, monomial)."""
        return {(i, m): c for i, comp in enumerate(self.components) for m, c in comp.terms.items()}

    def linear_part(self) -> linalg.Matrix:
        return [[c.coefficient(unit(self.n, j)) for j in range(self.n)] for c in self.components]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def truncate(self, level: int) -> "VectorFieldJet":
        return VectorFieldJet([c.truncate(level) for c in self.components])

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __add__(self, other: "VectorFieldJet") -> "VectorFieldJet":
        _same(self, other)
        return VectorFieldJet([a + b for a, b in zip(self, other)])

    def __sub__(self, other: "VectorFieldJet") -> "VectorFieldJet":
        _same(self, other)
        return VectorFieldJet([a - b for a, b in zip(self, other)])

    def __neg__(self):
        return VectorFieldJet([-a for a in self])

    def __mul__(self, c):
        return VectorFieldJet([a * c for a in self])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorFieldJet):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        from .parsing import format_field_components

        return f"VectorFieldJet({format_field_components(self.components)!r}, cutoff={self.cutoff})"

    def __str__(self):
        from .parsing import format_field_components

        return format_field_components(self.components)


def _same(a, b) -> bool:
    if a.n != b.n or a.cutoff != b.cutoff:
        raise DimensionMismatchError(
            f"operands disagree: (n={a.n}, k={a.cutoff}) vs (n={b.n}, k={b.cutoff})"
        )
    return True


def vector_key(label: tuple[int, Monomial]) -> tuple:
    """Pivot order for coefficient vectors of fields: graded-lex monomial, then component."""
    i, m = label
    return (mono_key(m), i)


def parse_vector_field(text: str, n: int, cutoff: int) -> VectorFieldJet:
    from .parsing import parse_vector_field_components

    return VectorFieldJet(parse_vector_field_components(text, n, cutoff))


# ------------------------------------------------------------------ derivations


def vf_apply(X: VectorFieldJet, f: TruncatedSeries) -> TruncatedSeries:
    """X(f) = sum_i X_i * df/dz_i, truncated."""
    _same(X, f)
    out = TruncatedSeries.zero(f.n, f.cutoff)
    for i, xi in enumerate(X.components):
        if not xi.is_zero():
            d = f.derivative(i)
            if not d.is_zero():
                out = out + xi * d
    return out


def vf_bracket(X: VectorFieldJet, Y: VectorFieldJet) -> VectorFieldJet:
    """Lie bracket as commutator of derivations: [X, Y]_i = X(Y_i) - Y(X_i)."""
    _same(X, Y)
    return VectorFieldJet([vf_apply(X, yi) - vf_apply(Y, xi) for xi, yi in zip(X, Y)])


@dataclass(frozen=True)
class NilpotencyCertificate:
    flag: bool
    witness: int | None  # least p with (A)^p = 0 (nilpotent) or (A - I)^p = 0 (unipotent)
    kind: str = "nilpotent"

    def __bool__(self) -> bool:
        return self.flag


def nilpotency_index(a: linalg.Matrix) -> int | None:
    """Least p >= 1 with a^p = 0, or None if a is not nilpotent."""
    n = len(a)
    power = [list(r) for r in a]
    for p in range(1, n + 1):
        if linalg.is_zero(power):
            return p
        power = linalg.mat_mul(power, a)
    return n + 1 if linalg.is_zero(power) else None


def is_nilpotent(X: VectorFieldJet) -> NilpotencyCertificate:
    w = nilpotency_index(X.linear_part())
    return NilpotencyCertificate(w is not None, w, "nilpotent")


def _operator_bound(n: int, k: int) -> int:
    # a nilpotent operator on m/m^{k+1} vanishes after dim many steps
    return count_monomials(n, 1, k) + 1


def exp_vf(X: VectorFieldJet) -> DiffeoJet:
    """exp(X) for a field with nilpotent linear part."""
    if not is_nilpotent(X):
        raise NotNilpotentError("linear part of the vector field is not nilpotent")
    n, k = X.n, X.cutoff
    comps = []
    bound = _operator_bound(n, k)
    for i in range(n):
        term = TruncatedSeries.variable(i, n, k)
        total = term
        for m in range(1, bound + 1):
            term = vf_apply(X, term) * Q(1, m)
            if term.is_zero():
                break
            total = total + term
        comps.append(total)
    return DiffeoJet(comps, check=False)


def _is_unipotent_matrix(a: linalg.Matrix) -> bool:
    n = len(a)
    return nilpotency_index(linalg.mat_add(a, linalg.identity(n), -1)) is not None


def log_map(phi: DiffeoJet) -> VectorFieldJet:
    """Infinitesimal generator of a unipotent jet, via log of the pullback operator."""
    if not _is_unipotent_matrix(phi.linear_part()):
        raise NotUnipotentError("linear part is not unipotent")
    n, k = phi.n, phi.cutoff
    bound = _operator_bound(n, k)
    images: dict = {}
    comps = []
    for i in range(n):
        z = TruncatedSeries.variable(i, n, k)
        term = z
        total = TruncatedSeries.zero(n, k)
        for m in range(1, bound + 1):
            term = _substitute_raw(term, phi.components, images) - term
            if term.is_zero():
                break
            total = total + term * Q((-1) ** (m + 1), m)
        comps.append(total)
    return VectorFieldJet(comps)


def power_t(phi: DiffeoJet, t) -> DiffeoJet:
    """phi^t = exp(t log phi) for rational t."""
    return exp_vf(log_map(phi) * Q(t))


# ------------------------------------------------------------------ matrices


@dataclass(frozen=True, eq=True)
class JetMatrix:
    """Matrix of f -> f o phi on the graded-lex basis of m/m^{k+1}; column j is the image of basis[j]."""

    n: int
    cutoff: int
    basis: tuple[Monomial, ...]
    entries: tuple[tuple[Rational, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def rows(self) -> linalg.Matrix:
        return [list(r) for r in self.entries]

    @classmethod
    def from_rows(cls, n: int, cutoff: int, rows: linalg.Matrix) -> "JetMatrix":
        basis = tuple(monomial_basis(n, 1, cutoff))
        if len(rows) != len(basis) or any(len(r) != len(basis) for r in rows):
            raise DimensionMismatchError(f"expected a {len(basis)}x{len(basis)} matrix")
        return cls(n, cutoff, basis, tuple(tuple(Q(x) for x in r) for r in rows))

    def __matmul__(self, other: "JetMatrix") -> "JetMatrix":
        return JetMatrix.from_rows(self.n, self.cutoff, linalg.mat_mul(self.rows(), other.rows()))


def monomial_images(phi: DiffeoJet, basis: Iterable[Monomial]) -> dict[Monomial, dict]:
    comps = [c.terms for c in phi.components]
    images: dict = {}
    return {m: _substitute_terms({m: Q(1)}, comps, phi.n, phi.cutoff, images) for m in basis}


def matrix_of(phi: DiffeoJet) -> JetMatrix:
    basis = monomial_basis(phi.n, 1, phi.cutoff)
    index = {m: r for r, m in enumerate(basis)}
    rows = linalg.zeros(len(basis))
    # build images incrementally: image(m) = image(m - e_i) * phi_i
    images: dict[Monomial, TruncatedSeries] = {}
    for c, m in enumerate(basis):
        i = max(j for j, e in enumerate(m) if e)
        prev = m[:i] + (m[i] - 1,) + m[i + 1:]
        img = phi.components[i] if sum(prev) == 0 else images[prev] * phi.components[i]
        images[m] = img
        for mono, coeff in img.terms.items():
            rows[index[mono]][c] = coeff
    return JetMatrix(phi.n, phi.cutoff, tuple(basis), tuple(tuple(r) for r in rows))


def matrix_to_map(M: JetMatrix) -> DiffeoJet:
    """Recover the jet whose pullback matrix is M; checks multiplicativity."""
    n, k = M.n, M.cutoff
    rows = M.entries
    cols = {m: {M.basis[r]: rows[r][c] for r in range(M.dimension) if rows[r][c]} for c, m in enumerate(M.basis)}
    comps = [TruncatedSeries(n, k, cols[unit(n, i)]) for i in range(n)]
    try:
        phi = DiffeoJet(comps)
    except ValueError as exc:
        raise NotAJetError(f"coordinate images do not form a diffeomorphism jet: {exc}") from None
    for m, img in monomial_images(phi, M.basis).items():
        if img != cols[m]:
            raise NotAJetError(f"column of monomial {m} is not the product of coordinate images")
    return phi


def project_field(X: VectorFieldJet, level: int) -> VectorFieldJet:
    if level > X.cutoff:
        raise LevelError(f"cannot project a level-{X.cutoff} field to level {level}")
    return X.truncate(level)
