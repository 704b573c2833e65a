"""Dimensions of Zariski closures of jet groups.

Diagonal (semisimple) data is handled through the lattice of integer relations among
eigenvalues: the closure of a diagonal map is the subtorus cut out by the characters
in that lattice, so its dimension is ``n - rank``. Unipotent groups are handled
through the Lie algebra spanned by brackets of generator logs.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import sympy

from . import linalg
from .errors import (
    ContainmentError,
    DimensionMismatchError,
    InvalidSplittingError,
    NotNilpotentError,
    NotUnipotentError,
    SpecMismatchError,
)
from .linalg import Q, Rational
from .jets import VectorFieldJet, is_nilpotent, log_map, vector_key, vf_bracket
from .jordan import is_unipotent, multiplicative_jordan
from .series import DiffeoJet, project

# ------------------------------------------------------------------ eigenvalue data


@dataclass(frozen=True)
class EigenvalueSpec:
    """Eigenvalue data for a diagonal map or a diagonal vector field.

    Two encodings:

    * explicit (multiplicative only): ``lambda_i = exp(2 pi i s_i / r_i) * q_i`` with
      ``q_i > 0`` rational, held in ``moduli`` and ``roots``;
    * symbolic: each value is a rational exponent/coefficient vector over a declared
      independent basis of ``symbols``. For ``additive`` specs the vector gives
      ``mu_i = sum_j v_ij b_j``; for multiplicative ones ``lambda_i = prod_j b_j^v_ij``.
    """

    additive: bool = False
    moduli: tuple[Rational, ...] | None = None
    roots: tuple[tuple[int, int], ...] | None = None
    symbols: tuple[str, ...] | None = None
    vectors: tuple[tuple[Rational, ...], ...] | None = None

    def __post_init__(self):
        if self.vectors is None:
            if self.additive:
                raise ValueError("additive data must be given as symbol vectors")
            if self.moduli is None or self.roots is None or len(self.moduli) != len(self.roots):
                raise ValueError("explicit spec needs one (q, s, r) per coordinate")
            for q, (s, r) in zip(self.moduli, self.roots):
                if q <= 0:
                    raise ValueError(f"modulus {q} must be positive")
                if r < 1 or not 0 <= s < r:
                    raise ValueError(f"root of unity exponent {s}/{r} out of range")
        else:
            width = len(self.symbols or ())
            if any(len(v) != width for v in self.vectors):
                raise ValueError("symbol vectors must match the symbol basis length")
        if self.n < 1:
            raise ValueError("empty eigenvalue spec")

    @classmethod
    def explicit(cls, values: Sequence[tuple]) -> "EigenvalueSpec":
        """values: ``(q,)`` or ``(q, s, r)`` per coordinate."""
        moduli, roots = [], []
        for v in values:
            q, s, r = (v[0], 0, 1) if len(v) == 1 else v
            moduli.append(Q(q))
            roots.append((int(s) % int(r), int(r)))
        return cls(moduli=tuple(moduli), roots=tuple(roots))

    @classmethod
    def from_rationals(cls, values: Sequence) -> "EigenvalueSpec":
        """Nonzero rational eigenvalues; negative values pick up the root -1."""
        out = []
        for v in values:
            v = Q(v)
            if not v:
                raise ValueError("zero eigenvalue")
            out.append((abs(v), 0, 1) if v > 0 else (-v, 1, 2))
        return cls.explicit(out)

    @classmethod
    def symbolic(cls, symbols: Sequence[str], vectors: Sequence[Sequence], additive: bool = False) -> "EigenvalueSpec":
        return cls(
            additive=additive,
            symbols=tuple(symbols),
            vectors=tuple(tuple(Q(x) for x in v) for v in vectors),
        )

    @classmethod
    def additive_rational(cls, values: Sequence) -> "EigenvalueSpec":
        return cls.symbolic(["1"], [[v] for v in values], additive=True)

    @property
    def n(self) -> int:
        return len(self.vectors) if self.vectors is not None else len(self.moduli or ())

    def numeric(self) -> list[complex] | None:
        """Complex values for explicit specs; None when only symbolic data is known."""
        if self.vectors is not None:
            return None
        return [float(q) * cmath.exp(2j * cmath.pi * s / r) for q, (s, r) in zip(self.moduli, self.roots)]

    def permuted(self, perm: Sequence[int]) -> "EigenvalueSpec":
        if self.vectors is not None:
            return EigenvalueSpec(self.additive, symbols=self.symbols, vectors=tuple(self.vectors[i] for i in perm))
        return EigenvalueSpec(moduli=tuple(self.moduli[i] for i in perm), roots=tuple(self.roots[i] for i in perm))


@dataclass(frozen=True)
class RelationLattice:
    n: int
    basis: tuple[tuple[int, ...], ...]  # Hermite normal form rows

    @property
    def rank(self) -> int:
        return len(self.basis)

    def satisfied_by(self, spec: EigenvalueSpec) -> bool:
        """Exact check that every basis row is a relation of ``spec``."""
        return all(is_relation(spec, a) for a in self.basis)


def is_relation(spec: EigenvalueSpec, a: Sequence[int]) -> bool:
    if spec.vectors is not None:
        width = len(spec.symbols or ())
        return all(sum(ai * v[j] for ai, v in zip(a, spec.vectors)) == 0 for j in range(width))
    prod = Q(1)
    for ai, q in zip(a, spec.moduli):
        prod *= q ** ai
    angle = sum(Q(ai * s, r) for ai, (s, r) in zip(a, spec.roots))
    return prod == 1 and angle.denominator == 1


def _integer_rows(rows: Sequence[Sequence[Rational]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = linalg.lcm(Q(x).denominator for x in row)
        out.append([int(Q(x) * den) for x in row])
    return out


def relation_lattice(spec: EigenvalueSpec) -> RelationLattice:
    n = spec.n
    if spec.vectors is not None:
        width = len(spec.symbols or ())
        rows = _integer_rows([[spec.vectors[i][j] for i in range(n)] for j in range(width)])
        kernel = linalg.integer_kernel(rows, n)
    else:
        primes: set[int] = set()
        for q in spec.moduli:
            primes.update(sympy.factorint(q.numerator))
            primes.update(sympy.factorint(q.denominator))
        rows = []
        for p in sorted(primes):
            rows.append([_valuation(q, p) for q in spec.moduli] + [0])
        big_r = linalg.lcm(r for _, r in spec.roots)
        # sum a_i s_i / r_i in Z  <=>  sum a_i c_i + R b = 0 for some integer b
        rows.append([s * big_r // r for s, r in spec.roots] + [big_r])
        kernel = [v[:n] for v in linalg.integer_kernel(rows, n + 1)]
    basis = linalg.hermite_normal_form(kernel) if kernel else []
    lat = RelationLattice(n, tuple(tuple(r) for r in basis))
    assert lat.satisfied_by(spec)
    return lat


def _valuation(q: Rational, p: int) -> int:
    v = 0
    num, den = q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def semisimple_closure_dim(spec: EigenvalueSpec) -> int:
    return spec.n - relation_lattice(spec).rank


def _check_spectrum(linear: linalg.Matrix, spec: EigenvalueSpec, tol: float = 1e-9) -> None:
    values = spec.numeric()
    if values is None:
        return
    chi = [float(c) for c in reversed(linalg.charpoly(linear))]  # highest degree first
    expected = np.poly(np.array(values, dtype=complex))
    scale = max(1.0, max(abs(c) for c in expected))
    if len(chi) != len(expected) or np.max(np.abs(np.array(chi) - expected)) > tol * scale:
        raise SpecMismatchError("eigenvalue spec does not match the linear part of the semisimple factor")


def cyclic_dim(phi: DiffeoJet, spec: EigenvalueSpec) -> int:
    """dim of the closure of <phi> at the jet's level: semisimple torus part plus unipotent part."""
    if spec.n != phi.n:
        raise SpecMismatchError(f"spec has {spec.n} eigenvalues for n={phi.n}")
    pair = multiplicative_jordan(phi)
    _check_spectrum(pair.semisimple.linear_part(), spec)
    dim = semisimple_closure_dim(spec) + (0 if pair.unipotent.is_identity() else 1)
    if dim > phi.n:
        raise SpecMismatchError(f"closure dimension {dim} exceeds n={phi.n}; eigenvalue spec is inconsistent")
    return dim


def one_param_dim(nilpotent_part: VectorFieldJet | None, spec: EigenvalueSpec) -> int:
    """dim of the closure of {exp(tX)} for X = diag(mu) z d/dz + X_N, with mu given by ``spec``."""
    if not spec.additive:
        raise ValueError("one-parameter groups need additive eigenvalue data")
    n = spec.n
    extra = 0
    if nilpotent_part is not None and not nilpotent_part.is_zero():
        if nilpotent_part.n != n:
            raise DimensionMismatchError(f"nilpotent part has n={nilpotent_part.n}, spec has n={n}")
        if not is_nilpotent(nilpotent_part):
            raise NotNilpotentError("declared nilpotent part has non-nilpotent linear part")
        # [sum mu_i z_i d/dz_i, z^a d/dz_j] = (<a, mu> - mu_j) z^a d/dz_j
        width = len(spec.symbols or ())
        for j, comp in enumerate(nilpotent_part):
            for m in comp.terms:
                weight = [sum(e * spec.vectors[i][s] for i, e in enumerate(m)) - spec.vectors[j][s] for s in range(width)]
                if any(weight):
                    raise InvalidSplittingError(f"term with exponent {m} in component {j + 1} does not commute with the diagonal part")
        extra = 1
    dim = n - relation_lattice(spec).rank + extra
    if dim > n:
        raise SpecMismatchError(f"one-parameter closure dimension {dim} exceeds n={n}")
    return dim


def product_dim_bound(parts: Sequence[int]) -> int:
    """Upper bound for dim of a group written as products of elements from the parts."""
    return sum(parts)


# ------------------------------------------------------------------ Lie closures


@dataclass(frozen=True)
class LieBasis:
    n: int
    cutoff: int
    elements: tuple[VectorFieldJet, ...]  # fully reduced echelon form

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def echelon(self) -> linalg.SparseEchelon:
        ech = linalg.SparseEchelon(vector_key)
        for e in self.elements:
            ech.add(e.to_vector())
        return ech

    def contains(self, X: VectorFieldJet) -> bool:
        return self.echelon().contains(X.to_vector())

    def is_bracket_closed(self) -> bool:
        ech = self.echelon()
        els = self.elements
        return all(ech.contains(vf_bracket(a, b).to_vector()) for i, a in enumerate(els) for b in els[i + 1:])


def _span(fields: Sequence[VectorFieldJet], n: int, cutoff: int) -> LieBasis:
    ech = linalg.SparseEchelon(vector_key)
    for f in fields:
        ech.add(f.to_vector())
    return _basis_from(ech, n, cutoff)


def _basis_from(ech: linalg.SparseEchelon, n: int, cutoff: int) -> LieBasis:
    return LieBasis(n, cutoff, tuple(VectorFieldJet.from_vector(r, n, cutoff) for r in ech.reduced_rows()))


def lie_closure(gens: Sequence[VectorFieldJet], n: int | None = None, cutoff: int | None = None) -> LieBasis:
    """Smallest bracket-closed subspace containing ``gens``."""
    if gens:
        n, cutoff = gens[0].n, gens[0].cutoff
        for g in gens:
            if g.n != n or g.cutoff != cutoff:
                raise DimensionMismatchError("generators disagree on n or cutoff")
    elif n is None or cutoff is None:
        raise ValueError("empty generator list needs n and cutoff")
    ech = linalg.SparseEchelon(vector_key)
    elements: list[VectorFieldJet] = []
    pending: list[tuple[int, int]] = []

    def push(X: VectorFieldJet) -> None:
        rem = ech.reduce(X.to_vector())
        if not rem:
            return
        ech.add(rem)
        elements.append(VectorFieldJet.from_vector(rem, n, cutoff))
        j = len(elements) - 1
        pending.extend((i, j) for i in range(j))

    for g in gens:
        push(g)
    while pending:
        i, j = pending.pop(0)
        push(vf_bracket(elements[i], elements[j]))
    return _basis_from(ech, n, cutoff)


def _bracket_span(a: LieBasis, b: LieBasis) -> LieBasis:
    return _span([vf_bracket(x, y) for x in a.elements for y in b.elements], a.n, a.cutoff)


def derived_length(g: LieBasis) -> int:
    """Least l with g^(l) = 0 (0 for the zero algebra)."""
    length = 0
    cur = g
    while cur.dimension:
        cur = _bracket_span(cur, cur)
        length += 1
    return length


def nilpotency_class(g: LieBasis) -> int:
    """Least l with C^l g = 0, where C^0 g = g and C^{l+1} g = [g, C^l g]."""
    cls = 0
    cur = g
    while cur.dimension:
        nxt = _bracket_span(g, cur)
        if nxt.dimension == cur.dimension:
            # cannot happen for nilpotent algebras; guard against looping
            raise ArithmeticError("lower central series does not descend")
        cur = nxt
        cls += 1
    return cls


# ------------------------------------------------------------------ unipotent groups


def _logs_at(gens: Sequence[DiffeoJet], k: int) -> list[VectorFieldJet]:
    out = []
    for g in gens:
        if not is_unipotent(g):
            raise NotUnipotentError("generator is not unipotent")
        out.append(log_map(project(g, k)))
    return out


def group_lie_algebra(gens: Sequence[DiffeoJet], k: int) -> LieBasis:
    if not gens:
        raise ValueError("need at least one generator")
    return lie_closure(_logs_at(gens, k))


def unipotent_group_dim_at(gens: Sequence[DiffeoJet], k: int) -> int:
    if not gens:
        return 0
    return group_lie_algebra(gens, k).dimension


@dataclass(frozen=True)
class Verdict:
    kind: str  # "stabilized" | "strictly-growing" | "inconclusive"
    horizon: int
    value: int | None = None
    since: int | None = None

    def __str__(self) -> str:
        if self.kind == "stabilized":
            return f"stabilized({self.value}, since k={self.since}; window to k={self.horizon})"
        return f"{self.kind}(horizon k={self.horizon})"


@dataclass(frozen=True)
class DimReport:
    levels: tuple[tuple[int, int], ...]
    verdict: Verdict
    note: str = "finite-window evidence: stabilization does not prove finite dimension"


def classify(levels: Sequence[tuple[int, int]]) -> Verdict:
    ks = [k for k, _ in levels]
    dims = [d for _, d in levels]
    if any(b < a for a, b in zip(dims, dims[1:])):
        raise ArithmeticError(f"dimension sequence decreased: {dims}")
    horizon = ks[-1]
    if len(dims) > 1 and all(b > a for a, b in zip(dims, dims[1:])):
        return Verdict("strictly-growing", horizon)
    start = len(dims) - 1
    while start > 0 and dims[start - 1] == dims[-1]:
        start -= 1
    if start < len(dims) - 1 or len(dims) == 1:
        return Verdict("stabilized", horizon, dims[-1], ks[start])
    return Verdict("inconclusive", horizon)


def dim_stabilization_probe(gens: Sequence[DiffeoJet], k_min: int, k_max: int) -> DimReport:
    if k_min < 1 or k_max < k_min:
        raise ValueError(f"bad level window {k_min}..{k_max}")
    levels = tuple((k, unipotent_group_dim_at(gens, k)) for k in range(k_min, k_max + 1))
    return DimReport(levels, classify(levels))


@dataclass(frozen=True)
class ProfileRow:
    level: int
    dimension: int
    derived_length: int
    nilpotency_class: int


def series_profile(gens: Sequence[DiffeoJet], k: int, k_min: int = 1) -> list[ProfileRow]:
    """Derived length and nilpotency class of the closure's Lie algebra at each level.

    Each level algebra is nilpotent; a group that is not nilpotent shows up as a class
    that keeps growing with the level.
    """
    rows = []
    for level in range(k_min, k + 1):
        g = group_lie_algebra(gens, level)
        rows.append(ProfileRow(level, g.dimension, derived_length(g), nilpotency_class(g)))
    return rows


def codim_at(g_gens: Sequence[DiffeoJet], h_gens: Sequence[DiffeoJet], k: int) -> int:
    """dim G_k - dim H_k, after checking that H's Lie algebra sits inside G's."""
    g = group_lie_algebra(g_gens, k)
    if not h_gens:
        return g.dimension
    h = group_lie_algebra(h_gens, k)
    ech = g.echelon()
    for X in h.elements:
        if not ech.contains(X.to_vector()):
            raise ContainmentError("subgroup Lie algebra is not contained in the group's")
    return g.dimension - h.dimension
