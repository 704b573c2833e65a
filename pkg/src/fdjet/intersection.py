"""Local intersection multiplicity dim Q[[z]]/(I + J) by jet-level linear algebra.

``d_k = dim Q[[z]] / (Q + m^{k+1})`` is computed by exact row reduction of the
products ``g * z^a`` truncated at degree k. The sequence is nondecreasing. At the
first ``k`` with ``d_k == d_{k+1}`` we get ``m^{k+1} in Q + m^{k+2}``, so ``m^{k+1}``
lies in ``Q`` by Nakayama and ``d_k`` is the exact colength.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, ValidityError
from .linalg import SparseEchelon
from .parsing import infer_n, parse_polynomial
from .series import DiffeoJet, TruncatedSeries, mono_key, monomial_basis, project, ts_substitute


@dataclass(frozen=True)
class IdealSpec:
    """Generators of an ideal of Q[[z_1..z_n]].

    ``validity`` is None for exactly known polynomial generators; otherwise the
    generators are only known modulo degree > validity.
    """

    n: int
    generators: tuple[TruncatedSeries, ...]
    validity: int | None = None

    def __post_init__(self):
        for g in self.generators:
            if g.n != self.n:
                raise DimensionMismatchError(f"generator in {g.n} variables for an ideal in n={self.n}")

    @classmethod
    def from_strings(cls, lines: Iterable[str], n: int | None = None) -> "IdealSpec":
        lines = [ln.split("#", 1)[0].strip() for ln in lines]
        lines = [ln for ln in lines if ln]
        if n is None:
            n = max((infer_n(ln) for ln in lines), default=1)
        gens = [parse_polynomial(ln, n) for ln in lines]
        return cls(n, tuple(g for g in gens if not g.is_zero()))

    @classmethod
    def from_text(cls, text: str, n: int | None = None) -> "IdealSpec":
        return cls.from_strings(text.splitlines(), n)

    def __add__(self, other: "IdealSpec") -> "IdealSpec":
        if self.n != other.n:
            raise DimensionMismatchError(f"ideals in n={self.n} and n={other.n} variables")
        vals = [v for v in (self.validity, other.validity) if v is not None]
        return IdealSpec(self.n, self.generators + other.generators, min(vals) if vals else None)

    def at_level(self, k: int) -> list[TruncatedSeries]:
        """Generators as series with cutoff k (lifting exact polynomials as needed)."""
        if self.validity is not None and k > self.validity:
            raise ValidityError(f"generators are valid to degree {self.validity}, level {k} requested")
        return [g.lift(k) for g in self.generators]

    def lines(self) -> list[str]:
        return [str(g) for g in self.generators]


def pullback_ideal(ideal: IdealSpec, phi: DiffeoJet) -> IdealSpec:
    """phi^* I = (f o phi : f in I), valid to degree phi.cutoff."""
    if ideal.n != phi.n:
        raise DimensionMismatchError(f"ideal in n={ideal.n} variables, map in n={phi.n}")
    k = phi.cutoff if ideal.validity is None else min(phi.cutoff, ideal.validity)
    if k < phi.cutoff:
        phi = project(phi, k)
    gens = []
    for g in ideal.generators:
        img = ts_substitute(g.lift(k), phi)
        if not img.is_zero():
            gens.append(img)
    return IdealSpec(ideal.n, tuple(gens), k)


def jet_quotient_dim(ideal: IdealSpec | Sequence[TruncatedSeries], k: int) -> int:
    """dim Q[[z]] / (Q + m^{k+1})."""
    if not isinstance(ideal, IdealSpec):
        gens = tuple(ideal)
        if not gens:
            raise ValueError("bare generator lists must be nonempty; pass an IdealSpec")
        ideal = IdealSpec(gens[0].n, gens, min(g.cutoff for g in gens))
    n = ideal.n
    total = comb(n + k, n)
    ech = SparseEchelon(mono_key)
    for g in ideal.at_level(k):
        order = g.order
        if order > k:
            continue
        for d in range(0, k - order + 1):
            for shift in monomial_basis(n, d, d):
                row = {}
                for m, c in g.terms.items():
                    mm = tuple(a + b for a, b in zip(m, shift))
                    if sum(mm) <= k:
                        row[mm] = c
                if row:
                    ech.add(row)
        if len(ech) == total:
            break
    return total - len(ech)


@dataclass(frozen=True)
class MultiplicityResult:
    kind: str  # "exact" | "lower-bound"
    value: int
    level: int  # certification level for exact results, horizon otherwise
    jet_dims: tuple[int, ...]

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    def __str__(self) -> str:
        if self.exact:
            return f"exact {self.value} certified-at {self.level}"
        return f"lower-bound {self.value} horizon {self.level}"


def multiplicity(I: IdealSpec, J: IdealSpec, k_max: int = 32) -> MultiplicityResult:
    """(I, J) = dim Q[[z]]/(I + J), certified by jet stabilization or reported as a lower bound."""
    combined = I + J
    dims: list[int] = []
    for k in range(0, k_max + 1):
        d = jet_quotient_dim(combined, k)
        if dims and d < dims[-1]:
            raise ArithmeticError(f"jet dimensions decreased: {dims + [d]}")
        dims.append(d)
        if len(dims) >= 2 and dims[-1] == dims[-2]:
            return MultiplicityResult("exact", dims[-2], k - 1, tuple(dims))
    return MultiplicityResult("lower-bound", dims[-1], k_max, tuple(dims))
