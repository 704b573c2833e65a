"""Jordan-Chevalley decomposition of jets over Q, without factoring polynomials.

The semisimple part of a matrix M is obtained by Newton iteration on the squarefree
part p of its characteristic polynomial: ``S <- S - p(S) q(S)`` with ``q`` an inverse
of ``p'`` modulo ``p``. Every iterate is a polynomial in M, so S commutes with M and
stays rational.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log2
from typing import Sequence

import sympy

from . import linalg
from .linalg import Q, Rational
from .jets import JetMatrix, NilpotencyCertificate, matrix_of, matrix_to_map, nilpotency_index
from .series import DiffeoJet

_T = sympy.Symbol("t")


def _to_poly(coeffs: Sequence[Rational]) -> sympy.Poly:
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], _T, domain="QQ")


def _from_poly(p: sympy.Poly) -> list[Rational]:
    out = []
    for c in reversed(p.all_coeffs()):
        c = sympy.Rational(c)
        out.append(Q(int(c.p), int(c.q)))
    return out


def squarefree_part(coeffs: Sequence[Rational]) -> list[Rational]:
    """chi / gcd(chi, chi'), made monic; coefficients lowest degree first."""
    chi = _to_poly(coeffs)
    p = sympy.div(chi, sympy.gcd(chi, chi.diff(_T)), _T)[0].monic()
    return _from_poly(p)


def _newton_data(m: linalg.Matrix) -> tuple[list[Rational], list[Rational]]:
    p = _to_poly(squarefree_part(linalg.charpoly(m)))
    if p.degree() == 0:
        return _from_poly(p), [Q(0)]
    q = sympy.invert(p.diff(_T), p)
    return _from_poly(p), _from_poly(sympy.Poly(q, _T, domain="QQ"))


def _as_rows(m) -> linalg.Matrix:
    return m.rows() if isinstance(m, JetMatrix) else [list(map(Q, r)) for r in m]


def additive_jordan(m):
    """Split M = S + N with S semisimple, N nilpotent, SN = NS, S a polynomial in M.

    Accepts a ``JetMatrix`` or a list-of-rows matrix and returns the same kind.
    """
    rows = _as_rows(m)
    dim = len(rows)
    if dim == 0:
        return m, m
    p, q = _newton_data(rows)
    s = rows
    steps = ceil(log2(dim)) + 2 if dim > 1 else 2
    for _ in range(steps):
        ps = linalg.poly_eval_matrix(p, s)
        if linalg.is_zero(ps):
            break
        s = linalg.mat_add(s, linalg.mat_mul(ps, linalg.poly_eval_matrix(q, s)), -1)
    else:
        if not linalg.is_zero(linalg.poly_eval_matrix(p, s)):
            raise ArithmeticError("Chevalley iteration did not converge")
    n = linalg.mat_add(rows, s, -1)
    if isinstance(m, JetMatrix):
        return JetMatrix.from_rows(m.n, m.cutoff, s), JetMatrix.from_rows(m.n, m.cutoff, n)
    return s, n


def is_semisimple_matrix(m) -> bool:
    """Minimal polynomial squarefree <=> the squarefree part of chi kills M."""
    rows = _as_rows(m)
    if not rows:
        return True
    p = squarefree_part(linalg.charpoly(rows))
    return linalg.is_zero(linalg.poly_eval_matrix(p, rows))


@dataclass(frozen=True)
class JordanPair:
    semisimple: DiffeoJet
    unipotent: DiffeoJet


def multiplicative_jordan(phi: DiffeoJet) -> JordanPair:
    """phi = phi_s o phi_u = phi_u o phi_s at the jet's own level."""
    m = matrix_of(phi)
    s, _ = additive_jordan(m)
    u = linalg.mat_mul(linalg.mat_inv(s.rows()), m.rows())
    return JordanPair(
        semisimple=matrix_to_map(s),
        unipotent=matrix_to_map(JetMatrix.from_rows(m.n, m.cutoff, u)),
    )


def is_unipotent(phi: DiffeoJet) -> NilpotencyCertificate:
    a = phi.linear_part()
    w = nilpotency_index(linalg.mat_add(a, linalg.identity(phi.n), -1))
    return NilpotencyCertificate(w is not None, w, "unipotent")


def is_semisimple_at(phi: DiffeoJet) -> bool:
    return is_semisimple_matrix(matrix_of(phi))
