"""Independent reference computations shared by the unit and acceptance suites."""
import itertools

import sympy

from fdjet.intersection import IdealSpec


# ------------------------------------------------------------------ Lie algebra of <(x, y(1+x)), (x, y+x^2)>


def recurrence_algebra(k):
    """Span of log(1+x) y d/dy and x^2 log(1+x)^m d/dy as dicts (y-power, x-power) -> coefficient.

    Brackets of f(x) y d/dy with g(x) d/dy give -f g d/dy, so the algebra is spanned by
    L y d/dy and x^2 L^m d/dy with L = log(1+x), truncated at total degree k.
    """
    x = sympy.Symbol("x")
    L = sympy.series(sympy.log(1 + x), x, 0, k + 1).removeO()

    def coeffs(expr, ypow, top):
        p = sympy.Poly(sympy.expand(expr), x)
        return {(ypow, j): p.coeff_monomial(x**j) for j in range(top + 1)}

    out = [coeffs(L, 1, k - 1)]
    for m in range(0, k - 1):
        out.append(coeffs(x**2 * L**m, 0, k))
    return out


def algebra_as_dicts(g):
    """Elements of a planar algebra living in the d/dy component, at most linear in y."""
    out = []
    for X in g.elements:
        assert X[0].is_zero()
        assert all(m[1] <= 1 for m in X[1].terms)
        out.append({(m[1], m[0]): c for m, c in X[1].terms.items()})
    return out


def span_rank(fields, k):
    rows = [[f.get((i, j), 0) for i in range(2) for j in range(k + 1)] for f in fields]
    return sympy.Matrix(rows).rank() if rows else 0


# ------------------------------------------------------------------ monomial ideals


def staircase(gens, n):
    """Count monomials outside a monomial ideal that contains pure powers."""
    bound = max(max(g) for g in gens)
    count = 0
    for e in itertools.product(range(bound + 1), repeat=n):
        if not any(all(a >= b for a, b in zip(e, g)) for g in gens):
            count += 1
    return count


def mono_text(e):
    names = "xyz"
    return "*".join(f"{names[i]}^{a}" for i, a in enumerate(e) if a) or "1"


def random_monomial_ideal(rng, n):
    gens = []
    for i in range(n):
        e = [0] * n
        e[i] = rng.randint(1, 4)
        gens.append(tuple(e))
    for _ in range(rng.randint(0, 3)):
        gens.append(tuple(rng.randint(0, 3) for _ in range(n)))
    return [g for g in gens if any(g)]


def split_monomial_ideal(rng, gens, n):
    half = rng.randint(1, len(gens))
    I = IdealSpec.from_strings(map(mono_text, gens[:half]), n)
    J = IdealSpec.from_strings(map(mono_text, gens[half:]), n) if half < len(gens) else IdealSpec(n, ())
    return I, J


def random_finite_pair(rng):
    a = f"y^{rng.randint(1, 3)} - x^{rng.randint(1, 4)}"
    b = f"y + {rng.randint(-2, 2)}*x^{rng.randint(2, 4)} + {rng.randint(-2, 2)}*x*y"
    return IdealSpec.from_strings([a], 2), IdealSpec.from_strings([b], 2)


def numeric_relation(values, a):
    z = 1
    for v, e in zip(values, a):
        z *= v ** e
    return abs(z - 1) < 1e-9


def in_lattice(basis, a):
    """Membership in the lattice spanned by Hermite normal form rows."""
    a = list(a)
    for row in basis:
        piv = next(i for i, x in enumerate(row) if x)
        if a[piv] % row[piv]:
            return False
        c = a[piv] // row[piv]
        a = [x - c * y for x, y in zip(a, row)]
    return not any(a)
