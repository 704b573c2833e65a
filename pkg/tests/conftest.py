import sys
from fractions import Fraction
import random

from hypothesis import strategies as st

from fdjet.series import DiffeoJet, TruncatedSeries, monomial_basis

coeffs = st.builds(Fraction, st.integers(-3, 3), st.integers(1, 4))
nonzero_coeffs = coeffs.filter(bool)


@st.composite
def series(draw, n, k, lo=0, density=0.4):
    basis = monomial_basis(n, lo, k)
    terms = {}
    for m in basis:
        if draw(st.floats(0, 1)) < density:
            terms[m] = draw(coeffs)
    return TruncatedSeries(n, k, terms)


@st.composite
def diffeos(draw, n=None, k=None, unipotent=False):
    n = draw(st.integers(1, 3)) if n is None else n
    k = draw(st.integers(1, 5)) if k is None else k
    comps = []
    for i in range(n):
        higher = draw(series(n, k, lo=2))
        lin = {}
        for j in range(i):
            c = draw(coeffs)
            if c:
                lin[tuple(int(t == j) for t in range(n))] = c
        diag = Fraction(1) if unipotent else draw(st.sampled_from([Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(3), Fraction(-2, 3)]))
        lin[tuple(int(t == i) for t in range(n))] = diag
        comps.append(higher + TruncatedSeries(n, k, lin))
    return DiffeoJet(comps)


def random_fraction(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-3, 3), rng.randint(1, 4))


def random_series(rng: random.Random, n: int, k: int, lo: int, density: float = 0.4) -> TruncatedSeries:
    return TruncatedSeries(n, k, {m: random_fraction(rng) for m in monomial_basis(n, lo, k) if rng.random() < density})


def random_jet(rng: random.Random, n: int, k: int, unipotent: bool = False, diag_choices=None) -> DiffeoJet:
    """Lower-triangular linear part (rational spectrum) plus random higher-order terms."""
    diag_choices = diag_choices or [Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(3)]
    comps = []
    for i in range(n):
        lin = {tuple(int(t == j) for t in range(n)): random_fraction(rng) for j in range(i)}
        lin[tuple(int(t == i) for t in range(n))] = Fraction(1) if unipotent else rng.choice(diag_choices)
        comps.append(random_series(rng, n, k, 2) + TruncatedSeries(n, k, lin))
    return DiffeoJet(comps)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
