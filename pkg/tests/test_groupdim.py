import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from fdjet.errors import ContainmentError, InvalidSplittingError, NotUnipotentError, SpecMismatchError
from fdjet.groupdim import (
    EigenvalueSpec,
    classify,
    codim_at,
    cyclic_dim,
    derived_length,
    dim_stabilization_probe,
    group_lie_algebra,
    is_relation,
    lie_closure,
    nilpotency_class,
    one_param_dim,
    product_dim_bound,
    relation_lattice,
    series_profile,
    unipotent_group_dim_at,
)
from fdjet.jets import parse_vector_field
from fdjet.orbits import parse_generators
from fdjet.parsing import parse_map

from oracles import algebra_as_dicts, in_lattice, numeric_relation, recurrence_algebra, span_rank

DATA = Path(__file__).resolve().parent.parent / "data"


def gens(name, cutoff):
    return [g for _, g in parse_generators((DATA / name).read_text(), cutoff)]




# ------------------------------------------------------------------ lattices


@pytest.mark.parametrize("values,expected", [
    ([(2,), (3,)], ()),
    ([(2,), (4,)], ((2, -1),)),
    ([(1, 1, 3)], ((3,),)),
    ([(1, 1, 2), (1, 1, 2)], ((1, 1), (0, 2))),
    ([(2,), (2, 1, 2)], ((2, -2),)),
])
def test_lattice_examples(values, expected):
    lat = relation_lattice(EigenvalueSpec.explicit(values))
    assert lat.basis == expected


def test_symbolic_lattice():
    spec = EigenvalueSpec.symbolic(["a", "b"], [[1, 0], [0, 1], [1, 1]])
    lat = relation_lattice(spec)
    assert lat.rank == 1 and in_lattice(lat.basis, (1, 1, -1))


def random_spec(rng, n):
    vals = []
    for _ in range(n):
        q = Fraction(rng.choice([1, 2, 3, 4, 6, 8, 9]), rng.choice([1, 1, 2, 3]))
        r = rng.choice([1, 1, 2, 3, 4])
        vals.append((q, rng.randrange(r), r))
    return EigenvalueSpec.explicit(vals)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_lattice_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    spec = random_spec(rng, n)
    lat = relation_lattice(spec)
    values = spec.numeric()
    for a in itertools.product(range(-4, 5), repeat=n):
        assert numeric_relation(values, a) == is_relation(spec, a) == in_lattice(lat.basis, a)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_lattice_rank_permutation_invariant(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    spec = random_spec(rng, n)
    perm = list(range(n))
    rng.shuffle(perm)
    assert relation_lattice(spec).rank == relation_lattice(spec.permuted(perm)).rank


# ------------------------------------------------------------------ cyclic groups


@pytest.mark.parametrize("text,values,expected", [
    ("(2x, 3y)", [(2,), (3,)], 2),
    ("(2x, 4y)", [(2,), (4,)], 1),
    ("(x, y + x^2)", [(1,), (1,)], 1),
    ("(-x)", [(1, 1, 2)], 0),
    ("(2x, 4y + x^2)", [(2,), (4,)], 2),
])
def test_cyclic_dim_examples(text, values, expected):
    assert cyclic_dim(parse_map(text, 4), EigenvalueSpec.explicit(values)) == expected


def test_cyclic_dim_rejects_wrong_spectrum():
    with pytest.raises(SpecMismatchError):
        cyclic_dim(parse_map("(2x, 3y)", 3), EigenvalueSpec.explicit([(2,), (5,)]))
    with pytest.raises(SpecMismatchError):
        cyclic_dim(parse_map("(2x, 3y)", 3), EigenvalueSpec.explicit([(2,)]))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_cyclic_dim_bounded_by_n(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    diag = [Fraction(rng.choice([1, 2, 3, 4, -1, -2]), rng.choice([1, 2])) for _ in range(n)]
    comps = []
    names = "xyz"
    for i in range(n):
        extra = f" + {rng.randint(-2, 2)}*{names[rng.randrange(n)]}^2"
        comps.append(f"{diag[i]}*{names[i]}{extra}")
    phi = parse_map("(" + ", ".join(comps) + ")", 3)
    assert 0 <= cyclic_dim(phi, EigenvalueSpec.from_rationals(diag)) <= n


# ------------------------------------------------------------------ one-parameter groups


def test_one_param_examples():
    irr = EigenvalueSpec.symbolic(["1", "sqrt2"], [[1, 0], [0, 1]], additive=True)
    assert one_param_dim(None, irr) == 2
    rat = EigenvalueSpec.additive_rational([1, 2])
    assert one_param_dim(None, rat) == 1
    zero = EigenvalueSpec.additive_rational([0, 0])
    assert one_param_dim(parse_vector_field("x^2*d/dy", 2, 3), zero) == 1
    # weight of x^2 d/dy is 2*1 - 2 = 0, so it commutes and adds one dimension
    assert one_param_dim(parse_vector_field("x^2*d/dy", 2, 3), rat) == 2


def test_one_param_invalid_splitting():
    with pytest.raises(InvalidSplittingError):
        one_param_dim(parse_vector_field("x^2*d/dy", 2, 3), EigenvalueSpec.additive_rational([1, 1]))


def test_product_bound():
    assert product_dim_bound([1, 2, 0]) == 3


# ------------------------------------------------------------------ Lie closures


def test_lie_closure_examples():
    a = parse_vector_field("x^2*d/dx", 1, 4)
    b = parse_vector_field("x^3*d/dx", 1, 4)
    g = lie_closure([a, b])
    assert g.dimension == 3  # x^2, x^3, x^4
    assert lie_closure([a]).dimension == 1
    assert lie_closure([], n=1, cutoff=4).dimension == 0



@pytest.mark.parametrize("k", range(2, 7))
def test_group_algebra_matches_recurrence(k):
    g = group_lie_algebra(gens("eosnfd_gens.txt", k), k)
    ours = algebra_as_dicts(g)
    oracle = recurrence_algebra(k)
    assert g.dimension == k
    assert span_rank(oracle, k) == k
    assert span_rank(ours + oracle, k) == k


def test_closure_is_idempotent_and_closed():
    g = group_lie_algebra(gens("derived3_gens.txt", 5), 5)
    assert g.is_bracket_closed()
    assert lie_closure(list(g.elements)).dimension == g.dimension


def test_derived_and_class():
    abel = group_lie_algebra(gens("abelian_gens.txt", 6), 6)
    assert derived_length(abel) == 1 and nilpotency_class(abel) == 1
    zero = lie_closure([], n=2, cutoff=3)
    assert derived_length(zero) == 0 and nilpotency_class(zero) == 0


# ------------------------------------------------------------------ unipotent groups


def test_unipotent_dims():
    assert unipotent_group_dim_at([], 4) == 0
    g = gens("eosnfd_gens.txt", 8)
    dims = [unipotent_group_dim_at(g, k) for k in range(1, 9)]
    assert dims[1:] == list(range(2, 9))
    assert all(a <= b for a, b in zip(dims, dims[1:]))
    with pytest.raises(NotUnipotentError):
        unipotent_group_dim_at([parse_map("(2x, y)", 3)], 3)


def test_probe_verdicts():
    rep = dim_stabilization_probe(gens("abelian_gens.txt", 8), 1, 8)
    assert (rep.verdict.kind, rep.verdict.value, rep.verdict.since) == ("stabilized", 2, 3)
    rep = dim_stabilization_probe(gens("eosnfd_gens.txt", 6), 2, 6)
    assert rep.verdict.kind == "strictly-growing"
    assert classify([(1, 1), (2, 1), (3, 2)]).kind == "inconclusive"
    assert classify([(4, 3)]).kind == "stabilized"
    with pytest.raises(ArithmeticError):
        classify([(1, 2), (2, 1)])


def test_series_profile():
    rows = series_profile(gens("abelian_gens.txt", 5), 5, k_min=3)
    assert all((r.derived_length, r.nilpotency_class) == (1, 1) for r in rows)
    rows = series_profile(gens("eosnfd_gens.txt", 6), 6, k_min=3)
    assert all(r.derived_length == 2 and r.nilpotency_class == r.level - 1 for r in rows)
    rows = series_profile(gens("derived3_gens.txt", 6), 6, k_min=6)
    assert rows[-1].derived_length == 3


def test_codim_examples():
    g = gens("eosnfd_gens.txt", 6)
    phi, eta = g
    assert codim_at(g, [eta], 2) == 1
    assert codim_at(g, g, 4) == 0
    assert codim_at(g, [eta], 6) == 5
    with pytest.raises(ContainmentError):
        codim_at([eta], [phi], 4)
