import itertools
from fractions import Fraction
from pathlib import Path

import pytest

from fdjet.intersection import IdealSpec
from fdjet.jets import parse_vector_field
from fdjet.orbits import (
    ExperimentConfig,
    GroupPresentation,
    SweepReport,
    arnold_sequence,
    boundedness_verdict,
    enumerate_words,
    orbit_multiplicity_sweep,
    parse_generators,
    parse_range,
    word_jet,
    word_text,
)
from fdjet.parsing import parse_map
from fdjet.series import compose_all, map_inverse

DATA = Path(__file__).resolve().parent.parent / "data"


def pres(**maps):
    return GroupPresentation.of({k: parse_map(v, 6) for k, v in maps.items()})


def test_single_generator_words():
    P = pres(a="(x, y + x^2)")
    words = enumerate_words(P, 2)
    assert [word_text(w) for w, _ in words] == ["id", "a", "a^-1", "a*a", "a^-1*a^-1"]
    assert len(enumerate_words(P, 0)) == 1


def test_commuting_generators_collapse_like_brute_force():
    P = pres(a="(x, y + x^2)", b="(x, y + x^3)")
    words = enumerate_words(P, 2)
    assert len(words) == 17
    letters = P.alphabet()
    # brute force: all sequences of length <= 2, composed independently
    jets = set()
    for length in range(3):
        for seq in itertools.product(letters, repeat=length):
            jets.add(compose_all([P.letter_jet(a) for a in seq], P.n, P.cutoff))
    deduped = enumerate_words(P, 2, dedup=True)
    assert len(deduped) == len(jets) == 13


def test_word_jets_agree_with_composition():
    P = pres(a="(x, y + x^2)", b="(x, y*(1+x))")
    for w, jet in enumerate_words(P, 3):
        assert word_jet(P, w) == jet
        assert compose_all([map_inverse(P.letter_jet(a)) for a in reversed(w)], P.n, P.cutoff) == map_inverse(jet)


def test_flow_letters():
    X = parse_vector_field("x^2*d/dy", 2, 4)
    P = GroupPresentation.of([], [("X", X, [1, Fraction(1, 2)])])
    assert [str(a) for a in P.alphabet()] == ["exp(1*X)", "exp(-1*X)", "exp(1/2*X)", "exp(-1/2*X)"]


def test_sweep_family():
    cfg = ExperimentConfig.load(DATA / "sweep_family.cfg")
    I, J = cfg.ideals()
    rep = orbit_multiplicity_sweep(cfg.presentation(), I, J, cfg.L, cfg.k_max)
    assert rep.max_finite == 5
    values = {e.word: e.result.value for e in rep.entries if e.result is not None and e.result.exact}
    assert values["p1"] == 3 and values["p2"] == 4 and values["p3"] == 5
    assert "id" in rep.divergent_words
    assert rep.note


def test_sweep_is_deterministic_across_workers():
    cfg = ExperimentConfig.load(DATA / "sweep_eta.cfg")
    I, J = cfg.ideals()
    P = cfg.presentation()
    one = orbit_multiplicity_sweep(P, I, J, 3, cfg.k_max, workers=1)
    two = orbit_multiplicity_sweep(P, I, J, 3, cfg.k_max, workers=2)
    assert one.rows() == two.rows()


def test_boundedness_verdicts():
    cfg = ExperimentConfig.load(DATA / "sweep_eta.cfg")
    I, J = cfg.ideals()
    P = cfg.presentation()
    ref = orbit_multiplicity_sweep(P, I, J, cfg.reference_L, cfg.k_max)
    big = orbit_multiplicity_sweep(P, I, J, cfg.L, cfg.k_max)
    assert boundedness_verdict(ref, big).kind == "bounded-evidence"
    fake = lambda v: SweepReport((), v, (), 1, 1)
    assert boundedness_verdict(fake(2), fake(3)).kind == "growing"
    assert boundedness_verdict(fake(3), fake(2)).kind == "inconclusive"


def test_arnold_sequence():
    cfg = ExperimentConfig.load(DATA / "arnold.cfg")
    I, J = cfg.ideals()
    phi = parse_map((DATA / "arnold_map.txt").read_text().strip(), cfg.cutoff)
    seq = arnold_sequence(phi, I, J, cfg.n_range, cfg.k_max)
    assert [e for e, _, _ in seq] == list(range(-20, 21))
    for e, res, err in seq:
        assert err is None and res.exact and res.value == 1


def test_arnold_degenerate_iterate():
    phi = parse_map("(2x, y/2)", 4)
    I = IdealSpec.from_strings(["y - x"])
    J = IdealSpec.from_strings(["y - x"])
    seq = dict((e, r) for e, r, _ in arnold_sequence(phi, I, J, range(-1, 2), k_max=3))
    assert not seq[0].exact and seq[1].exact and seq[1].value == 1


def test_file_helpers():
    named = parse_generators("a = (x)\n(2x)  # comment\n", 3)
    assert [n for n, _ in named] == ["a", "g2"]
    assert parse_range("-2..1") == range(-2, 2) and parse_range("3") == range(3, 4)
    with pytest.raises(ValueError):
        enumerate_words(pres(a="(x)"), -1)
