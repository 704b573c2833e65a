"""Orbit experiments: words in generators, multiplicity sweeps, iterate sequences.

Sweeps only ever see words up to a finite length L, so every verdict produced here
is evidence about the group, never a proof about its closure.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DimensionMismatchError, JetError, NotNilpotentError
from .linalg import Q, Rational
from .intersection import IdealSpec, MultiplicityResult, multiplicity, pullback_ideal
from .jets import VectorFieldJet, exp_vf, is_nilpotent, parse_vector_field
from .parsing import infer_n, parse_map
from .series import DiffeoJet, compose_all, map_compose, map_inverse

log = logging.getLogger(__name__)

GAP_NOTE = "words of length <= L only; the closure of the group is not enumerated"


@dataclass(frozen=True)
class Letter:
    name: str
    power: Rational
    flow: bool = False

    def inverse(self) -> "Letter":
        return Letter(self.name, -self.power, self.flow)

    def __str__(self) -> str:
        if self.flow:
            return f"exp({self.power}*{self.name})"
        return self.name if self.power == 1 else f"{self.name}^-1"


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[tuple[str, DiffeoJet], ...] = ()
    flows: tuple[tuple[str, VectorFieldJet, tuple[Rational, ...]], ...] = ()
    n: int = 1
    cutoff: int = 1

    def __post_init__(self):
        names = [g for g, _ in self.generators] + [f for f, _, _ in self.flows]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for name, jet in self.generators:
            if jet.n != self.n or jet.cutoff != self.cutoff:
                raise DimensionMismatchError(f"generator {name} has (n={jet.n}, k={jet.cutoff})")
        for name, X, _ in self.flows:
            if X.n != self.n or X.cutoff != self.cutoff:
                raise DimensionMismatchError(f"flow {name} has (n={X.n}, k={X.cutoff})")
            if not is_nilpotent(X):
                raise NotNilpotentError(f"flow {name} has a non-nilpotent linear part")

    @classmethod
    def of(cls, generators: dict[str, DiffeoJet] | Sequence[tuple[str, DiffeoJet]],
           flows: Sequence[tuple[str, VectorFieldJet, Sequence]] = (),
           n: int | None = None, cutoff: int | None = None) -> "GroupPresentation":
        gens = tuple(generators.items()) if isinstance(generators, dict) else tuple(generators)
        fl = tuple((name, X, tuple(Q(t) for t in ts)) for name, X, ts in flows)
        ref = gens[0][1] if gens else (fl[0][1] if fl else None)
        if ref is not None:
            n, cutoff = ref.n, ref.cutoff
        if n is None or cutoff is None:
            raise ValueError("an empty presentation needs n and cutoff")
        return cls(gens, fl, n, cutoff)

    def alphabet(self) -> list[Letter]:
        out: list[Letter] = []
        for name, _ in self.generators:
            out += [Letter(name, Q(1)), Letter(name, Q(-1))]
        for name, _, samples in self.flows:
            for t in samples:
                for letter in (Letter(name, t, True), Letter(name, -t, True)):
                    if letter.power and letter not in out:
                        out.append(letter)
        return out

    def letter_jet(self, letter: Letter) -> DiffeoJet:
        if letter.flow:
            X = dict((f, x) for f, x, _ in self.flows)[letter.name]
            return exp_vf(X * letter.power)
        jet = dict(self.generators)[letter.name]
        return jet if letter.power == 1 else map_inverse(jet)

    def identity(self) -> DiffeoJet:
        return DiffeoJet.identity(self.n, self.cutoff)


def word_text(word: Sequence[Letter]) -> str:
    return "*".join(str(a) for a in word) if word else "id"


def enumerate_words(P: GroupPresentation, L: int, dedup: bool = False) -> list[tuple[tuple[Letter, ...], DiffeoJet]]:
    """Freely reduced words of length <= L, by length then alphabet order, with their jets."""
    if L < 0:
        raise ValueError("word length bound must be >= 0")
    alphabet = P.alphabet()
    jets = {a: P.letter_jet(a) for a in alphabet}
    layer: list[tuple[tuple[Letter, ...], DiffeoJet]] = [((), P.identity())]
    out = list(layer)
    for _ in range(L):
        nxt = []
        for word, jet in layer:
            for a in alphabet:
                if word and word[-1] == a.inverse():
                    continue
                nxt.append((word + (a,), map_compose(jet, jets[a])))
        out.extend(nxt)
        layer = nxt
    if dedup:
        seen: set[DiffeoJet] = set()
        kept = []
        for word, jet in out:
            if jet not in seen:
                seen.add(jet)
                kept.append((word, jet))
        out = kept
    return out


def word_jet(P: GroupPresentation, word: Sequence[Letter]) -> DiffeoJet:
    return compose_all((P.letter_jet(a) for a in word), P.n, P.cutoff)


@dataclass(frozen=True)
class SweepEntry:
    word: str
    result: MultiplicityResult | None
    error: str | None = None

    def row(self) -> tuple[str, str, str, str]:
        if self.result is None:
            return (self.word, "", "error", self.error or "")
        return (self.word, str(self.result.value), self.result.kind, str(self.result.level))


@dataclass(frozen=True)
class SweepReport:
    entries: tuple[SweepEntry, ...]
    max_finite: int | None
    divergent_words: tuple[str, ...]
    L: int
    k_max: int
    note: str = GAP_NOTE

    def rows(self) -> list[tuple[str, str, str, str]]:
        return [e.row() for e in self.entries]


def _sweep_one(args) -> SweepEntry:
    word, jet, I, J, k_max = args
    try:
        res = multiplicity(pullback_ideal(I, jet), J, k_max)
    except JetError as exc:
        return SweepEntry(word, None, f"{exc.code}: {exc}")
    return SweepEntry(word, res)


def _run(tasks: list, fn, workers: int) -> list:
    if workers <= 1 or len(tasks) < 2:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


def orbit_multiplicity_sweep(P: GroupPresentation, I: IdealSpec, J: IdealSpec, L: int, k_max: int,
                             workers: int = 1, dedup: bool = False) -> SweepReport:
    words = enumerate_words(P, L, dedup)
    if words:
        # spot check: the stored jet of the last word matches a fresh composite
        last_word, last_jet = words[-1]
        assert word_jet(P, last_word) == last_jet
    tasks = [(word_text(w), jet, I, J, k_max) for w, jet in words]
    entries = tuple(_run(tasks, _sweep_one, workers))
    exact = [e.result.value for e in entries if e.result is not None and e.result.exact]
    divergent = tuple(e.word for e in entries if e.result is not None and not e.result.exact)
    return SweepReport(entries, max(exact) if exact else None, divergent, L, k_max)


def arnold_sequence(phi: DiffeoJet, I: IdealSpec, J: IdealSpec, n_range: Iterable[int], k_max: int = 32,
                    workers: int = 1) -> list[tuple[int, MultiplicityResult | None, str | None]]:
    """mu_n = (phi^n)^* I against J for each n in ``n_range``."""
    ns = list(n_range)
    iterates: dict[int, DiffeoJet] = {0: DiffeoJet.identity(phi.n, phi.cutoff)}
    if ns:
        inv = map_inverse(phi)
        for e in range(1, max(max(ns), 0) + 1):
            iterates[e] = map_compose(iterates[e - 1], phi)
        for e in range(-1, min(min(ns), 0) - 1, -1):
            iterates[e] = map_compose(iterates[e + 1], inv)
    tasks = [(str(e), iterates[e], I, J, k_max) for e in ns]
    entries = _run(tasks, _sweep_one, workers)
    return [(e, entry.result, entry.error) for e, entry in zip(ns, entries)]


@dataclass(frozen=True)
class BoundednessVerdict:
    kind: str  # "bounded-evidence" | "growing" | "inconclusive"
    reference_value: int | None
    value: int | None
    note: str = "evidence from finite sweeps, not a proof"

    def __str__(self) -> str:
        return f"{self.kind} ({self.reference_value} -> {self.value})"


def boundedness_verdict(reference: SweepReport, report: SweepReport) -> BoundednessVerdict:
    """Compare the largest finite multiplicity of a smaller sweep against a larger one."""
    a, b = reference.max_finite, report.max_finite
    if a == b:
        kind = "bounded-evidence"
    elif b is not None and (a is None or b > a):
        kind = "growing"
    else:
        kind = "inconclusive"
    return BoundednessVerdict(kind, a, b)


# ------------------------------------------------------------------ file formats


def _content_lines(text: str) -> list[str]:
    out = []
    for ln in text.splitlines():
        ln = ln.split("#", 1)[0].strip()
        if ln:
            out.append(ln)
    return out


def _named(lines: list[str], prefix: str) -> list[tuple[str, str]]:
    out = []
    for i, ln in enumerate(lines):
        name, sep, body = ln.partition("=")
        if sep and name.strip().isidentifier():
            out.append((name.strip(), body.strip()))
        else:
            out.append((f"{prefix}{i + 1}", ln))
    return out


def parse_generators(text: str, cutoff: int) -> list[tuple[str, DiffeoJet]]:
    """One map per line, optionally ``name = (map)``; unnamed maps become g1, g2, ..."""
    return [(name, parse_map(body, cutoff)) for name, body in _named(_content_lines(text), "g")]


def parse_flows(text: str, n: int, cutoff: int) -> list[tuple[str, VectorFieldJet]]:
    return [(name, parse_vector_field(body, n, cutoff)) for name, body in _named(_content_lines(text), "X")]


def parse_range(text: str) -> range:
    """``a..b`` inclusive, or a single integer."""
    lo, sep, hi = text.partition("..")
    return range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)


@dataclass
class ExperimentConfig:
    """Line-oriented ``key = value`` experiment description; paths are relative to the file."""

    gens: list[Path] = field(default_factory=list)
    flows: list[Path] = field(default_factory=list)
    samples: list[Rational] = field(default_factory=lambda: [Q(1)])
    map: Path | None = None
    ideal_a: Path | None = None
    ideal_b: Path | None = None
    n: int | None = None
    cutoff: int = 8
    L: int = 2
    reference_L: int | None = None
    k_max: int = 32
    n_range: range = range(-5, 6)
    workers: int = 1
    dedup: bool = False

    @classmethod
    def load(cls, path: str | Path) -> "ExperimentConfig":
        path = Path(path)
        base = path.parent
        cfg = cls()
        for ln in _content_lines(path.read_text(encoding="utf-8")):
            key, sep, value = ln.partition("=")
            key, value = key.strip(), value.strip()
            if not sep:
                raise ValueError(f"config line without '=': {ln!r}")
            if key in ("gens", "flows"):
                setattr(cfg, key, [base / p for p in value.split()])
            elif key in ("map", "ideal_a", "ideal_b"):
                setattr(cfg, key, base / value)
            elif key == "samples":
                cfg.samples = [Q(s) for s in value.replace(",", " ").split()]
            elif key in ("n", "cutoff", "L", "reference_L", "k_max", "workers"):
                setattr(cfg, key, int(value))
            elif key == "n_range":
                cfg.n_range = parse_range(value)
            elif key == "dedup":
                cfg.dedup = value.lower() in ("1", "true", "yes", "on")
            else:
                raise ValueError(f"unknown config key {key!r}")
        return cfg

    def ideals(self) -> tuple[IdealSpec, IdealSpec]:
        if self.ideal_a is None or self.ideal_b is None:
            raise ValueError("config needs ideal_a and ideal_b")
        return (IdealSpec.from_text(self.ideal_a.read_text(encoding="utf-8"), self.n),
                IdealSpec.from_text(self.ideal_b.read_text(encoding="utf-8"), self.n))

    def presentation(self) -> GroupPresentation:
        gens: list[tuple[str, DiffeoJet]] = []
        for p in self.gens:
            gens += parse_generators(p.read_text(encoding="utf-8"), self.cutoff)
        n = self.n or (gens[0][1].n if gens else None)
        flows = []
        for p in self.flows:
            text = p.read_text(encoding="utf-8")
            n = n or infer_n(text)
            flows += [(name, X, self.samples) for name, X in parse_flows(text, n, self.cutoff)]
        return GroupPresentation.of(gens, flows, n=n, cutoff=self.cutoff)
