"""``jet`` command-line frontend.

Exit status: 0 on success, 1 on domain errors (one line ``error CODE: message`` on
stderr), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Sequence

from . import __version__
from .errors import JetError
from .linalg import Q
from .groupdim import EigenvalueSpec, cyclic_dim, dim_stabilization_probe, series_profile
from .intersection import IdealSpec, multiplicity, pullback_ideal
from .jets import exp_vf, log_map, parse_vector_field, power_t
from .jordan import is_semisimple_at, is_unipotent, multiplicative_jordan
from .orbits import (
    ExperimentConfig,
    arnold_sequence,
    boundedness_verdict,
    orbit_multiplicity_sweep,
    parse_generators,
    parse_range,
)
from .parsing import format_map, infer_n
from .series import compose_all, count_monomials, map_inverse, project

log = logging.getLogger("fdjet")

WARN_ROWS = 3000
MAX_ROWS = 20000


class UsageError(Exception):
    pass


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_map(path, cutoff):
    maps = parse_generators(_read(path), cutoff)
    if len(maps) != 1:
        raise UsageError(f"{path}: expected exactly one map, found {len(maps)}")
    return maps[0][1]


def _table(rows: Sequence[Sequence], csv: bool, header: Sequence[str] | None = None) -> str:
    rows = [[str(c) for c in r] for r in rows]
    if csv:
        lines = [",".join(header)] if header else []
        return "\n".join(lines + [",".join(r) for r in rows])
    allrows = ([list(header)] if header else []) + rows
    if not allrows:
        return ""
    widths = [max(len(r[i]) for r in allrows) for i in range(len(allrows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in allrows)


def parse_spec(text: str) -> EigenvalueSpec:
    """Eigenvalue file: ``q`` or ``q zeta s/r`` per line, or a ``symbols`` header plus vectors.

    A first line ``additive`` marks additive (vector field) data.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    additive = bool(lines) and lines[0] == "additive"
    if additive:
        lines = lines[1:]
    if lines and lines[0].startswith("symbols"):
        symbols = lines[0].split()[1:]
        vectors = [[Q(x) for x in ln.split()] for ln in lines[1:]]
        return EigenvalueSpec.symbolic(symbols, vectors, additive=additive)
    values = []
    for ln in lines:
        parts = ln.split()
        if len(parts) == 1:
            values.append((Q(parts[0]),))
        elif len(parts) == 3 and parts[1] == "zeta":
            s, r = parts[2].split("/")
            values.append((Q(parts[0]), int(s), int(r)))
        else:
            raise UsageError(f"bad eigenvalue line {ln!r}")
    return EigenvalueSpec.explicit(values)


# ------------------------------------------------------------------ subcommands


def cmd_compose(a):
    maps = [_load_map(p, a.cutoff) for p in a.maps]
    print(format_map(compose_all(maps)))


def cmd_inverse(a):
    print(format_map(map_inverse(_load_map(a.map, a.cutoff))))


def cmd_exp(a):
    text = _read(a.field).strip()
    X = parse_vector_field(text, a.n or infer_n(text), a.cutoff)
    print(format_map(exp_vf(X)))


def cmd_log(a):
    print(log_map(_load_map(a.map, a.cutoff)))


def cmd_power(a):
    print(format_map(power_t(_load_map(a.map, a.cutoff), Q(a.t))))


def _guard_size(n: int, k: int, allow_large: bool) -> None:
    rows = count_monomials(n, 1, k)
    if rows > MAX_ROWS and not allow_large:
        raise UsageError(f"jet matrix would have {rows} rows (limit {MAX_ROWS}); pass --allow-large")
    if rows > WARN_ROWS:
        log.warning("jet matrix has %d rows; this may be slow", rows)


def cmd_jordan(a):
    phi = _load_map(a.map, a.cutoff)
    _guard_size(phi.n, phi.cutoff, a.allow_large)
    pair = multiplicative_jordan(phi)
    cert = is_unipotent(pair.unipotent)
    print(f"semisimple: {format_map(pair.semisimple)}")
    print(f"unipotent: {format_map(pair.unipotent)}")
    print(f"semisimple-factor semisimple-at-k={phi.cutoff}: {str(is_semisimple_at(pair.semisimple)).lower()}")
    print(f"unipotent-factor unipotent: {str(cert.flag).lower()} witness {cert.witness}")
    print(f"input unipotent: {str(bool(is_unipotent(phi))).lower()}")


def _krange(text: str) -> range:
    r = parse_range(text)
    if not r or r.start < 1:
        raise UsageError(f"bad level range {text!r}")
    return r


def cmd_dim(a):
    levels = _krange(a.krange)
    gens = [g for _, g in parse_generators(_read(a.gens), max(levels.stop - 1, a.cutoff))]
    if a.spec:
        if len(gens) != 1:
            raise UsageError("--spec applies to a single (cyclic) generator")
        spec = parse_spec(_read(a.spec))
        rows = [(k, cyclic_dim(project(gens[0], k), spec)) for k in levels]
        print(_table(rows, a.csv, ("k", "dim")))
        return
    report = dim_stabilization_probe(gens, levels.start, levels.stop - 1)
    print(_table(report.levels, a.csv, ("k", "dim")))
    if not a.csv:
        print(f"verdict: {report.verdict}")
        print(f"note: {report.note}")


def cmd_series_profile(a):
    levels = _krange(a.krange)
    gens = [g for _, g in parse_generators(_read(a.gens), max(levels.stop - 1, a.cutoff))]
    rows = series_profile(gens, levels.stop - 1, levels.start)
    print(_table([(r.level, r.dimension, r.derived_length, r.nilpotency_class) for r in rows], a.csv,
                 ("k", "dim", "derived_length", "nilpotency_class")))


def cmd_mult(a):
    text_a, text_b = _read(a.ideal_a), _read(a.ideal_b)
    phi = _load_map(a.map, a.cutoff) if a.map else None
    n = phi.n if phi is not None else max(infer_n(text_a), infer_n(text_b))
    I, J = IdealSpec.from_text(text_a, n), IdealSpec.from_text(text_b, n)
    if phi is not None:
        I = pullback_ideal(I, phi)
    res = multiplicity(I, J, a.kmax)
    if a.csv:
        print(_table([(res.kind, res.value, res.level)], True, ("kind", "value", "level")))
    else:
        print(res)
        print("d_k: " + " ".join(map(str, res.jet_dims)))


def _config(a) -> ExperimentConfig:
    cfg = ExperimentConfig.load(a.config)
    if a.workers_set:
        cfg.workers = a.workers
    if a.dedup:
        cfg.dedup = True
    if a.kmax_set:
        cfg.k_max = a.kmax
    return cfg


def cmd_sweep(a):
    cfg = _config(a)
    P = cfg.presentation()
    I, J = cfg.ideals()
    report = orbit_multiplicity_sweep(P, I, J, cfg.L, cfg.k_max, cfg.workers, cfg.dedup)
    print(_table(report.rows(), a.csv, ("word", "value", "kind", "level")))
    if not a.csv:
        print(f"max-finite: {report.max_finite}")
        print(f"divergent: {len(report.divergent_words)} word(s)")
        print(f"note: {report.note} (L={report.L}, k_max={report.k_max})")
        if cfg.reference_L is not None:
            ref = orbit_multiplicity_sweep(P, I, J, cfg.reference_L, cfg.k_max, cfg.workers, cfg.dedup)
            print(f"verdict: {boundedness_verdict(ref, report)} (L={cfg.reference_L} vs L={cfg.L})")


def cmd_arnold(a):
    cfg = _config(a)
    if cfg.map is None:
        raise UsageError("arnold needs 'map = <file>' in the config")
    phi = _load_map(cfg.map, cfg.cutoff)
    I, J = cfg.ideals()
    seq = arnold_sequence(phi, I, J, cfg.n_range, cfg.k_max, cfg.workers)
    rows = []
    for e, res, err in seq:
        rows.append((e, "", "error", err) if res is None else (e, res.value, res.kind, res.level))
    print(_table(rows, a.csv, ("n", "value", "kind", "level")))


COMMANDS = {
    "compose": cmd_compose,
    "inverse": cmd_inverse,
    "exp": cmd_exp,
    "log": cmd_log,
    "power": cmd_power,
    "jordan": cmd_jordan,
    "dim": cmd_dim,
    "series-profile": cmd_series_profile,
    "mult": cmd_mult,
    "sweep": cmd_sweep,
    "arnold": cmd_arnold,
}


class _Tracked(argparse.Action):
    """Store a value and remember that it was given explicitly."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, self.dest + "_set", True)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cutoff", type=int, default=8, help="jet level for parsed maps (default 8)")
    common.add_argument("--kmax", type=int, default=32, action=_Tracked, help="multiplicity level horizon (default 32)")
    common.add_argument("--workers", type=int, default=1, action=_Tracked, help="worker processes for sweeps")
    common.add_argument("--dedup", action="store_true", help="drop words whose jets repeat")
    common.add_argument("--csv", action="store_true", help="comma-separated rows")
    common.add_argument("--timing", action="store_true", help="report wall time on stderr")
    common.set_defaults(kmax_set=False, workers_set=False)

    p = argparse.ArgumentParser(prog="jet", description="Exact computations with jets of formal diffeomorphisms.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("compose", parents=[common], help="compose maps left to right")
    s.add_argument("--maps", nargs="+", required=True)
    s = sub.add_parser("inverse", parents=[common], help="invert a map")
    s.add_argument("--map", required=True)
    s = sub.add_parser("exp", parents=[common], help="exponential of a nilpotent vector field")
    s.add_argument("--field", required=True)
    s.add_argument("--n", type=int)
    s = sub.add_parser("log", parents=[common], help="infinitesimal generator of a unipotent map")
    s.add_argument("--map", required=True)
    s = sub.add_parser("power", parents=[common], help="rational power of a unipotent map")
    s.add_argument("--map", required=True)
    s.add_argument("--t", required=True)
    s = sub.add_parser("jordan", parents=[common], help="multiplicative Jordan decomposition")
    s.add_argument("--map", required=True)
    s.add_argument("--allow-large", action="store_true")
    for name in ("dim", "series-profile"):
        s = sub.add_parser(name, parents=[common], help="closure dimensions" if name == "dim" else "derived/central series")
        s.add_argument("--gens", required=True)
        s.add_argument("--krange", required=True, help="level range a..b")
        if name == "dim":
            s.add_argument("--spec", help="eigenvalue file for a cyclic non-unipotent generator")
    s = sub.add_parser("mult", parents=[common], help="local intersection multiplicity")
    s.add_argument("--ideal-a", required=True)
    s.add_argument("--ideal-b", required=True)
    s.add_argument("--map", help="pull ideal A back under this map first")
    for name in ("sweep", "arnold"):
        s = sub.add_parser(name, parents=[common], help=f"{name} experiment from a config file")
        s.add_argument("--config", required=True)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"jet: {exc}", file=sys.stderr)
        return 2
    except JetError as exc:
        print(f"error {exc.code}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error INVALID: {exc}", file=sys.stderr)
        return 1
    if args.timing:
        print(f"time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
