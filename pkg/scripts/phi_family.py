"""Multiplicity law j+2 for the phi(j) family and orbit sweeps over its first m members."""
import argparse
import time
from dataclasses import dataclass

from fdjet import GroupPresentation, IdealSpec, boundedness_verdict, multiplicity, orbit_multiplicity_sweep, parse_map, pullback_ideal


@dataclass
class FamilyConfig:
    j_max: int = 6
    m_small: int = 3
    m_large: int = 6
    L: int = 1
    workers: int = 1

    @property
    def k_max(self) -> int:
        return self.j_max + 4

    @property
    def cutoff(self) -> int:
        # pulled-back generators must stay valid past the last level the stopping rule reads
        return self.k_max + 1


def phi(j: int, cutoff: int):
    return parse_map(f"(x, y + 1/{j}*x^2 + z^{j + 2}, z)", cutoff)


def main(cfg: FamilyConfig) -> None:
    I = IdealSpec.from_strings(["x", "y"], 3)
    J = IdealSpec.from_strings(["y"], 3)
    start = time.perf_counter()
    for j in range(1, cfg.j_max + 1):
        res = multiplicity(pullback_ideal(I, phi(j, cfg.cutoff)), J, cfg.k_max)
        print(f"j={j}: {res}  (law j+2 = {j + 2})")
    print(f"law checked in {time.perf_counter() - start:.2f}s")

    reports = []
    for m in (cfg.m_small, cfg.m_large):
        P = GroupPresentation.of([(f"p{j}", phi(j, cfg.cutoff)) for j in range(1, m + 1)])
        rep = orbit_multiplicity_sweep(P, I, J, cfg.L, cfg.k_max, cfg.workers)
        print(f"m={m}, L={cfg.L}: {len(rep.entries)} words, max-finite {rep.max_finite}, "
              f"{len(rep.divergent_words)} divergent, {sum(e.result is None for e in rep.entries)} errors")
        reports.append(rep)
    print(f"verdict: {boundedness_verdict(*reports)}")
    print(f"note: {reports[-1].note}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--j-max", type=int, default=FamilyConfig.j_max)
    ap.add_argument("--L", type=int, default=FamilyConfig.L)
    ap.add_argument("--workers", type=int, default=FamilyConfig.workers)
    args = ap.parse_args()
    main(FamilyConfig(j_max=args.j_max, m_large=min(6, args.j_max), L=args.L, workers=args.workers))
