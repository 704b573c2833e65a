"""Closure dimension probes: an infinite dimensional pair, an abelian pair, and a derived length 3 group."""
import argparse

from fdjet import dim_stabilization_probe, parse_map, series_profile

GROUPS = {
    "phi,eta": ["(x, y*(1+x))", "(x, y + x^2)"],
    "abelian": ["(x, y + x^2)", "(x, y + x^3)"],
    "phi(1),phi(2)": ["(x, y + x^2 + x^3)", "(x, y + 1/2*x^2 + x^4)"],
    "phi,eta,psi": ["(x, y*(1+x))", "(x, y + x^2)", "(x/(1-x), y)"],
}


def main(k_max: int) -> None:
    for name, texts in GROUPS.items():
        gens = [parse_map(t, k_max) for t in texts]
        rep = dim_stabilization_probe(gens, 1, k_max)
        dims = " ".join(str(d) for _, d in rep.levels)
        print(f"{name:14s} dims k=1..{k_max}: {dims}")
        print(f"{'':14s} {rep.verdict}")
    print("\nseries profile of <phi, eta, psi>")
    gens = [parse_map(t, k_max) for t in GROUPS["phi,eta,psi"]]
    print("k  dim  derived  class")
    for row in series_profile(gens, k_max, k_min=2):
        print(f"{row.level:<2d} {row.dimension:<4d} {row.derived_length:<8d} {row.nilpotency_class}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=7)
    main(ap.parse_args().kmax)
