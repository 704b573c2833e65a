"""Reproduce the worked commutator, Jordan and multiplicity examples."""
from fdjet import (
    IdealSpec,
    commutator,
    format_map,
    map_inverse,
    multiplicative_jordan,
    multiplicity,
    parse_map,
)


def commutators(k: int = 8) -> None:
    phi = parse_map("(x, y*(1+x))", k)
    eta = parse_map("(x, y + x^2)", k)
    psi = parse_map("(x/(1-x), y)", k)
    a = commutator(psi, phi)
    b = commutator(map_inverse(eta), phi)
    rows = [
        ("[psi,phi]", a, "(x, y*(1+2x)/(1+x)^2)"),
        ("[eta^-1,phi]", b, "(x, y + x^3)"),
        ("[[psi,phi],[eta^-1,phi]]", commutator(a, b), "(x, y - x^5/(1+x)^2)"),
    ]
    for name, value, closed in rows:
        ok = value == parse_map(closed, k)
        print(f"{name:26s} {'ok ' if ok else 'BAD'} {format_map(value)}")


def jordan() -> None:
    for text in ["(x + x^2)", "(2x, 3y)", "(2x, 4y + x^2)", "(2x + y, 2y + x^2)"]:
        pair = multiplicative_jordan(parse_map(text, 3))
        print(f"{text:20s} s = {format_map(pair.semisimple)}   u = {format_map(pair.unipotent)}")


def multiplicities() -> None:
    cases = [
        (["x", "y", "z^3"], ["y"], 3),
        (["y"], ["y - x^2"], 2),
        (["y^2 - x^3"], ["y"], 2),
        (["y"], ["y"], 2),
    ]
    for a, b, n in cases:
        res = multiplicity(IdealSpec.from_strings(a, n), IdealSpec.from_strings(b, n), k_max=10)
        print(f"({', '.join(a)}) + ({', '.join(b)}): {res}")


if __name__ == "__main__":
    print("commutators at cutoff 8")
    commutators()
    print("\nJordan decompositions at cutoff 3")
    jordan()
    print("\nintersection multiplicities")
    multiplicities()
