"""Real-root classification of a small parametric system, printed as a table.

    python scripts/classify_demo.py ["X1^2 - W1*X1 + 1" ...]
"""
import sys

from grur.parser import parse_parampoly
from grur.realroots import classify_real_roots


def main(argv):
    polys = argv or ["X1^2 - W1*X1 + 1"]
    names = sorted({tok for p in polys for tok in p.replace("*", " ").replace("^", " ").split()
                    if tok[:1] in "WX" and tok[1:].isdigit()})
    params = tuple(n for n in names if n[0] == "W")
    vars = tuple(n for n in names if n[0] == "X")
    F = [parse_parampoly(p, params, vars) for p in polys]
    res = classify_real_roots(F)
    print("system:", ", ".join(polys))
    print("h0:", res.grur.h0)
    for k, f in enumerate(res.formulas):
        print(f"P{k + 1} = {f}")
    for c in res.excluded_certificates:
        print("excluded:", c)
    print("cells (sign of P1.. -> real solutions):")
    for signs, count in sorted(res.cells.items()):
        print("  ", " ".join("+" if s > 0 else "-" for s in signs), "->", count)


if __name__ == "__main__":
    main(sys.argv[1:])
