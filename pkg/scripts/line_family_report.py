"""Tabulate the dual of every coprime line on the 2-torus.

For each coprime pair (p, q) up to a bound, the line
q*x1 - p*x2 + b = 0 carries a rank-one system with holonomy xi; its
transform is again a line, and this report lists both sides so the
family can be eyeballed or diffed.  Output is deterministic for fixed
arguments.
"""

import argparse
import json
import math
import sys
from fractions import Fraction

from torusfm import SubtorusLocalSystem, Torus, subtorus_from_equations, transform


def line_rows(bound, offset, holonomy):
    torus = Torus(2)
    for p in range(1, bound + 1):
        for q in range(1, bound + 1):
            if math.gcd(p, q) != 1:
                continue
            line = subtorus_from_equations(torus, [[q, -p]], [offset])
            res = transform(SubtorusLocalSystem(line, (holonomy,)))
            out = res.system
            yield {
                "p": p,
                "q": q,
                "line": f"{q}*x1 {-p:+d}*x2 + {line.offset[0]} = 0",
                "dual": " ".join(str(c) for c in out.support.eqns.rows[0]),
                "dual.offset": str(out.support.offset[0]),
                "dual.holonomy": str(out.holonomy[0]),
                "wit": res.wit_index,
            }


def main(argv=None):
    ap = argparse.ArgumentParser(
        description="dual data of the coprime line family on the 2-torus"
    )
    ap.add_argument(
        "--bound", type=int, default=7, metavar="N",
        help="largest coefficient in the coprime pairs (default 7)",
    )
    ap.add_argument(
        "--offset", type=Fraction, default=Fraction(1, 5), metavar="P/Q",
        help="line offset b (default 1/5)",
    )
    ap.add_argument(
        "--holonomy", type=Fraction, default=Fraction(3, 7), metavar="P/Q",
        help="holonomy xi along the line (default 3/7)",
    )
    ap.add_argument("--format", choices=("text", "json"), default="text")
    args = ap.parse_args(argv)
    if args.bound < 1:
        ap.error("--bound must be positive")

    rows = list(line_rows(args.bound, args.offset, args.holonomy))
    if args.format == "json":
        json.dump(rows, sys.stdout, indent=2)
        sys.stdout.write("\n")
        return 0

    header = f"{'p':>3} {'q':>3}  {'line':<28} {'dual eqn':<10} {'offset':>8} {'holonomy':>9} {'wit':>4}"
    print(header)
    print("-" * len(header))
    for r in rows:
        print(
            f"{r['p']:>3} {r['q']:>3}  {r['line']:<28} {r['dual']:<10}"
            f" {r['dual.offset']:>8} {r['dual.holonomy']:>9} {r['wit']:>4}"
        )
    print(f"{len(rows)} coprime lines")
    return 0


if __name__ == "__main__":
    sys.exit(main())
