"""Census of silver polynomials: counts, irreducibility, primitivity, Pisot status.

    python3 scripts/census.py --max-degree 8 [--csv census.csv]
"""
import argparse
import csv
import sys
import time

from fractions import Fraction

from silverline.matrices import silver_primitivity_by_gcd
from silverline.pisot import is_pisot
from silverline.polynomials import count_real_roots, enumerate_silver_polynomials, factor
from silverline.reals import AlgebraicReal, silver_number


def pisot_status(sp, factors):
    """Pisot status of the irreducible factor that carries the silver number."""
    approx = silver_number(sp, Fraction(1, 10**30))
    for f in factors:
        if count_real_roots(f, approx.lo, approx.hi) == 1:
            return is_pisot(f, AlgebraicReal(f, approx.lo, approx.hi, check=False)).status
    raise AssertionError("silver number not found among the factors")


def rows(max_degree):
    for n in range(2, max_degree + 1):
        for sp in enumerate_silver_polynomials(n):
            factors = factor(sp.poly)
            primitive, d = silver_primitivity_by_gcd(sp)
            yield {
                "degree": n,
                "bits": "".join(map(str, sp.bits)),
                "polynomial": str(sp.poly),
                "irreducible": len(factors) == 1,
                "factors": " * ".join(f"({f})" for f in factors),
                "primitive": primitive,
                "gcd": d,
                "pisot": pisot_status(sp, factors),
            }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=8)
    ap.add_argument("--csv", help="write the full table here")
    args = ap.parse_args()
    t0 = time.perf_counter()
    table = list(rows(args.max_degree))
    print(f"{'N':>2} {'total':>6} {'irred':>6} {'prim':>6} {'pisot':>6}")
    for n in range(2, args.max_degree + 1):
        sub = [r for r in table if r["degree"] == n]
        print(f"{n:>2} {len(sub):>6} {sum(r['irreducible'] for r in sub):>6} "
              f"{sum(r['primitive'] for r in sub):>6} {sum(r['pisot'] == 'pisot' for r in sub):>6}")
    print(f"({time.perf_counter() - t0:.2f}s)", file=sys.stderr)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(table[0]))
            w.writeheader()
            w.writerows(table)


if __name__ == "__main__":
    main()
