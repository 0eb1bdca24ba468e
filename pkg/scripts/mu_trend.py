"""Scan minimum of |q(rho)| over {-1,0,1}-polynomials of growing degree.

For Pisot silver numbers the minimum stabilises; the trend is printed per
degree.  Only evidence: it says nothing about degrees beyond the scan.

    python3 scripts/mu_trend.py --poly 011 --max-degree 12
"""
import argparse
import time
from fractions import Fraction

from silverline.integers import min_difference_scan
from silverline.polynomials import SilverPolynomial
from silverline.reals import silver_number


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--poly", default="011", help="bit string, e.g. 11, 111, 101, 011")
    ap.add_argument("--max-degree", type=int, default=12)
    args = ap.parse_args()
    sp = SilverPolynomial.from_string(args.poly)
    root = silver_number(sp, Fraction(1, 10**30))
    print(f"{'d':>3} {'min |q(rho)|':>14} {'zeros':>8} {'seconds':>8}")
    for d in range(1, args.max_degree + 1):
        t0 = time.perf_counter()
        scan = min_difference_scan(sp.poly, root, d)
        print(f"{d:>3} {scan.minimum_float:>14.9f} {scan.zero_count:>8} {time.perf_counter() - t0:>8.2f}")


if __name__ == "__main__":
    main()
