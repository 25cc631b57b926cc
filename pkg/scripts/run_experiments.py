#!/usr/bin/env python3
"""Desk-scale sieve experiments over digit classes of a recurrence base.

Runs the three empirical studies at increasing range sizes:
  - normalized discrepancy over progressions (decay across x),
  - almost-prime counts in a digit class against x / log x,
  - generalized von Mangoldt sums against the main term.

Usage:
    python3 scripts/run_experiments.py [--coeffs 1,1] [--xmax 1000000]
"""

import argparse
import math
import sys
import warnings

from recnum.base import make_context
from recnum.experiments import (
    GcdPreconditionWarning,
    almost_prime_count,
    bv_discrepancy,
    sieve_spf,
    von_mangoldt_sum,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--coeffs", default="1,1")
    ap.add_argument("--xmax", type=int, default=10**6)
    ap.add_argument("--s", type=int, default=2)
    ap.add_argument("--r", type=int, default=1)
    ap.add_argument("--exponent", type=float, default=0.3)
    args = ap.parse_args()

    coeffs = tuple(int(c) for c in args.coeffs.split(","))
    ctx = make_context(coeffs)
    xs = [x for x in (10**4, 10**5, 10**6, 10**7) if x <= args.xmax]

    print("== discrepancy over progressions ==")
    for x in xs:
        if x > 10**6:
            continue
        rep = bv_discrepancy(ctx, x, args.r, args.s, exponent=args.exponent)
        print(f"x={x:>9}  q<{rep.q_max + 1:>4}  total={rep.total:12.1f}  "
              f"normalized={rep.normalized:.5f}")

    print("== almost primes in the digit class ==")
    sieve = sieve_spf(min(args.xmax, 10**7))
    for x in xs:
        count = almost_prime_count(ctx, x, args.r, args.s, sieve)
        print(f"x={x:>9}  count={count:>9}  ratio to x/log x = "
              f"{count / (x / math.log(x)):.4f}")

    print("== generalized von Mangoldt sums ==")
    with warnings.catch_warnings():
        warnings.simplefilter("always", GcdPreconditionWarning)
        for x in xs:
            for ell in (2, 3):
                rep = von_mangoldt_sum(ctx, x, ell, args.r, args.s, sieve)
                print(f"x={x:>9}  ell={ell}  lhs={rep.lhs:14.1f}  "
                      f"main={rep.main_term:14.1f}  ratio={rep.ratio:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
