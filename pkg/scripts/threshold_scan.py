#!/usr/bin/env python3
"""Scan the interval-supremum thresholds for the quadratic family (a, 1).

For each a, report the certified averaged supremum m, the shifted variant
m^(2) where its precondition holds, the threshold alpha^0.4886061, and
which of the two decay routes (m + 3, m^(2) + 2) beats the threshold.

Usage:
    python3 scripts/threshold_scan.py [--lo 40] [--hi 100]
"""

import argparse
import sys

from recnum.base import make_context
from recnum.bounds import m_closed_form, m_shifted, m_value, shift_modulus_limit

EXPONENT = 0.4886061


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lo", type=int, default=40)
    ap.add_argument("--hi", type=int, default=100)
    args = ap.parse_args()

    print(f"{'a':>4} {'m':>9} {'m^(2)':>9} {'thresh':>9}  m+3<t  m2+2<t  closed")
    for a in range(args.lo, args.hi + 1):
        ctx = make_context((a, 1))
        thresh = ctx.alpha**EXPONENT
        m = m_value(ctx)
        if 0.5 < shift_modulus_limit(ctx):
            m2 = m_shifted(ctx, 2)
            m2_txt, m2_pass = f"{m2:9.4f}", "yes" if m2 + 2 < thresh else "NO"
        else:
            m2_txt, m2_pass = "      n/a", "n/a"
        print(f"{a:>4} {m:9.4f} {m2_txt} {thresh:9.4f}  "
              f"{'yes' if m + 3 < thresh else 'NO':>5}  {m2_pass:>6}  "
              f"{m_closed_form(a):7.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
