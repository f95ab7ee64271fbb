"""Closed-walk counts and their growth rate on the (3,4) tree.

The number of length-2n walks that start and end at a fixed vertex grows
like M0^(2n); the reciprocal of M0 is the local-survival critical value
of the branching random walk.  The exact integer counts let us watch the
2n-th roots climb toward sqrt(3) + sqrt(4).

Run:  python demos/demo_walk_growth.py
"""

import math

from pertree import (
    PeriodicDegreeSequence,
    enumerate_closed_walks,
    lambda_ell_period2,
    level_return_count,
    m0_estimates,
)


def main():
    seq = PeriodicDegreeSequence((3, 4))
    target = math.sqrt(3) + math.sqrt(4)

    table = m0_estimates(seq, 15)
    print("closed walks anchored at a degree-3 vertex of the (3,4) tree")
    print(f"{'2n':>4} {'count':>24} {'count^(1/2n)':>14} {'running max':>12}")
    for n, (count, root, rmax) in enumerate(
            zip(table.counts, table.roots, table.running_max()), start=1):
        print(f"{2 * n:>4} {count:>24} {root:>14.6f} {rmax:>12.6f}")
    print(f"limit target sqrt(3)+sqrt(4) = {target:.6f}")
    print(f"so every finite prefix gives 1/root >= lambda_ell "
          f"= {lambda_ell_period2(3, 4):.6f}\n")

    print("cross-check against exhaustive enumeration (short walks):")
    for two_n in (2, 4, 6, 8):
        brute = enumerate_closed_walks(seq, 0, two_n)
        assert brute == table.counts[two_n // 2 - 1]
        print(f"  length {two_n}: enumeration = DP = {brute}")
    print()

    print("level-return counts (paths from the root back to height 0):")
    for n in (1, 2, 3, 4):
        per_m, total = level_return_count(3, 4, n)
        print(f"  2n={2 * n}: per-m {per_m}, total {total}")
    d = 3
    _, total = level_return_count(d, d, 6)
    print(f"homogeneous sanity: (d=3, n=6) total {total} "
          f"= binom(12,6)*3^6 = {math.comb(12, 6) * d ** 6}")


if __name__ == "__main__":
    main()
