"""Closed-form critical-value bounds for a few periodic trees.

Walks through the bound pipeline for period-2 and period-3 degree
sequences: the growth-rate value lambda_g, the oriented-branching upper
bound on lambda_1, and the local-survival lower bounds, including the
cubic whose largest root drives the period-3 case.

Run:  python demos/demo_bounds.py
"""

from pertree import (
    PeriodicDegreeSequence,
    bounds_report,
    cubic_real_roots,
    harmonic_weights_period2,
    harmonicity_residual,
    lambda_ell_period2,
)
from pertree.bounds import local_bound_cubic_coeffs


def show(degrees):
    seq = PeriodicDegreeSequence(degrees)
    rep = bounds_report(seq)
    print(f"tree {seq}:")
    print(f"  lambda_g          = {rep.lambda_g:.6f}")
    if rep.lambda1_upper is not None:
        print(f"  lambda_1 upper    = {rep.lambda1_upper:.6f}")
    if rep.lambda_ell_lower is not None:
        print(f"  lambda_ell lower  = {rep.lambda_ell_lower:.6f}")
    if rep.x0 is not None:
        print(f"  cubic largest root x0 = {rep.x0:.3f}")
    for note in rep.notes:
        print(f"  note: {note}")
    print()


def main():
    print("=== alternating (3,4) tree ===")
    show((3, 4))

    print("=== period-3 trees ===")
    for degs in [(2, 3, 4), (3, 4, 5), (6, 8, 10)]:
        show(degs)

    print("=== the period-3 cubic, spelled out for (2,3,4) ===")
    coeffs = local_bound_cubic_coeffs(2, 3, 4)
    res = cubic_real_roots(*map(float, coeffs))
    print(f"coefficients {coeffs}, discriminant {res.discriminant:.1f} > 0")
    print(f"all three roots positive: {[round(r, 4) for r in res.roots]}")
    print(f"bound = 1/sqrt(x0) = {res.roots[-1] ** -0.5:.4f}")
    print()

    print("=== harmonic weights on (3,4) just below the local bound ===")
    lam0 = lambda_ell_period2(3, 4)
    for lam in (0.20, 0.25, lam0):
        w = harmonic_weights_period2(3, 4, lam)
        res = harmonicity_residual(PeriodicDegreeSequence((3, 4)), lam, w)
        print(f"lam={lam:.6f}: g = {dict((k, round(v, 5)) for k, v in w.g_values.items())}"
              f"  max|residual| = {max(abs(r) for r in res):.2e}")
    print(f"(at lam0={lam0:.6f} the weights hit 1/sqrt(4)=0.5 and 1/sqrt(3)=0.57735;"
          " above lam0 the construction fails — that failure IS the bound)")


if __name__ == "__main__":
    main()
