"""
Approximation on a ball
=======================

The de la Vallee-Poussin operator turns q^l c_l into q^l rho_l c_l.  On the
ball of radius R its sup error is at most 3 (R + 1) L / sqrt(n) for an
L-Lipschitz function.  Here we watch the measured error against that bound.
"""

from slice_approx.approximation import dvp_operator_closed
from slice_approx.error_analysis import AnalyticModulus, verify_bound
from slice_approx.geometry import Ball, sample
from slice_approx.slice_functions import RightPolynomial

ball = Ball(0.0, 1.0)
grid = sample(ball, 4000, seed=0)

print(f"{'f':4} {'n':>5} {'sup error':>12} {'bound':>10} {'ratio':>8}")
for k in (1, 2, 3):
    f = RightPolynomial.monomial(k)
    for n in (4, 16, 64, 256):
        r = verify_bound(f, dvp_operator_closed(f, n), ball, AnalyticModulus(k), n, grid=grid)
        print(f"q^{k:<2} {n:5} {r.sup_error:12.3e} {r.bound:10.4f} {r.ratio:8.4f}  {r.status}")

# for the identity the error is exactly 1/(n+1), reached on the boundary
print("identity, n=16:", 1 / 17)
