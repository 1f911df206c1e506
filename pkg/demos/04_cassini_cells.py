"""
Cassini cells
=============

A Cassini cell ||(q - x0)^2 + y0^2|| <= R^2 surrounds the sphere x0 + y0 S.
Functions built from powers of (q - x0)^2 + y0^2 are approximated by the same
convolution; its closed form acts on the expanded polynomial.
"""

import numpy as np

from slice_approx.approximation import cassini_operator_closed, convolve_pointwise
from slice_approx.error_analysis import AnalyticModulus, lipschitz_constant, verify_bound
from slice_approx.geometry import CassiniCell, sample
from slice_approx.kernels import DVP
from slice_approx.quaternion import qnorm
from slice_approx.slice_functions import CassiniSeries, cassini_to_polynomial, evaluate

cell = CassiniCell(1.0, 1.0, 2.0)
s = CassiniSeries(1.0, 1.0, [([0.5, 0, 0, 0], [0, 0, 0.5, 0]), ([0, 0, 0, 0.25], [0.1, 0, 0, 0])])
print("expanded degree:", cassini_to_polynomial(s).degree)
print("largest norm on the cell, M =", cell.M)

grid = sample(cell, 2000, seed=0)

# closed form against the quadrature definition
closed = evaluate(cassini_operator_closed(s, 6), grid.points[:50])
quad = convolve_pointwise(s, grid.points[:50], DVP(6))
print("closed vs quadrature:", np.max(qnorm(closed - quad)))

# the rotated points leave the cell but stay in the ball of radius M
L = lipschitz_constant(s, cell.M)
for n in (4, 16, 64):
    r = verify_bound(s, cassini_operator_closed(s, n), cell, AnalyticModulus(L), n, grid=grid)
    print(f"n={n:3}  error {r.sup_error:9.4f}  bound {r.bound:9.2f}  (R+1 form {r.extra['stated_bound']:8.2f})  {r.status}")
