"""
Laurent polynomials on the unit sphere
======================================

On ||q|| = 1 a slice function is a pair of 2 pi periodic functions of the
angle.  Delayed Fejer means of those, rewritten with q^k and q^-k, give a
Laurent polynomial that approximates the function on every slice at once.
"""

import numpy as np

from slice_approx.approximation import laurent_approx_on_sphere
from slice_approx.geometry import UnitSphere, sample
from slice_approx.quaternion import qnorm
from slice_approx.slice_functions import LaurentPolynomial, SphereSliceFunction, evaluate

pts = sample(UnitSphere(), 2000, seed=0).points

g = LaurentPolynomial([[0, 0, 0, 0], [1, 0, 0, 0]], [[1, 0, 0, 0]])
approx = laurent_approx_on_sphere(g, 2)
print("q + 1/q reproduced, error", np.max(qnorm(evaluate(approx, pts) - evaluate(g, pts))))

# |sin theta| has a kink at the real points; the error still shrinks
f = SphereSliceFunction(lambda t: np.abs(np.sin(t)), lambda t: np.zeros_like(t), name="abs-sin")
for n in (8, 16, 32, 64):
    approx = laurent_approx_on_sphere(f, n)
    err = np.max(qnorm(evaluate(approx, pts) - evaluate(f, pts)))
    print(f"n={n:3}  degrees {approx.degrees}  sup error {err:.2e}")
